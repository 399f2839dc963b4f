#include <gtest/gtest.h>

#include <cmath>

#include "legrecon/reconstruct.hpp"
#include "oracles.hpp"

using namespace legrecon;

namespace {

MonicPoly poly(std::vector<u64> lower, u64 p) { return MonicPoly(std::move(lower), PrimeModulus(p)); }

oracle::Poly as_oracle(const MonicPoly& f) {
    return oracle::monic(std::vector<u64>(f.coeffs().begin(), f.coeffs().end()));
}

/// Survivors recomputed from scratch: correlation over [1, N] with the true answers.
std::vector<oracle::Poly> reference_stage1(const MonicPoly& f, unsigned d, u64 n, u64 p) {
    const auto sq = oracle::squares(p);
    const oracle::Poly F = as_oracle(f);
    std::vector<oracle::Poly> out;
    for (const oracle::Poly& g : oracle::all_monic(d, p)) {
        if (!oracle::squarefree(g, p)) continue;
        std::int64_t s = 0;
        for (u64 x = 1; x <= n; ++x) s += oracle::chi(oracle::eval(F, x, p), p, sq) * oracle::chi(oracle::eval(g, x, p), p, sq);
        if (std::llabs(s) >= static_cast<std::int64_t>(n - d)) out.push_back(g);
    }
    return out;
}

}  // namespace

TEST(AlgorithmParams, windows) {
    const AlgorithmParams a = AlgorithmParams::make(PrimeModulus(10007), 1);
    const double l = std::log(10007.0);
    EXPECT_EQ(a.n_window, static_cast<u64>(std::ceil(l * l)));
    EXPECT_EQ(a.m_window, static_cast<u64>(std::ceil(std::sqrt(10007.0) * l * l)));
    EXPECT_EQ(a.n_window, 85u);
    EXPECT_EQ(a.m_eff, a.m_window);
    EXPECT_LT(a.m_eff, 10007u);
    EXPECT_EQ(a.stage1_threshold, 84);
    EXPECT_EQ(a.stage2_threshold, static_cast<std::int64_t>(a.m_eff) - 1);

    const AlgorithmParams b = AlgorithmParams::make(PrimeModulus(101), 1);
    EXPECT_EQ(b.n_eff, 22u);
    EXPECT_EQ(b.m_window, 215u);
    EXPECT_EQ(b.m_eff, 101u);
    EXPECT_LE(b.n_eff, b.m_eff);

    EXPECT_THROW(AlgorithmParams::make(PrimeModulus(3), 3), std::invalid_argument);  // N_eff = 3 = d
}

TEST(ParseAlgorithm, names) {
    for (Algorithm a : {Algorithm::kBruteForce, Algorithm::kShortWindow, Algorithm::kTwoStage}) {
        EXPECT_EQ(parse_algorithm(algorithm_name(a)), a);
    }
    EXPECT_THROW(parse_algorithm("fast"), std::invalid_argument);
}

TEST(BruteForce, examples) {
    {
        OracleSession s(poly({3}, 7));
        const RecoveryReport r = brute_force_recover(s, 1);
        ASSERT_TRUE(r.recovered);
        EXPECT_EQ(*r.recovered, poly({3}, 7));
        EXPECT_EQ(r.total_queries, 7u);
        EXPECT_EQ(r.distinct_points, 7u);
        EXPECT_FALSE(r.ambiguous);
    }
    {
        OracleSession s(poly({0}, 7));
        EXPECT_EQ(*brute_force_recover(s, 1).recovered, poly({0}, 7));
    }
    {
        OracleSession s(poly({1, 1}, 13));
        const RecoveryReport r = brute_force_recover(s, 2);
        EXPECT_EQ(*r.recovered, poly({1, 1}, 13));
        EXPECT_EQ(r.total_queries, 13u);
        EXPECT_EQ(r.candidates, 156u);
        EXPECT_EQ(r.work, 156u * 13u);
        EXPECT_FALSE(r.ambiguous);
    }
}

TEST(BruteForce, never_ambiguous_for_exact_oracle) {
    for (auto [p, d] : {std::pair<u64, unsigned>{3, 1}, {5, 1}, {7, 1}, {11, 1}, {7, 2}, {11, 2}, {13, 2}}) {
        const PrimeModulus m(p);
        for (const MonicPoly& f : enumerate_monic(d, m, true)) {
            OracleSession s(f);
            const RecoveryReport r = brute_force_recover(s, d);
            ASSERT_EQ(*r.recovered, f);
            ASSERT_FALSE(r.ambiguous) << to_string(f) << " p=" << p;
        }
    }
}

TEST(BruteForce, ties_are_flagged_when_answers_collide) {
    // Over F_5 some square-free quadratics share every character value.
    const PrimeModulus m(5);
    std::size_t flagged = 0;
    for (const MonicPoly& f : enumerate_monic(2, m, true)) {
        OracleSession s(f);
        const RecoveryReport r = brute_force_recover(s, 2);
        if (r.ambiguous) {
            ++flagged;
        } else {
            EXPECT_EQ(*r.recovered, f);
        }
    }
    EXPECT_EQ(flagged, 10u);
}

TEST(Stage1, matches_reference_and_contains_hidden) {
    for (auto [p, d] : {std::pair<u64, unsigned>{101, 1}, {13, 2}, {31, 2}}) {
        const PrimeModulus m(p);
        const AlgorithmParams params = AlgorithmParams::make(m, d);
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const MonicPoly f = random_squarefree(m, d, seed);
            OracleSession s(f);
            const auto got = stage1_survivors(s, d, params);
            const auto ref = reference_stage1(f, d, params.n_eff, p);
            ASSERT_EQ(got.size(), ref.size());
            bool has_hidden = false;
            for (std::size_t i = 0; i < got.size(); ++i) {
                ASSERT_EQ(as_oracle(got[i]), ref[i]);
                has_hidden |= got[i] == f;
            }
            EXPECT_TRUE(has_hidden);
            EXPECT_LE(s.query_count(), params.n_eff);
        }
    }
}

TEST(Stage1, full_window_keeps_only_the_argmax) {
    const PrimeModulus m(7);
    AlgorithmParams params = AlgorithmParams::make(m, 1);
    params.n_eff = 7;
    params.stage1_threshold = 6;
    OracleSession s(poly({2}, 7));
    // Window [1, 7] covers all of F_7 (x = 7 stands for 0).
    const auto got = stage1_survivors(s, 1, params);
    ASSERT_EQ(got.size(), 1u);
    EXPECT_EQ(got[0], poly({2}, 7));
}

TEST(TwoStage, examples) {
    {
        const PrimeModulus m(10007);
        const AlgorithmParams params = AlgorithmParams::make(m, 1);
        const MonicPoly f = random_squarefree(m, 1, 42);
        OracleSession s(f);
        const RecoveryReport r = two_stage_recover(s, 1, params);
        EXPECT_EQ(*r.recovered, f);
        EXPECT_LE(r.distinct_points, params.m_eff);
        EXPECT_LT(params.m_eff, 10007u);
        EXPECT_EQ(r.total_queries, s.query_count());
    }
    const PrimeModulus m101(101);
    const AlgorithmParams p1 = AlgorithmParams::make(m101, 1);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const MonicPoly f = random_squarefree(m101, 1, seed);
        OracleSession s(f);
        ASSERT_EQ(*two_stage_recover(s, 1, p1).recovered, f) << seed;
    }
    const AlgorithmParams p2 = AlgorithmParams::make(m101, 2);
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const MonicPoly f = random_squarefree(m101, 2, seed);
        OracleSession s(f);
        const RecoveryReport r = two_stage_recover(s, 2, p2);
        ASSERT_EQ(*r.recovered, f) << seed;
        EXPECT_EQ(r.candidates, 10100u);
    }
}

TEST(TwoStage, hidden_passes_stage2_threshold) {
    for (auto [p, d] : {std::pair<u64, unsigned>{1009, 1}, {10007, 1}, {101, 2}}) {
        const PrimeModulus m(p);
        const AlgorithmParams params = AlgorithmParams::make(m, d);
        const auto sq = oracle::squares(p);
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const oracle::Poly F = as_oracle(random_squarefree(m, d, seed));
            std::int64_t s = 0;
            for (u64 x = 1; x <= params.m_eff; ++x) s += std::abs(oracle::chi(oracle::eval(F, x, p), p, sq));
            ASSERT_GE(s, params.stage2_threshold);
        }
    }
}

TEST(ShortWindow, examples) {
    const PrimeModulus m(1009);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const MonicPoly f = random_squarefree(m, 1, seed);
        OracleSession s(f);
        ASSERT_EQ(*short_window_recover(s, 1).recovered, f);
    }
    const PrimeModulus m2(10007);
    const MonicPoly f = random_squarefree(m2, 1, 3);
    OracleSession s(f);
    const RecoveryReport r = short_window_recover(s, 1);
    EXPECT_EQ(*r.recovered, f);
    EXPECT_EQ(r.work, r.candidates * r.params.m_eff);
}

TEST(Recover, algorithms_agree_and_respect_the_query_floor) {
    for (auto [p, d] : {std::pair<u64, unsigned>{7, 1}, {101, 1}, {1009, 1}, {13, 2}, {31, 2}}) {
        const PrimeModulus m(p);
        const AlgorithmParams params = AlgorithmParams::make(m, d);
        const unsigned floor = query_lower_bound(m, d);
        for (std::uint64_t seed = 0; seed < 8; ++seed) {
            const MonicPoly f = random_squarefree(m, d, seed);
            std::uint64_t brute_queries = 0;
            for (Algorithm a : {Algorithm::kBruteForce, Algorithm::kShortWindow, Algorithm::kTwoStage}) {
                OracleSession s(f);
                const RecoveryReport r = recover(a, s, d, params);
                ASSERT_TRUE(r.recovered);
                ASSERT_EQ(*r.recovered, f) << algorithm_name(a) << " p=" << p << " seed=" << seed;
                ASSERT_GE(r.total_queries, floor);
                ASSERT_EQ(r.total_queries, s.query_count());
                ASSERT_LE(r.distinct_points, p);
                if (a == Algorithm::kBruteForce) brute_queries = r.total_queries;
                if (a == Algorithm::kTwoStage && params.m_eff < p && !r.fallback_used) {
                    ASSERT_LE(r.total_queries, brute_queries);
                }
            }
        }
    }
}

TEST(Recover, independent_of_thread_count) {
    const PrimeModulus m(101);
    const AlgorithmParams params = AlgorithmParams::make(m, 2);
    for (Algorithm a : {Algorithm::kBruteForce, Algorithm::kShortWindow, Algorithm::kTwoStage}) {
        RecoveryReport first;
        for (unsigned threads : {1u, 2u, 8u}) {
            RecoveryOptions opts;
            opts.scan.threads = threads;
            OracleSession s(random_squarefree(m, 2, 5));
            const RecoveryReport r = recover(a, s, 2, params, opts);
            if (threads == 1) {
                first = r;
                continue;
            }
            EXPECT_EQ(r.recovered, first.recovered);
            EXPECT_EQ(r.survivors_stage1, first.survivors_stage1);
            EXPECT_EQ(r.survivors_stage2, first.survivors_stage2);
            EXPECT_EQ(r.total_queries, first.total_queries);
            EXPECT_EQ(r.work, first.work);
        }
    }
}

TEST(Recover, budget_guard) {
    const PrimeModulus m(1009);
    RecoveryOptions opts;
    opts.scan.budget.max_ops = 1e6;
    OracleSession s(random_squarefree(m, 2, 0));
    EXPECT_THROW(brute_force_recover(s, 2, opts), BudgetExceeded);
}

TEST(Recover, survivor_count_scaling) {
    // max over seeds of T / (sqrt(p) ln p) stays below one constant.
    for (u64 p : {101ULL, 1009ULL, 10007ULL}) {
        const PrimeModulus m(p);
        const AlgorithmParams params = AlgorithmParams::make(m, 1);
        std::size_t worst = 0;
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            OracleSession s(random_squarefree(m, 1, seed));
            worst = std::max(worst, stage1_survivors(s, 1, params).size());
        }
        EXPECT_LE(static_cast<double>(worst) / (std::sqrt(static_cast<double>(p)) * std::log(static_cast<double>(p))), 1.0)
            << p;
    }
}

TEST(QueryLowerBound, examples) {
    EXPECT_EQ(query_lower_bound(PrimeModulus(7), 1), 2u);
    EXPECT_EQ(query_lower_bound(PrimeModulus(3), 1), 1u);
    EXPECT_EQ(query_lower_bound(PrimeModulus(5), 2), 3u);
    // 10007^2 - 10007 candidates by formula, beyond enumeration.
    EXPECT_EQ(query_lower_bound(PrimeModulus(10007), 3), 26u);
}

TEST(SquarefreeCount, formula_matches_enumeration) {
    for (u64 p : {3ULL, 5ULL, 7ULL, 11ULL, 13ULL}) {
        const PrimeModulus m(p);
        for (unsigned d = 1; d <= 3; ++d) {
            std::uint64_t ref = 0;
            if (d <= 2 || p <= 7) {
                for (const oracle::Poly& f : oracle::all_monic(d, p)) ref += oracle::squarefree(f, p);
                EXPECT_EQ(squarefree_count_formula(m, d), ref) << p << " " << d;
            }
            EXPECT_EQ(squarefree_count_formula(m, d), squarefree_count_enumerated(m, d));
        }
    }
}

TEST(RandomSquarefree, seeded_and_valid) {
    const PrimeModulus m(31);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const MonicPoly f = random_squarefree(m, 3, seed);
        ASSERT_TRUE(is_squarefree(f));
        ASSERT_EQ(f, random_squarefree(m, 3, seed));
    }
}
