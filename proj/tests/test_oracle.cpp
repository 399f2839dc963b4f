#include <gtest/gtest.h>

#include <thread>

#include "legrecon/oracle.hpp"
#include "oracles.hpp"

using namespace legrecon;

namespace {

MonicPoly poly(std::vector<u64> lower, u64 p) { return MonicPoly(std::move(lower), PrimeModulus(p)); }

}  // namespace

TEST(Oracle, examples) {
    OracleSession s(poly({3}, 7));
    EXPECT_EQ(s.query(4), 0);
    EXPECT_EQ(s.query(1), 1);
    OracleSession patched(poly({3}, 7), 1.0, 0, OracleMode::kPatched);
    EXPECT_EQ(patched.query(4), 1);
}

TEST(Oracle, exact_answers_match_reference) {
    for (u64 p : {7ULL, 13ULL, 101ULL}) {
        const auto sq = oracle::squares(p);
        const MonicPoly f = poly({2, 5, 1}, p);
        ASSERT_TRUE(is_squarefree(f));
        OracleSession s(f), t(f, 1.0, 99, OracleMode::kPatched);
        const oracle::Poly ref = oracle::monic({2, 5, 1});
        for (u64 x = 0; x < p; ++x) {
            const u64 v = oracle::eval(ref, x, p);
            ASSERT_EQ(s.query(x), oracle::chi(v, p, sq));
            ASSERT_EQ(t.query(FpElement(x, PrimeModulus(p))), oracle::chi_patched(v, p, sq));
        }
    }
}

TEST(Oracle, rejects_bad_construction) {
    EXPECT_THROW(OracleSession(poly({1, 2}, 7)), std::invalid_argument);  // (X+1)^2
    EXPECT_THROW(OracleSession(poly({3}, 7), 0.5), std::invalid_argument);
    EXPECT_THROW(OracleSession(poly({3}, 7), 1.01), std::invalid_argument);
    EXPECT_NO_THROW(OracleSession(poly({3}, 7), 0.51));
}

TEST(Oracle, query_count_is_exact) {
    OracleSession s(poly({3}, 101), 0.8, 4);
    for (u64 x = 0; x < 250; ++x) s.query(x % 101);
    EXPECT_EQ(s.query_count(), 250u);
    s.majority_estimate(5, 7);
    EXPECT_EQ(s.query_count(), 257u);
}

TEST(Oracle, query_count_is_exact_under_concurrency) {
    OracleSession s(poly({3}, 101), 0.7, 1);
    std::vector<std::thread> workers;
    for (int w = 0; w < 4; ++w) {
        workers.emplace_back([&s, w] {
            for (u64 i = 0; i < 5000; ++i) s.query((i + w) % 101);
        });
    }
    for (auto& t : workers) t.join();
    EXPECT_EQ(s.query_count(), 20000u);
}

TEST(Oracle, patched_differs_only_at_roots) {
    const MonicPoly f = poly({6, 0}, 13);  // X^2 - 6 (6 is not a square mod 13)
    const MonicPoly g = poly({12, 0}, 13);  // X^2 - 1, roots 1 and 12
    for (const MonicPoly& h : {f, g}) {
        OracleSession sgn(h), pat(h, 1.0, 0, OracleMode::kPatched);
        for (u64 x = 0; x < 13; ++x) {
            const int a = sgn.query(x), b = pat.query(x);
            if (eval(h, FpElement(x, PrimeModulus(13))).value() == 0) {
                EXPECT_EQ(a, 0);
                EXPECT_EQ(b, 1);
            } else {
                EXPECT_EQ(a, b);
            }
        }
    }
}

TEST(Oracle, exact_sessions_are_identical) {
    const MonicPoly f = poly({17, 3}, 101);
    OracleSession a(f, 1.0, 1), b(f, 1.0, 12345);
    for (u64 x = 0; x < 101; ++x) ASSERT_EQ(a.query(x), b.query(x));
}

TEST(Oracle, noise_is_reproducible_and_order_independent) {
    const MonicPoly f = poly({17, 3}, 101);
    OracleSession a(f, 0.6, 77), b(f, 0.6, 77);
    std::vector<int> forward(101 * 3), backward(101 * 3);
    for (int rep = 0; rep < 3; ++rep) {
        for (u64 x = 0; x < 101; ++x) forward[rep * 101 + x] = a.query(x);
    }
    for (int rep = 0; rep < 3; ++rep) {
        for (u64 x = 101; x-- > 0;) backward[rep * 101 + x] = b.query(x);
    }
    EXPECT_EQ(forward, backward);
}

TEST(Oracle, wrong_answers_stay_in_codomain_and_are_wrong) {
    const MonicPoly f = poly({3}, 101);
    OracleSession noisy(f, 0.55, 3), exact(f);
    OracleSession pnoisy(f, 0.55, 3, OracleMode::kPatched), pexact(f, 1.0, 0, OracleMode::kPatched);
    int wrong = 0;
    for (int rep = 0; rep < 20; ++rep) {
        for (u64 x = 0; x < 101; ++x) {
            const int v = noisy.query(x);
            ASSERT_TRUE(v >= -1 && v <= 1);
            wrong += v != exact.query(x);
            const int w = pnoisy.query(x);
            ASSERT_TRUE(w == -1 || w == 1);
        }
    }
    // 2020 draws with error rate 0.45; the count sits far from 0 and 2020.
    EXPECT_GT(wrong, 700);
    EXPECT_LT(wrong, 1120);
}

TEST(MajorityEstimate, exact_oracle) {
    OracleSession s(poly({3}, 7));
    EXPECT_EQ(s.majority_estimate(1, 1), s.query(1));
    const auto before = s.query_count();
    EXPECT_EQ(s.majority_estimate(4, 5), 0);
    EXPECT_EQ(s.query_count(), before + 5);
    EXPECT_THROW(s.majority_estimate(1, 0), std::invalid_argument);
    EXPECT_THROW(s.majority_estimate(1, 4), std::invalid_argument);
}

TEST(MajorityEstimate, failure_rate_below_one_in_a_thousand) {
    const MonicPoly f = poly({3}, 101);
    const int truth = oracle::chi(4, 101, oracle::squares(101));
    int failures = 0;
    for (std::uint64_t seed = 0; seed < 10000; ++seed) {
        OracleSession s(f, 0.9, seed);
        failures += s.majority_estimate(1, 51) != truth;
    }
    EXPECT_LT(failures, 10);
}
