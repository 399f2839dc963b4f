#include "legrecon/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace legrecon {

namespace {

using Clock = std::chrono::steady_clock;

// Oracle answers for the prefix x = 1, 2, ..., filled(); x = p stands for 0.
// Points are queried once, in order, and reused by every candidate.
class AnswerCache {
public:
    AnswerCache(OracleSession& session, unsigned repetitions)
        : session_(session), repetitions_(repetitions) {}

    void fill_to(u64 upto) {
        for (u64 x = answers_.size() + 1; x <= upto; ++x) {
            const int a = repetitions_ > 1 ? session_.majority_estimate(x, repetitions_) : session_.query(x);
            answers_.push_back(static_cast<std::int8_t>(a));
        }
    }
    std::span<const std::int8_t> prefix(u64 len) const { return {answers_.data(), len}; }
    u64 filled() const noexcept { return answers_.size(); }

private:
    OracleSession& session_;
    unsigned repetitions_;
    std::vector<std::int8_t> answers_;
};

// sum_{x=1}^{W} answer(x) chi(g(x)) for each selected candidate, W = answers.size().
std::vector<std::int64_t> correlations(const CandidateSet& candidates, std::span<const std::size_t> subset,
                                       std::span<const std::int8_t> answers, const QuadraticCharacter& chi,
                                       const ScanOptions& scan) {
    std::vector<std::int64_t> out(subset.size(), 0);
    for_each_block(subset.size(), scan, [&](u64, u64 begin, u64 end) {
        for (u64 i = begin; i < end; ++i) {
            ForwardDifferenceEvaluator ev(candidates.coeffs(subset[i]), candidates.modulus, 1);
            std::int64_t sum = 0;
            for (const std::int8_t a : answers) {
                sum += a * chi(ev.value());
                ev.step();
            }
            out[i] = sum;
        }
    });
    return out;
}

std::vector<std::size_t> all_indices(std::size_t n) {
    std::vector<std::size_t> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = i;
    return v;
}

struct Argmax {
    std::size_t index = 0;  // position within the subset
    bool ambiguous = false;
};

// First maximum in canonical order wins.
Argmax argmax(std::span<const std::int64_t> sums) {
    Argmax best;
    for (std::size_t i = 1; i < sums.size(); ++i) {
        if (sums[i] > sums[best.index]) {
            best.index = i;
            best.ambiguous = false;
        } else if (sums[i] == sums[best.index]) {
            best.ambiguous = true;
        }
    }
    return best;
}

void check_degree(unsigned d) {
    if (d == 0) throw std::invalid_argument("degree must be >= 1");
}

// Brute force needs no windows; record them only when they exist for (p, d).
AlgorithmParams params_if_defined(const PrimeModulus& m, unsigned d) {
    try {
        return AlgorithmParams::make(m, d);
    } catch (const std::invalid_argument&) {
        AlgorithmParams params;
        params.p = m.value();
        params.d = d;
        return params;
    }
}

RecoveryReport::Duration since(Clock::time_point start) { return Clock::now() - start; }

struct Stage1 {
    std::vector<std::size_t> survivors;
    u64 work = 0;
};

Stage1 run_stage1(const CandidateSet& candidates, AnswerCache& cache, const AlgorithmParams& params,
                  const QuadraticCharacter& chi, const ScanOptions& scan) {
    cache.fill_to(params.n_eff);
    const auto subset = all_indices(candidates.size());
    const auto sums = correlations(candidates, subset, cache.prefix(params.n_eff), chi, scan);
    Stage1 out;
    for (std::size_t i = 0; i < sums.size(); ++i) {
        if (std::abs(sums[i]) >= params.stage1_threshold) out.survivors.push_back(i);
    }
    out.work = candidates.size() * params.n_eff;
    return out;
}

}  // namespace

AlgorithmParams AlgorithmParams::make(const PrimeModulus& modulus, unsigned d, double epsilon) {
    if (d == 0) throw std::invalid_argument("degree must be >= 1");
    if (!(epsilon > 0)) throw std::invalid_argument("epsilon must be positive");
    AlgorithmParams params;
    params.epsilon = epsilon;
    params.p = modulus.value();
    params.d = d;
    const double pd = static_cast<double>(params.p);
    const double log2p = std::log(pd) * std::log(pd);
    params.n_window = static_cast<u64>(std::ceil(d * log2p));
    params.m_window = static_cast<u64>(std::ceil(d * std::sqrt(pd) * log2p));
    params.n_eff = std::min(params.n_window, params.p);
    params.m_eff = std::min(params.m_window, params.p);
    if (params.n_eff <= d) {
        throw std::invalid_argument("stage-1 window must exceed the degree (p too small for this d)");
    }
    params.stage1_threshold = static_cast<std::int64_t>(params.n_eff) - d;
    params.stage2_threshold = static_cast<std::int64_t>(params.m_eff) - d;
    return params;
}

std::string_view algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::kBruteForce: return "brute";
        case Algorithm::kShortWindow: return "short";
        case Algorithm::kTwoStage: return "two-stage";
    }
    return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
    if (name == "brute") return Algorithm::kBruteForce;
    if (name == "short") return Algorithm::kShortWindow;
    if (name == "two-stage") return Algorithm::kTwoStage;
    throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

RecoveryReport brute_force_recover(OracleSession& session, unsigned d, const RecoveryOptions& opts) {
    check_degree(d);
    const auto start = Clock::now();
    const PrimeModulus& m = session.modulus();
    const u64 p = m.value();
    opts.scan.budget.check(power_as_double(p, d + 1), "brute-force recovery p^(d+1)");

    RecoveryReport report;
    report.algorithm = Algorithm::kBruteForce;
    report.params = params_if_defined(m, d);
    const u64 queries_before = session.query_count();

    const CandidateSet candidates = squarefree_candidates(m, d, opts.scan.budget);
    const QuadraticCharacter chi(m);
    AnswerCache cache(session, opts.repetitions);
    cache.fill_to(p);
    const auto subset = all_indices(candidates.size());
    const auto sums = correlations(candidates, subset, cache.prefix(p), chi, opts.scan);
    const Argmax best = argmax(sums);

    report.recovered = candidates.poly(best.index);
    report.ambiguous = best.ambiguous;
    report.candidates = candidates.size();
    report.survivors_stage1 = candidates.size();
    report.survivors_stage2 = 1;
    report.work = candidates.size() * p;
    report.distinct_points = cache.filled();
    report.total_queries = session.query_count() - queries_before;
    report.total_time = report.stage1_time = since(start);
    return report;
}

std::vector<MonicPoly> stage1_survivors(OracleSession& session, unsigned d, const AlgorithmParams& params,
                                        const RecoveryOptions& opts) {
    check_degree(d);
    const CandidateSet candidates = squarefree_candidates(session.modulus(), d, opts.scan.budget);
    const QuadraticCharacter chi(session.modulus());
    AnswerCache cache(session, opts.repetitions);
    const Stage1 stage = run_stage1(candidates, cache, params, chi, opts.scan);
    std::vector<MonicPoly> out;
    out.reserve(stage.survivors.size());
    for (std::size_t i : stage.survivors) out.push_back(candidates.poly(i));
    return out;
}

RecoveryReport two_stage_recover(OracleSession& session, unsigned d, const AlgorithmParams& params,
                                 const RecoveryOptions& opts) {
    check_degree(d);
    if (params.d != d || params.p != session.modulus().value()) {
        throw std::invalid_argument("algorithm parameters do not match the instance");
    }
    const auto start = Clock::now();
    const PrimeModulus& m = session.modulus();
    const u64 p = m.value();
    opts.scan.budget.check(power_as_double(p, d) * static_cast<double>(params.n_eff), "two-stage stage 1");

    RecoveryReport report;
    report.algorithm = Algorithm::kTwoStage;
    report.params = params;
    const u64 queries_before = session.query_count();

    const CandidateSet candidates = squarefree_candidates(m, d, opts.scan.budget);
    const QuadraticCharacter chi(m);
    AnswerCache cache(session, opts.repetitions);

    Stage1 stage1 = run_stage1(candidates, cache, params, chi, opts.scan);
    report.candidates = candidates.size();
    report.survivors_stage1 = stage1.survivors.size();
    report.work = stage1.work;
    report.stage1_time = since(start);

    const auto stage2_start = Clock::now();
    cache.fill_to(params.m_eff);
    const auto sums2 = correlations(candidates, stage1.survivors, cache.prefix(params.m_eff), chi, opts.scan);
    report.work += stage1.survivors.size() * params.m_eff;
    std::vector<std::size_t> passed;
    for (std::size_t i = 0; i < sums2.size(); ++i) {
        if (sums2[i] >= params.stage2_threshold) passed.push_back(stage1.survivors[i]);
    }
    report.survivors_stage2 = passed.size();

    if (passed.size() == 1) {
        report.recovered = candidates.poly(passed.front());
    } else {
        // Thresholds did not isolate a single candidate: argmax of the
        // full-range correlation over whatever is left.
        report.fallback_used = true;
        std::vector<std::size_t> pool = !passed.empty()            ? passed
                                        : !stage1.survivors.empty() ? stage1.survivors
                                                                    : all_indices(candidates.size());
        cache.fill_to(p);
        const auto sums = correlations(candidates, pool, cache.prefix(p), chi, opts.scan);
        report.work += pool.size() * p;
        const Argmax best = argmax(sums);
        report.recovered = candidates.poly(pool[best.index]);
        report.ambiguous = best.ambiguous;
    }
    report.stage2_time = since(stage2_start);
    report.distinct_points = cache.filled();
    report.total_queries = session.query_count() - queries_before;
    report.total_time = since(start);
    return report;
}

RecoveryReport short_window_recover(OracleSession& session, unsigned d, const RecoveryOptions& opts) {
    check_degree(d);
    const auto start = Clock::now();
    const PrimeModulus& m = session.modulus();
    const AlgorithmParams params = AlgorithmParams::make(m, d);
    opts.scan.budget.check(power_as_double(m.value(), d) * static_cast<double>(params.m_eff),
                           "short-window recovery");

    RecoveryReport report;
    report.algorithm = Algorithm::kShortWindow;
    report.params = params;
    const u64 queries_before = session.query_count();

    const CandidateSet candidates = squarefree_candidates(m, d, opts.scan.budget);
    const QuadraticCharacter chi(m);
    AnswerCache cache(session, opts.repetitions);
    cache.fill_to(params.m_eff);
    const auto subset = all_indices(candidates.size());
    const auto sums = correlations(candidates, subset, cache.prefix(params.m_eff), chi, opts.scan);
    const Argmax best = argmax(sums);

    report.recovered = candidates.poly(best.index);
    report.ambiguous = best.ambiguous;
    report.candidates = candidates.size();
    report.survivors_stage1 = candidates.size();
    report.survivors_stage2 = 1;
    report.work = candidates.size() * params.m_eff;
    report.distinct_points = cache.filled();
    report.total_queries = session.query_count() - queries_before;
    report.total_time = report.stage1_time = since(start);
    return report;
}

RecoveryReport recover(Algorithm algorithm, OracleSession& session, unsigned d, const AlgorithmParams& params,
                       const RecoveryOptions& opts) {
    switch (algorithm) {
        case Algorithm::kBruteForce: return brute_force_recover(session, d, opts);
        case Algorithm::kShortWindow: return short_window_recover(session, d, opts);
        case Algorithm::kTwoStage: return two_stage_recover(session, d, params, opts);
    }
    throw std::invalid_argument("unknown algorithm");
}

u64 squarefree_count_formula(const PrimeModulus& modulus, unsigned d) {
    if (d == 0) throw std::invalid_argument("degree must be >= 1");
    const u64 p = modulus.value();
    if (d == 1) return p;
    u128 lower = 1;
    for (unsigned i = 0; i + 1 < d; ++i) {
        lower *= p;
        if (lower > (u128{1} << 64) / p) throw std::overflow_error("p^d exceeds 64 bits");
    }
    return static_cast<u64>(lower * p - lower);
}

u64 squarefree_count_enumerated(const PrimeModulus& modulus, unsigned d, const Budget& budget) {
    const MonicSpace space(modulus, d, budget);
    u64 count = 0;
    space.for_each(0, space.size(), true, [&](u64, std::span<const u64>) { ++count; });
    return count;
}

unsigned query_lower_bound(const PrimeModulus& modulus, unsigned d, const Budget& budget) {
    if (d == 0) throw std::invalid_argument("degree must be >= 1");
    const double space = power_as_double(modulus.value(), d);
    if (space > 1.8e19) {
        // Count does not fit in 64 bits; log_3(p^{d-1}(p-1)).
        const long double p = modulus.value();
        const long double logs = (d - 1) * std::log(p) + std::log(p - 1);
        return static_cast<unsigned>(std::ceil(logs / std::log(3.0L)));
    }
    const u64 count = space <= budget.max_ops ? squarefree_count_enumerated(modulus, d, budget)
                                              : squarefree_count_formula(modulus, d);
    unsigned t = 0;
    for (u128 power = 1; power < count; power *= 3) ++t;
    return t;
}

MonicPoly random_squarefree(const PrimeModulus& modulus, unsigned d, std::uint64_t seed) {
    if (d == 0) throw std::invalid_argument("degree must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<u64> coeff(0, modulus.value() - 1);
    std::vector<u64> c(d);
    while (true) {
        for (auto& s : c) s = coeff(rng);
        if (is_squarefree_raw(c, modulus)) return MonicPoly(c, modulus);
    }
}

}  // namespace legrecon
