#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "legrecon/oracle.hpp"
#include "legrecon/parallel.hpp"
#include "legrecon/poly.hpp"

namespace legrecon {

/// Windows and thresholds of the two-stage filter. Logarithms are natural and
/// windows are clamped to p.
struct AlgorithmParams {
    double epsilon = 0.5;
    u64 p = 0;
    unsigned d = 0;
    u64 n_window = 0;  // ceil(d ln^2 p)
    u64 m_window = 0;  // ceil(d sqrt(p) ln^2 p)
    u64 n_eff = 0;
    u64 m_eff = 0;
    std::int64_t stage1_threshold = 0;  // n_eff - d
    std::int64_t stage2_threshold = 0;  // m_eff - d

    /// Throws std::invalid_argument if the stage-1 window is not larger than d.
    static AlgorithmParams make(const PrimeModulus& modulus, unsigned d, double epsilon = 0.5);
};

enum class Algorithm { kBruteForce, kShortWindow, kTwoStage };

std::string_view algorithm_name(Algorithm a);
/// "brute", "short", "two-stage"; throws std::invalid_argument otherwise.
Algorithm parse_algorithm(std::string_view name);

struct RecoveryReport {
    using Duration = std::chrono::duration<double, std::milli>;

    Algorithm algorithm = Algorithm::kTwoStage;
    AlgorithmParams params;
    std::optional<MonicPoly> recovered;
    std::uint64_t candidates = 0;        // square-free candidates scanned
    std::uint64_t survivors_stage1 = 0;  // T
    std::uint64_t survivors_stage2 = 0;
    std::uint64_t total_queries = 0;
    std::uint64_t distinct_points = 0;
    std::uint64_t work = 0;  // sum over candidates of window lengths evaluated
    bool fallback_used = false;
    bool ambiguous = false;  // tie at the maximum, broken lexicographically
    Duration stage1_time{};
    Duration stage2_time{};
    Duration total_time{};
};

/// Per-run knobs. `repetitions` > 1 answers each point by majority vote
/// (best effort for noisy oracles).
struct RecoveryOptions {
    ScanOptions scan;
    unsigned repetitions = 1;
};

/// Queries every point once, returns the square-free g maximizing the
/// full-range correlation. Budget covers p^{d+1}.
RecoveryReport brute_force_recover(OracleSession& session, unsigned d, const RecoveryOptions& opts = {});

/// Square-free g of degree d with |sum_{x=1}^{N_eff} O(x) chi(g(x))| >= N_eff - d,
/// in canonical order.
std::vector<MonicPoly> stage1_survivors(OracleSession& session, unsigned d,
                                        const AlgorithmParams& params, const RecoveryOptions& opts = {});

/// Stage-1 filter on [1, N_eff], stage-2 verification on [1, M_eff] with the
/// signed threshold M_eff - d, full-range argmax fallback when several remain.
RecoveryReport two_stage_recover(OracleSession& session, unsigned d, const AlgorithmParams& params,
                                 const RecoveryOptions& opts = {});

/// Argmax of the [1, M_eff] correlation over every square-free candidate.
RecoveryReport short_window_recover(OracleSession& session, unsigned d, const RecoveryOptions& opts = {});

RecoveryReport recover(Algorithm algorithm, OracleSession& session, unsigned d,
                       const AlgorithmParams& params, const RecoveryOptions& opts = {});

/// Number of square-free monic polynomials of degree d: p for d = 1 and
/// p^d - p^{d-1} for d >= 2.
u64 squarefree_count_formula(const PrimeModulus& modulus, unsigned d);
/// Same count by enumeration; throws BudgetExceeded above the budget.
u64 squarefree_count_enumerated(const PrimeModulus& modulus, unsigned d, const Budget& budget = {});

/// ceil(log_3 |square-free M_d|): ternary answers, so fewer queries cannot
/// distinguish every candidate.
unsigned query_lower_bound(const PrimeModulus& modulus, unsigned d, const Budget& budget = {});

/// Uniformly random square-free monic polynomial of degree d.
MonicPoly random_squarefree(const PrimeModulus& modulus, unsigned d, std::uint64_t seed);

}  // namespace legrecon
