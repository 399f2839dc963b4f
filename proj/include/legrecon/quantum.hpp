#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "legrecon/ffield.hpp"
#include "legrecon/parallel.hpp"
#include "legrecon/poly.hpp"

namespace legrecon {

/// The single-query state (1/sqrt(p)) sum_x chi~(g(x)) |x>, kept as its sign
/// vector. k-fold tensor powers are never materialized: their overlaps are
/// the k-th powers of single-copy overlaps.
struct SignState {
    MonicPoly poly;
    std::vector<std::int8_t> signs;  // chi~(g(x)) for x = 0..p-1

    double amplitude(u64 x) const;
    /// p * (1/sqrt(p))^2 = 1 for a valid state.
    double squared_norm() const;
};

/// Throws std::invalid_argument if g is not square-free.
SignState build_state(const MonicPoly& g);

/// Exact overlap <Psi_g, Psi_h> = numerator / denominator with denominator p.
struct ExactOverlap {
    std::int64_t numerator = 0;
    u64 denominator = 1;
};

ExactOverlap pair_overlap_exact(const MonicPoly& g, const MonicPoly& h);
double pair_overlap(const MonicPoly& g, const MonicPoly& h);

/// max over distinct square-free g, h of degree d of |sum_z chi~(g(z)) chi~(h(z))|.
std::int64_t sigma_2d(const PrimeModulus& modulus, unsigned d, const ScanOptions& opts = {});
/// 2 d sqrt(p).
double sigma_bound(u64 p, unsigned d);
/// The bound's derivation needs p > 3.
inline bool sigma_bound_applies(u64 p) { return p > 3; }

/// ceil(2(d+1)/epsilon); throws std::invalid_argument for epsilon <= 0.
unsigned choose_k(unsigned d, double epsilon);

/// Gram matrix of the k-fold states over the square-free candidates, indexed
/// in canonical order. Entry (g, h) = c_{gh}^k.
struct GramMatrix {
    static constexpr std::size_t kDefaultMaxOrder = 5000;

    unsigned k = 1;
    std::vector<MonicPoly> index;   // may be empty for synthetic matrices
    std::vector<double> entries;    // row-major, order() x order()
    std::vector<std::int64_t> sums; // single-copy numerators, p * c_{gh}; empty if synthetic

    std::size_t order() const noexcept;
    double operator()(std::size_t i, std::size_t j) const { return entries[i * order() + j]; }
    std::size_t position(const MonicPoly& g) const;

    /// Wraps explicit entries (used for checking the eigen-solver).
    static GramMatrix from_entries(std::size_t order, std::vector<double> entries, unsigned k = 1);
};

struct GramOptions {
    ScanOptions scan;
    std::size_t max_order = GramMatrix::kDefaultMaxOrder;
};

/// Throws BudgetExceeded when the square-free count exceeds max_order.
GramMatrix gram_matrix(const PrimeModulus& modulus, unsigned d, unsigned k, const GramOptions& opts = {});

/// Raised when the dominant-eigenvalue iteration hits its cap.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PovmResult {
    double alpha = 0.0;
    double lambda_max = 0.0;
    unsigned k = 0;
    unsigned iterations = 0;
    // Filled by measurement_distribution.
    std::vector<std::pair<MonicPoly, double>> outcomes;  // canonical order
    double residual = 0.0;                               // mass of the rho outcome
    double p_correct = 0.0;
};

/// Largest eigenvalue of G by power iteration from the normalized all-ones
/// vector (relative tolerance 1e-10, at most 1e5 iterations), and
/// alpha = (1 - 1e-12) / lambda_max so that I - alpha * sum_g pi_g stays PSD.
PovmResult povm_alpha(const GramMatrix& gram);

/// Outcome distribution of the POVM {alpha pi_g} + rho on Psi_{f,k}:
/// P(g) = alpha c_{gf}^{2k}, rho takes the rest, P(f) = alpha.
PovmResult measurement_distribution(const MonicPoly& f, const GramMatrix& gram, const PovmResult& povm);
PovmResult measurement_distribution(const MonicPoly& f, unsigned k, const GramOptions& opts = {});

}  // namespace legrecon
