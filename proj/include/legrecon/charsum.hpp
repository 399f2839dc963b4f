#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "legrecon/ffield.hpp"
#include "legrecon/parallel.hpp"
#include "legrecon/poly.hpp"

namespace legrecon {

/// sum_{x in F_p} chi(F(x)), exact.
std::int64_t complete_char_sum(const MonicPoly& F);

/// sum_{x=1}^{M} chi(F(x)) for 1 <= M < p; throws std::invalid_argument otherwise.
std::int64_t short_char_sum(const MonicPoly& F, u64 M);

/// sum_{x in F_p} chi((x+a)(x+b)); p-1 when a = b, -1 otherwise.
std::int64_t pair_identity(const FpElement& a, const FpElement& b);

/// S_0 + S_1 c_1 + ... + S_{d-1} c_{d-1} + c_d over F_p.
struct LinearForm {
    std::vector<u64> coeffs;  // c_1 .. c_{d-1}
    u64 constant = 0;         // c_d

    friend bool operator==(const LinearForm&, const LinearForm&) = default;
};

/// sum over (s_0, ..., s_{d-1}) in F_p^d of chi(prod_v L_v(s)). Forms must be
/// pairwise distinct with d-1 coefficients each; budget covers p^d * forms.
std::int64_t multilinear_form_sum(std::span<const LinearForm> forms, unsigned d,
                                  const PrimeModulus& modulus, const ScanOptions& opts = {});

/// Real weights alpha_1..alpha_N with |alpha_x| <= 1, supported on x in [1, N].
class WeightVector {
public:
    /// Throws std::invalid_argument if any |alpha_x| > 1 or the vector is empty.
    explicit WeightVector(std::vector<double> entries);

    std::size_t window() const noexcept { return entries_.size(); }
    std::span<const double> entries() const noexcept { return entries_; }

private:
    std::vector<double> entries_;
};

/// Seeded weight vector of length N: even seeds draw signs +-1, odd seeds
/// draw uniformly from [-1, 1].
WeightVector sample_weight_vector(std::size_t window, std::uint64_t seed);

/// `count` pairwise distinct random linear forms in d variables.
std::vector<LinearForm> sample_distinct_forms(const PrimeModulus& modulus, unsigned d, std::size_t count,
                                              std::uint64_t seed);

/// sum over all monic g of degree d of |sum_{x=1}^{N} alpha_x chi(g(x))|^{2r}.
/// Requires N <= p; budget covers p^d * N.
double moment_sum(const WeightVector& w, unsigned d, unsigned r, const PrimeModulus& modulus,
                  const ScanOptions& opts = {});

/// Same moment for several r from one pass over the inner sums.
std::vector<double> moment_sums(const WeightVector& w, unsigned d, std::span<const unsigned> rs,
                                const PrimeModulus& modulus, const ScanOptions& opts = {});

// Bound expressions. Logarithms are natural.

/// D sqrt(p), for F of degree D not a perfect square.
double weil_bound(unsigned degree, u64 p);
/// D sqrt(p) ln p: the short-interval bound with implied constant 1.
double short_sum_reference(unsigned degree, u64 p);
/// 2 l p^{d - 1/2}.
double multilinear_bound(std::size_t forms, unsigned d, u64 p);
/// 4r N^{2r} p^{d-1/2} + (2r)!/r! N^r p^d.
double moment_bound(u64 p, unsigned d, unsigned r, std::size_t window);

/// Outcome of checking one bound across an exhaustive family.
struct SweepResult {
    std::uint64_t checked = 0;
    std::uint64_t violations = 0;
    double max_measured = 0.0;
    std::optional<MonicPoly> worst;
};

/// Weil bound over every monic F of degree D that is not a perfect square.
SweepResult weil_sweep(const PrimeModulus& modulus, unsigned degree, const ScanOptions& opts = {});

/// Short-interval sums of F = g h over every unordered pair of distinct
/// square-free g, h of degree d and every window M < p. `max_measured` is the
/// largest |sum| / (2d sqrt(p) ln p), i.e. the empirical implied constant;
/// a violation is a ratio above 1.
SweepResult short_sum_sweep(const PrimeModulus& modulus, unsigned d, const ScanOptions& opts = {});

}  // namespace legrecon
