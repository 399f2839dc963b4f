#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "legrecon/budget.hpp"
#include "legrecon/ffield.hpp"

namespace legrecon {

/// X^d + s_{d-1} X^{d-1} + ... + s_0 over F_p, d >= 1. Coefficients are
/// stored low to high as canonical residues; the leading 1 is implicit.
class MonicPoly {
public:
    /// Throws std::invalid_argument on an empty coefficient list.
    MonicPoly(std::vector<u64> coeffs, const PrimeModulus& modulus);

    /// The monomial X^d.
    static MonicPoly monomial(unsigned d, const PrimeModulus& modulus);

    unsigned degree() const noexcept { return static_cast<unsigned>(coeffs_.size()); }
    const PrimeModulus& modulus() const noexcept { return modulus_; }
    std::span<const u64> coeffs() const noexcept { return coeffs_; }
    FpElement coeff(unsigned i) const { return {coeffs_.at(i), modulus_}; }

    /// Full coefficient vector low to high, including the leading 1.
    std::vector<u64> dense() const;

    friend bool operator==(const MonicPoly& a, const MonicPoly& b) noexcept {
        return a.modulus_ == b.modulus_ && a.coeffs_ == b.coeffs_;
    }
    /// Canonical enumeration order: lexicographic in (s_{d-1}, ..., s_0),
    /// lower degree first.
    friend bool lex_less(const MonicPoly& a, const MonicPoly& b) noexcept;

private:
    std::vector<u64> coeffs_;
    PrimeModulus modulus_;
};

/// Horner evaluation: d multiplications, d additions.
FpElement eval(const MonicPoly& f, const FpElement& x);
u64 eval_raw(std::span<const u64> coeffs, const PrimeModulus& m, u64 x) noexcept;

MonicPoly mul(const MonicPoly& g, const MonicPoly& h);

/// gcd(f, f') is constant.
bool is_squarefree(const MonicPoly& f);
bool is_squarefree_raw(std::span<const u64> coeffs, const PrimeModulus& m);

/// f = G^2 for some monic G; square root extracted from the top coefficients
/// down, then verified by squaring.
bool is_perfect_square(const MonicPoly& f);
/// Allocation-free form for degrees up to 2 * ForwardDifferenceEvaluator::kMaxDegree.
bool is_perfect_square_raw(std::span<const u64> coeffs, const PrimeModulus& m);

/// Walks f(x0), f(x0+1), ... with one table of forward differences: d
/// additions per step and no multiplications.
class ForwardDifferenceEvaluator {
public:
    static constexpr unsigned kMaxDegree = 31;

    ForwardDifferenceEvaluator(std::span<const u64> coeffs, const PrimeModulus& m, u64 x0);

    u64 value() const noexcept { return diff_[0]; }
    void step() noexcept {
        for (unsigned i = 0; i < degree_; ++i) {
            const u64 s = diff_[i] + diff_[i + 1];
            diff_[i] = s >= p_ ? s - p_ : s;
        }
    }

private:
    u64 diff_[kMaxDegree + 1];
    unsigned degree_;
    u64 p_;
};

/// All monic polynomials of one degree, indexed in canonical order: index i
/// has base-p digits (s_{d-1}, ..., s_0) with s_{d-1} most significant.
class MonicSpace {
public:
    /// Throws BudgetExceeded when p^d is above the budget.
    MonicSpace(const PrimeModulus& modulus, unsigned d, const Budget& budget = {});

    const PrimeModulus& modulus() const noexcept { return modulus_; }
    unsigned degree() const noexcept { return degree_; }
    u64 size() const noexcept { return size_; }

    MonicPoly at(u64 index) const;
    void coeffs_at(u64 index, std::span<u64> out) const noexcept;
    u64 index_of(const MonicPoly& f) const;

    /// Calls fn(index, coeffs) for every index in [begin, end), optionally
    /// skipping non-square-free polynomials. Coefficients are updated in place.
    void for_each(u64 begin, u64 end, bool squarefree_only,
                  const std::function<void(u64, std::span<const u64>)>& fn) const;

private:
    PrimeModulus modulus_;
    unsigned degree_;
    u64 size_;
};

/// Every monic degree-d polynomial (or only the square-free ones) in canonical order.
std::vector<MonicPoly> enumerate_monic(unsigned d, const PrimeModulus& modulus,
                                       bool squarefree_only, const Budget& budget = {});

/// Square-free candidates stored flat (d residues each) for the scans.
struct CandidateSet {
    PrimeModulus modulus;
    unsigned degree;
    std::vector<u64> flat;

    std::size_t size() const noexcept { return flat.size() / degree; }
    std::span<const u64> coeffs(std::size_t i) const noexcept {
        return {flat.data() + i * degree, degree};
    }
    MonicPoly poly(std::size_t i) const;
};

CandidateSet squarefree_candidates(const PrimeModulus& modulus, unsigned d,
                                   const Budget& budget = {});

/// "x^2 + 3*x + 5" style.
std::string to_string(const MonicPoly& f);
std::ostream& operator<<(std::ostream& os, const MonicPoly& f);

/// Accepts "x^2 + 3*x + 5" (signs allowed, coefficients reduced mod p) or a
/// bare coefficient list "5,3" meaning (s_0, s_1). The result must be monic
/// of degree d; throws std::invalid_argument otherwise.
MonicPoly parse_poly(std::string_view text, unsigned d, const PrimeModulus& modulus);

}  // namespace legrecon
