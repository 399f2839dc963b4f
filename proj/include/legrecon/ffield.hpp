#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

namespace legrecon {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

/// Deterministic Miller-Rabin; exact for every n < 2^64.
bool is_prime(u64 n);

/// An odd prime p < 2^63 together with the arithmetic of F_p on raw residues.
/// All residue arguments must already be canonical, i.e. in [0, p).
class PrimeModulus {
public:
    static constexpr u64 kMaxModulus = u64{1} << 63;

    /// Throws std::invalid_argument("p must be an odd prime") otherwise.
    explicit PrimeModulus(u64 p);

    u64 value() const noexcept { return p_; }

    u64 reduce(u64 a) const noexcept { return a % p_; }
    u64 reduce_signed(std::int64_t a) const noexcept;

    u64 add(u64 a, u64 b) const noexcept {
        const u64 s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    u64 sub(u64 a, u64 b) const noexcept { return a >= b ? a - b : a + p_ - b; }
    u64 neg(u64 a) const noexcept { return a == 0 ? 0 : p_ - a; }
    u64 mul(u64 a, u64 b) const noexcept {
        if (small_) return (a * b) % p_;
        return static_cast<u64>((static_cast<u128>(a) * b) % p_);
    }
    u64 pow(u64 a, u64 e) const noexcept;
    /// Inverse of a nonzero residue; throws std::domain_error for zero.
    u64 inv(u64 a) const;

    friend bool operator==(const PrimeModulus& a, const PrimeModulus& b) noexcept {
        return a.p_ == b.p_;
    }

private:
    u64 p_;
    bool small_;  // p < 2^32: products fit in 64 bits
};

/// A canonical residue in [0, p).
class FpElement {
public:
    FpElement(u64 value, const PrimeModulus& modulus)
        : value_(modulus.reduce(value)), modulus_(modulus) {}
    static FpElement from_signed(std::int64_t value, const PrimeModulus& modulus) {
        return FpElement(modulus.reduce_signed(value), modulus);
    }

    u64 value() const noexcept { return value_; }
    const PrimeModulus& modulus() const noexcept { return modulus_; }

    FpElement operator+(const FpElement& o) const { return {modulus_.add(value_, o.value_), modulus_}; }
    FpElement operator-(const FpElement& o) const { return {modulus_.sub(value_, o.value_), modulus_}; }
    FpElement operator*(const FpElement& o) const { return {modulus_.mul(value_, o.value_), modulus_}; }
    FpElement operator-() const { return {modulus_.neg(value_), modulus_}; }

    friend bool operator==(const FpElement& a, const FpElement& b) noexcept {
        return a.value_ == b.value_ && a.modulus_ == b.modulus_;
    }

private:
    u64 value_;
    PrimeModulus modulus_;
};

std::ostream& operator<<(std::ostream& os, const FpElement& a);

/// a^e by square-and-multiply; 0^0 = 1.
FpElement mod_pow(const FpElement& a, u64 e);

/// Legendre symbol via Euler's criterion a^((p-1)/2).
int legendre(const FpElement& a);

/// Legendre symbol via binary Jacobi-symbol reduction (no exponentiation).
int legendre_jacobi(const FpElement& a);

/// Patched character: legendre(a) for a != 0, and 1 at a = 0.
int legendre_ext(const FpElement& a);

/// Quadratic character of F_p with an optional lookup table. Hot loops in the
/// scans call this once per (candidate, point), so for p up to kTableLimit the
/// values are precomputed from the set of squares.
class QuadraticCharacter {
public:
    static constexpr u64 kTableLimit = u64{1} << 26;

    explicit QuadraticCharacter(const PrimeModulus& modulus);

    const PrimeModulus& modulus() const noexcept { return modulus_; }

    /// chi(a) for a canonical residue a.
    int operator()(u64 a) const {
        return table_.empty() ? slow(a) : table_[a];
    }
    /// chi~(a): as above but 1 at zero.
    int patched(u64 a) const { return a == 0 ? 1 : (*this)(a); }

private:
    int slow(u64 a) const;

    PrimeModulus modulus_;
    std::vector<std::int8_t> table_;
};

}  // namespace legrecon
