#include "legrecon/ffield.hpp"

#include <array>
#include <stdexcept>

namespace legrecon {

namespace {

u64 mulmod(u64 a, u64 b, u64 n) { return static_cast<u64>((static_cast<u128>(a) * b) % n); }

u64 powmod(u64 a, u64 e, u64 n) {
    u64 result = 1 % n;
    a %= n;
    while (e > 0) {
        if (e & 1) result = mulmod(result, a, n);
        a = mulmod(a, a, n);
        e >>= 1;
    }
    return result;
}

}  // namespace

bool is_prime(u64 n) {
    if (n < 2) return false;
    // Witnesses {2..37} are exact below 3.3e24 > 2^64.
    constexpr std::array<u64, 12> kWitnesses = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (u64 w : kWitnesses) {
        if (n % w == 0) return n == w;
    }
    u64 d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 w : kWitnesses) {
        u64 x = powmod(w, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (unsigned r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

PrimeModulus::PrimeModulus(u64 p) : p_(p), small_(p < (u64{1} << 32)) {
    if (p < 3 || p >= kMaxModulus || (p & 1) == 0 || !is_prime(p)) {
        throw std::invalid_argument("p must be an odd prime");
    }
}

u64 PrimeModulus::reduce_signed(std::int64_t a) const noexcept {
    const std::int64_t m = static_cast<std::int64_t>(p_);
    std::int64_t r = a % m;
    if (r < 0) r += m;
    return static_cast<u64>(r);
}

u64 PrimeModulus::pow(u64 a, u64 e) const noexcept {
    u64 result = 1;
    while (e > 0) {
        if (e & 1) result = mul(result, a);
        a = mul(a, a);
        e >>= 1;
    }
    return result;
}

u64 PrimeModulus::inv(u64 a) const {
    if (a == 0) throw std::domain_error("zero has no inverse");
    return pow(a, p_ - 2);
}

std::ostream& operator<<(std::ostream& os, const FpElement& a) { return os << a.value(); }

FpElement mod_pow(const FpElement& a, u64 e) {
    return {a.modulus().pow(a.value(), e), a.modulus()};
}

int legendre(const FpElement& a) {
    if (a.value() == 0) return 0;
    const PrimeModulus& m = a.modulus();
    const u64 r = m.pow(a.value(), (m.value() - 1) / 2);
    return r == 1 ? 1 : -1;
}

int legendre_jacobi(const FpElement& a) {
    u64 n = a.modulus().value();
    u64 x = a.value();
    int sign = 1;
    while (x != 0) {
        while ((x & 1) == 0) {
            x >>= 1;
            const u64 r = n & 7;
            if (r == 3 || r == 5) sign = -sign;
        }
        std::swap(x, n);
        if ((x & 3) == 3 && (n & 3) == 3) sign = -sign;
        x %= n;
    }
    return n == 1 ? sign : 0;
}

int legendre_ext(const FpElement& a) { return a.value() == 0 ? 1 : legendre(a); }

QuadraticCharacter::QuadraticCharacter(const PrimeModulus& modulus) : modulus_(modulus) {
    const u64 p = modulus.value();
    if (p > kTableLimit) return;
    table_.assign(p, -1);
    table_[0] = 0;
    for (u64 y = 1; y <= (p - 1) / 2; ++y) table_[modulus.mul(y, y)] = 1;
}

int QuadraticCharacter::slow(u64 a) const { return legendre(FpElement(a, modulus_)); }

}  // namespace legrecon
