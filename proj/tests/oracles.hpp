#pragma once

// Test-only reference computations. Nothing here calls into the library's
// arithmetic: residues are plain integers and every quantity is computed the
// slow, obvious way.

#include <cstdint>
#include <set>
#include <vector>

namespace oracle {

using u64 = std::uint64_t;
using Poly = std::vector<u64>;  // low to high, leading coefficient included

inline u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % p); }

/// Nonzero squares of F_p by squaring every element.
inline std::set<u64> squares(u64 p) {
    std::set<u64> out;
    for (u64 y = 1; y < p; ++y) out.insert(mulmod(y, y, p));
    return out;
}

inline int chi(u64 a, u64 p, const std::set<u64>& sq) {
    a %= p;
    if (a == 0) return 0;
    return sq.count(a) ? 1 : -1;
}

inline int chi_patched(u64 a, u64 p, const std::set<u64>& sq) {
    return a % p == 0 ? 1 : chi(a, p, sq);
}

/// sum_i c_i x^i with explicit powers.
inline u64 eval(const Poly& f, u64 x, u64 p) {
    u64 acc = 0;
    u64 power = 1;
    for (u64 c : f) {
        acc = (acc + mulmod(c % p, power, p)) % p;
        power = mulmod(power, x % p, p);
    }
    return acc;
}

/// Monic polynomial from its lower coefficients s_0..s_{d-1}.
inline Poly monic(std::vector<u64> lower) {
    lower.push_back(1);
    return lower;
}

inline Poly multiply(const Poly& a, const Poly& b, u64 p) {
    Poly out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = (out[i + j] + mulmod(a[i], b[j], p)) % p;
    }
    return out;
}

/// Every monic polynomial of degree d, lower coefficients in canonical order
/// (s_0 varies fastest).
inline std::vector<Poly> all_monic(unsigned d, u64 p) {
    std::vector<Poly> out;
    u64 total = 1;
    for (unsigned i = 0; i < d; ++i) total *= p;
    for (u64 index = 0; index < total; ++index) {
        std::vector<u64> lower(d);
        u64 rest = index;
        for (unsigned i = 0; i < d; ++i) {
            lower[i] = rest % p;
            rest /= p;
        }
        out.push_back(monic(lower));
    }
    return out;
}

/// g | f for monic g, by long division.
inline bool divides(const Poly& g, Poly f, u64 p) {
    // g monic.
    while (f.size() >= g.size()) {
        const u64 lead = f.back();
        const std::size_t shift = f.size() - g.size();
        for (std::size_t i = 0; i < g.size(); ++i) f[shift + i] = (f[shift + i] + p - mulmod(lead, g[i], p)) % p;
        while (!f.empty() && f.back() == 0) f.pop_back();
    }
    return f.empty();
}

/// No monic g of degree >= 1 has g^2 dividing f.
inline bool squarefree(const Poly& f, u64 p) {
    const unsigned d = static_cast<unsigned>(f.size() - 1);
    for (unsigned k = 1; 2 * k <= d; ++k) {
        for (const Poly& g : all_monic(k, p)) {
            if (divides(multiply(g, g, p), f, p)) return false;
        }
    }
    return true;
}

inline bool perfect_square(const Poly& f, u64 p) {
    const unsigned d = static_cast<unsigned>(f.size() - 1);
    if (d % 2) return false;
    for (const Poly& g : all_monic(d / 2, p)) {
        if (multiply(g, g, p) == f) return true;
    }
    return false;
}

inline std::int64_t complete_sum(const Poly& f, u64 p) {
    const auto sq = squares(p);
    std::int64_t s = 0;
    for (u64 x = 0; x < p; ++x) s += chi(eval(f, x, p), p, sq);
    return s;
}

}  // namespace oracle
