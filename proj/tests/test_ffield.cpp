#include <gtest/gtest.h>

#include <random>

#include "legrecon/ffield.hpp"
#include "oracles.hpp"

using namespace legrecon;

TEST(PrimeModulus, rejects_non_primes) {
    for (u64 bad : {0ULL, 1ULL, 2ULL, 4ULL, 9ULL, 15ULL, 561ULL, 1ULL << 63}) {
        EXPECT_THROW(PrimeModulus{bad}, std::invalid_argument) << bad;
    }
    EXPECT_NO_THROW(PrimeModulus{3});
    EXPECT_NO_THROW(PrimeModulus{10007});
    EXPECT_NO_THROW(PrimeModulus{(1ULL << 61) - 1});
}

TEST(PrimeModulus, miller_rabin_matches_trial_division) {
    auto trial = [](u64 n) {
        if (n < 2) return false;
        for (u64 q = 2; q * q <= n; ++q) {
            if (n % q == 0) return false;
        }
        return true;
    };
    for (u64 n = 0; n < 20000; ++n) ASSERT_EQ(is_prime(n), trial(n)) << n;
    // Strong pseudoprimes to several small bases.
    EXPECT_FALSE(is_prime(3215031751ULL));
    EXPECT_FALSE(is_prime(3825123056546413051ULL));
    EXPECT_TRUE(is_prime(18446744073709551557ULL));
}

TEST(FpElement, canonical_representative) {
    const PrimeModulus m(7);
    EXPECT_EQ(FpElement(23, m).value(), 2u);
    EXPECT_EQ(FpElement::from_signed(-1, m).value(), 6u);
    EXPECT_EQ((FpElement(5, m) + FpElement(4, m)).value(), 2u);
    EXPECT_EQ((FpElement(2, m) - FpElement(5, m)).value(), 4u);
    EXPECT_EQ((-FpElement(0, m)).value(), 0u);
}

TEST(ModPow, examples) {
    const PrimeModulus m(7);
    EXPECT_EQ(mod_pow(FpElement(5, m), 0).value(), 1u);
    EXPECT_EQ(mod_pow(FpElement(3, m), 6).value(), 1u);
    EXPECT_EQ(mod_pow(FpElement(3, m), 3).value(), 6u);  // 27 mod 7
    EXPECT_EQ(mod_pow(FpElement(0, m), 0).value(), 1u);
    EXPECT_EQ(mod_pow(FpElement(0, m), 5).value(), 0u);
}

TEST(ModPow, large_modulus_uses_wide_products) {
    const PrimeModulus m((1ULL << 61) - 1);
    const FpElement a(123456789123456789ULL, m);
    EXPECT_EQ(mod_pow(a, m.value() - 1).value(), 1u);
    EXPECT_EQ(m.mul(m.inv(a.value()), a.value()), 1u);
}

TEST(Legendre, examples) {
    const PrimeModulus m(7);
    EXPECT_EQ(legendre(FpElement(0, m)), 0);
    EXPECT_EQ(legendre(FpElement(4, m)), 1);
    EXPECT_EQ(legendre(FpElement(3, m)), -1);
    EXPECT_EQ(oracle::chi(3, 7, oracle::squares(7)), -1);  // squares mod 7 are {1, 2, 4}
}

TEST(LegendreExt, examples) {
    const PrimeModulus m(7);
    EXPECT_EQ(legendre_ext(FpElement(0, m)), 1);
    EXPECT_EQ(legendre_ext(FpElement(3, m)), -1);
    for (u64 p : {3ULL, 5ULL, 101ULL, 10007ULL}) EXPECT_EQ(legendre_ext(FpElement(1, PrimeModulus(p))), 1);
}

// Euler and Jacobi routes agree with each other and with the squares set for
// every residue of every prime up to 10007.
TEST(Legendre, euler_jacobi_and_squares_agree_exhaustively) {
    for (u64 p = 3; p <= 10007; p += 2) {
        if (!is_prime(p)) continue;
        const PrimeModulus m(p);
        const QuadraticCharacter chi(m);
        std::vector<int> from_squares(p, -1);
        from_squares[0] = 0;
        for (u64 y = 1; y < p; ++y) from_squares[(y * y) % p] = 1;
        std::int64_t total = 0;
        for (u64 a = 0; a < p; ++a) {
            const FpElement x(a, m);
            const int e = legendre(x);
            ASSERT_EQ(e, legendre_jacobi(x)) << "p=" << p << " a=" << a;
            ASSERT_EQ(e, from_squares[a]) << "p=" << p << " a=" << a;
            ASSERT_EQ(e, chi(a));
            if (a != 0) {
                ASSERT_EQ(legendre_ext(x), e);
            }
            total += e;
        }
        ASSERT_EQ(total, 0) << p;
    }
}

TEST(Legendre, complete_multiplicativity) {
    std::mt19937_64 rng(7);
    for (u64 p : {5ULL, 13ULL, 101ULL, 65537ULL, 1000000007ULL, (1ULL << 61) - 1}) {
        const PrimeModulus m(p);
        std::uniform_int_distribution<u64> dist(1, p - 1);
        for (int i = 0; i < 500; ++i) {
            const FpElement a(dist(rng), m), b(dist(rng), m);
            ASSERT_EQ(legendre(a * b), legendre(a) * legendre(b));
            ASSERT_EQ(legendre_jacobi(a * b), legendre_jacobi(a) * legendre_jacobi(b));
        }
    }
}

TEST(QuadraticCharacter, large_modulus_without_table) {
    const PrimeModulus m(1000000007ULL);
    const QuadraticCharacter chi(m);
    EXPECT_EQ(chi(0), 0);
    EXPECT_EQ(chi(4), 1);
    EXPECT_EQ(chi.patched(0), 1);
    EXPECT_EQ(chi(5), legendre_jacobi(FpElement(5, m)));
}
