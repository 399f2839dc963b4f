#pragma once

#include <atomic>
#include <cstdint>
#include <mutex>
#include <unordered_map>

#include "legrecon/ffield.hpp"
#include "legrecon/poly.hpp"

namespace legrecon {

enum class OracleMode {
    kSigned,   // chi(f(x)) in {-1, 0, 1}
    kPatched,  // chi~(f(x)) in {-1, 1}
};

/// Black-box access to the character of a hidden square-free polynomial.
///
/// With probability gamma a query answers correctly; otherwise it returns a
/// uniformly chosen wrong value from the mode's codomain. Noise draws are a
/// pure function of (seed, x, n) where n counts earlier queries at the same x,
/// so a noisy run is reproducible regardless of query order.
class OracleSession {
public:
    /// Throws std::invalid_argument unless hidden is square-free and gamma is in (1/2, 1].
    OracleSession(MonicPoly hidden, double gamma = 1.0, std::uint64_t seed = 0,
                  OracleMode mode = OracleMode::kSigned);

    OracleSession(const OracleSession&) = delete;
    OracleSession& operator=(const OracleSession&) = delete;

    int query(const FpElement& x);
    int query(u64 x);

    /// Queries x `repetitions` times (odd, >= 1) and returns the most frequent
    /// answer, the smallest value on ties.
    int majority_estimate(const FpElement& x, unsigned repetitions);
    int majority_estimate(u64 x, unsigned repetitions);

    std::uint64_t query_count() const noexcept { return count_.load(std::memory_order_relaxed); }

    const PrimeModulus& modulus() const noexcept { return hidden_.modulus(); }
    unsigned degree() const noexcept { return hidden_.degree(); }
    double gamma() const noexcept { return gamma_; }
    std::uint64_t seed() const noexcept { return seed_; }
    OracleMode mode() const noexcept { return mode_; }

    /// Ground truth, for harnesses that generated the instance.
    const MonicPoly& hidden() const noexcept { return hidden_; }

private:
    int truth(u64 x) const;
    std::uint64_t next_draw(u64 x);

    MonicPoly hidden_;
    double gamma_;
    std::uint64_t seed_;
    OracleMode mode_;
    QuadraticCharacter chi_;
    std::atomic<std::uint64_t> count_{0};
    std::mutex draws_mu_;
    std::unordered_map<u64, std::uint64_t> draws_;
};

/// SplitMix64 finalizer; the counter-based generator behind oracle noise.
std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace legrecon
