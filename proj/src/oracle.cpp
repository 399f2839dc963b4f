#include "legrecon/oracle.hpp"

#include <array>
#include <stdexcept>

namespace legrecon {

std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

OracleSession::OracleSession(MonicPoly hidden, double gamma, std::uint64_t seed, OracleMode mode)
    : hidden_(std::move(hidden)), gamma_(gamma), seed_(seed), mode_(mode), chi_(hidden_.modulus()) {
    if (!is_squarefree(hidden_)) throw std::invalid_argument("hidden polynomial must be square-free");
    if (!(gamma > 0.5 && gamma <= 1.0)) throw std::invalid_argument("gamma must lie in (1/2, 1]");
}

int OracleSession::truth(u64 x) const {
    const u64 v = eval_raw(hidden_.coeffs(), hidden_.modulus(), x);
    return mode_ == OracleMode::kSigned ? chi_(v) : chi_.patched(v);
}

std::uint64_t OracleSession::next_draw(u64 x) {
    std::lock_guard lock(draws_mu_);
    return draws_[x]++;
}

int OracleSession::query(u64 x) {
    x = hidden_.modulus().reduce(x);
    count_.fetch_add(1, std::memory_order_relaxed);
    const int correct = truth(x);
    if (gamma_ >= 1.0) return correct;

    const std::uint64_t n = next_draw(x);
    const std::uint64_t r = mix64(mix64(seed_ ^ mix64(x)) + n);
    // Top 53 bits as a uniform double in [0, 1).
    const double u = static_cast<double>(r >> 11) * 0x1.0p-53;
    if (u < gamma_) return correct;
    if (mode_ == OracleMode::kPatched) return -correct;
    std::array<int, 2> wrong{};
    std::size_t k = 0;
    for (int v : {-1, 0, 1}) {
        if (v != correct) wrong[k++] = v;
    }
    return wrong[r & 1];
}

int OracleSession::query(const FpElement& x) { return query(x.value()); }

int OracleSession::majority_estimate(u64 x, unsigned repetitions) {
    if (repetitions == 0 || repetitions % 2 == 0) {
        throw std::invalid_argument("repetition count must be odd and >= 1");
    }
    std::array<unsigned, 3> votes{};
    for (unsigned i = 0; i < repetitions; ++i) ++votes[static_cast<std::size_t>(query(x) + 1)];
    int best = -1;
    for (int v = 0; v <= 1; ++v) {
        if (votes[static_cast<std::size_t>(v + 1)] > votes[static_cast<std::size_t>(best + 1)]) best = v;
    }
    return best;
}

int OracleSession::majority_estimate(const FpElement& x, unsigned repetitions) {
    return majority_estimate(x.value(), repetitions);
}

}  // namespace legrecon
