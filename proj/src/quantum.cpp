#include "legrecon/quantum.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "legrecon/budget.hpp"
#include "legrecon/oracle.hpp"

namespace legrecon {

namespace {

constexpr double kEigenTolerance = 1e-10;
constexpr unsigned kMaxIterations = 100000;
constexpr double kAlphaMargin = 1e-12;

// Bit x set iff chi~(g(x)) = -1; overlap numerator is p - 2 popcount(a ^ b).
struct PackedSigns {
    std::size_t words = 0;
    std::vector<std::uint64_t> bits;

    std::int64_t overlap(std::size_t i, std::size_t j, u64 p) const {
        const std::uint64_t* a = &bits[i * words];
        const std::uint64_t* b = &bits[j * words];
        std::int64_t differ = 0;
        for (std::size_t w = 0; w < words; ++w) differ += std::popcount(a[w] ^ b[w]);
        return static_cast<std::int64_t>(p) - 2 * differ;
    }
};

PackedSigns pack(const CandidateSet& candidates) {
    const PrimeModulus& m = candidates.modulus;
    const u64 p = m.value();
    const QuadraticCharacter chi(m);
    PackedSigns packed;
    packed.words = (p + 63) / 64;
    packed.bits.assign(candidates.size() * packed.words, 0);
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        ForwardDifferenceEvaluator ev(candidates.coeffs(i), m, 0);
        std::uint64_t* row = &packed.bits[i * packed.words];
        for (u64 x = 0; x < p; ++x, ev.step()) {
            if (chi.patched(ev.value()) < 0) row[x / 64] |= std::uint64_t{1} << (x % 64);
        }
    }
    return packed;
}

void require_squarefree(const MonicPoly& g) {
    if (!is_squarefree(g)) throw std::invalid_argument("query states are defined for square-free polynomials");
}

}  // namespace

double SignState::amplitude(u64 x) const {
    return signs.at(x) / std::sqrt(static_cast<double>(signs.size()));
}

double SignState::squared_norm() const {
    // Each amplitude has magnitude 1/sqrt(p).
    double norm = 0.0;
    for (auto s : signs) norm += static_cast<double>(s * s);
    return norm / static_cast<double>(signs.size());
}

SignState build_state(const MonicPoly& g) {
    require_squarefree(g);
    const PrimeModulus& m = g.modulus();
    const QuadraticCharacter chi(m);
    SignState state{g, std::vector<std::int8_t>(m.value())};
    ForwardDifferenceEvaluator ev(g.coeffs(), m, 0);
    for (u64 x = 0; x < m.value(); ++x, ev.step()) state.signs[x] = static_cast<std::int8_t>(chi.patched(ev.value()));
    return state;
}

ExactOverlap pair_overlap_exact(const MonicPoly& g, const MonicPoly& h) {
    if (!(g.modulus() == h.modulus()) || g.degree() != h.degree()) {
        throw std::invalid_argument("pair_overlap: polynomials must share modulus and degree");
    }
    const SignState a = build_state(g);
    const SignState b = build_state(h);
    std::int64_t sum = 0;
    for (std::size_t x = 0; x < a.signs.size(); ++x) sum += a.signs[x] * b.signs[x];
    return {sum, g.modulus().value()};
}

double pair_overlap(const MonicPoly& g, const MonicPoly& h) {
    const ExactOverlap c = pair_overlap_exact(g, h);
    return static_cast<double>(c.numerator) / static_cast<double>(c.denominator);
}

std::int64_t sigma_2d(const PrimeModulus& modulus, unsigned d, const ScanOptions& opts) {
    const CandidateSet candidates = squarefree_candidates(modulus, d, opts.budget);
    const std::size_t n = candidates.size();
    const u64 p = modulus.value();
    opts.budget.check(static_cast<double>(n) * static_cast<double>(n) / 2.0 * static_cast<double>(p) / 64.0,
                      "sigma_2d pair scan");
    const PackedSigns packed = pack(candidates);
    std::vector<std::int64_t> partial(block_count(n, opts), 0);
    for_each_block(n, opts, [&](u64 block, u64 begin, u64 end) {
        std::int64_t best = 0;
        for (u64 i = begin; i < end; ++i) {
            for (u64 j = i + 1; j < n; ++j) best = std::max(best, std::abs(packed.overlap(i, j, p)));
        }
        partial[block] = best;
    });
    return partial.empty() ? 0 : *std::max_element(partial.begin(), partial.end());
}

double sigma_bound(u64 p, unsigned d) { return 2.0 * d * std::sqrt(static_cast<double>(p)); }

unsigned choose_k(unsigned d, double epsilon) {
    if (!(epsilon > 0)) throw std::invalid_argument("epsilon must be positive");
    return static_cast<unsigned>(std::ceil(2.0 * (d + 1) / epsilon));
}

std::size_t GramMatrix::order() const noexcept {
    return static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(entries.size()))));
}

std::size_t GramMatrix::position(const MonicPoly& g) const {
    const auto it = std::lower_bound(index.begin(), index.end(), g,
                                     [](const MonicPoly& a, const MonicPoly& b) { return lex_less(a, b); });
    if (it == index.end() || !(*it == g)) throw std::invalid_argument("polynomial is not a candidate of this Gram matrix");
    return static_cast<std::size_t>(it - index.begin());
}

GramMatrix GramMatrix::from_entries(std::size_t order, std::vector<double> entries, unsigned k) {
    if (entries.size() != order * order) throw std::invalid_argument("Gram entries must be order x order");
    GramMatrix g;
    g.k = k;
    g.entries = std::move(entries);
    return g;
}

GramMatrix gram_matrix(const PrimeModulus& modulus, unsigned d, unsigned k, const GramOptions& opts) {
    if (k == 0) throw std::invalid_argument("tensor power k must be >= 1");
    const CandidateSet candidates = squarefree_candidates(modulus, d, opts.scan.budget);
    const std::size_t n = candidates.size();
    if (n > opts.max_order) {
        throw BudgetExceeded("Gram matrix order", static_cast<double>(n), static_cast<double>(opts.max_order));
    }
    const u64 p = modulus.value();
    const double pd = static_cast<double>(p);
    const PackedSigns packed = pack(candidates);

    GramMatrix gram;
    gram.k = k;
    gram.index.reserve(n);
    for (std::size_t i = 0; i < n; ++i) gram.index.push_back(candidates.poly(i));
    gram.entries.assign(n * n, 0.0);
    gram.sums.assign(n * n, 0);
    // Rows are independent; each worker writes only its own rows.
    for_each_block(n, opts.scan, [&](u64, u64 begin, u64 end) {
        for (u64 i = begin; i < end; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                const std::int64_t s = packed.overlap(i, j, p);
                gram.sums[i * n + j] = s;
                gram.entries[i * n + j] = std::pow(static_cast<double>(s) / pd, static_cast<int>(k));
            }
        }
    });
    return gram;
}

namespace {

struct PowerRun {
    double lambda = 0.0;
    unsigned iterations = 0;
};

PowerRun power_iteration(const GramMatrix& gram, std::vector<double> v) {
    const std::size_t n = gram.order();
    double norm0 = 0.0;
    for (double x : v) norm0 += x * x;
    norm0 = std::sqrt(norm0);
    for (double& x : v) x /= norm0;
    std::vector<double> w(n);
    double lambda = 0.0;
    double previous = 0.0;
    for (unsigned iter = 1; iter <= kMaxIterations; ++iter) {
        for (std::size_t i = 0; i < n; ++i) {
            const double* row = &gram.entries[i * n];
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) acc += row[j] * v[j];
            w[i] = acc;
        }
        lambda = 0.0;
        double norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            lambda += v[i] * w[i];
            norm += w[i] * w[i];
        }
        norm = std::sqrt(norm);
        if (norm == 0.0) return {0.0, iter};
        for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / norm;
        if (iter > 1 && std::abs(lambda - previous) <= kEigenTolerance * std::abs(lambda)) return {lambda, iter};
        previous = lambda;
    }
    throw ConvergenceError("dominant eigenvalue did not converge within the iteration cap");
}

}  // namespace

PovmResult povm_alpha(const GramMatrix& gram) {
    const std::size_t n = gram.order();
    if (n == 0) throw std::invalid_argument("empty Gram matrix");
    // The all-ones vector can itself be an eigenvector of a non-dominant
    // eigenvalue (uniform off-diagonals), so a second fixed start backs it up.
    const PowerRun ones = power_iteration(gram, std::vector<double>(n, 1.0));
    std::vector<double> mixed(n);
    for (std::size_t i = 0; i < n; ++i) mixed[i] = 0.5 + static_cast<double>(mix64(i + 1) >> 11) * 0x1.0p-53;
    const PowerRun other = power_iteration(gram, std::move(mixed));
    const double lambda = std::max(ones.lambda, other.lambda);
    if (!(lambda > 0.0)) throw ConvergenceError("dominant eigenvalue is not positive");

    PovmResult result;
    result.k = gram.k;
    result.lambda_max = lambda;
    result.alpha = (1.0 - kAlphaMargin) / lambda;
    result.iterations = ones.iterations + other.iterations;
    return result;
}

PovmResult measurement_distribution(const MonicPoly& f, const GramMatrix& gram, const PovmResult& povm) {
    if (gram.index.size() != gram.order()) throw std::invalid_argument("Gram matrix has no candidate index");
    const std::size_t n = gram.order();
    const std::size_t col = gram.position(f);
    PovmResult result = povm;
    result.outcomes.clear();
    result.outcomes.reserve(n);
    double total = 0.0;
    for (std::size_t g = 0; g < n; ++g) {
        const double c = gram(g, col);  // c_{gf}^k
        const double prob = povm.alpha * c * c;
        result.outcomes.emplace_back(gram.index[g], prob);
        total += prob;
    }
    result.residual = 1.0 - total;
    result.p_correct = result.outcomes[col].second;
    return result;
}

PovmResult measurement_distribution(const MonicPoly& f, unsigned k, const GramOptions& opts) {
    const GramMatrix gram = gram_matrix(f.modulus(), f.degree(), k, opts);
    return measurement_distribution(f, gram, povm_alpha(gram));
}

}  // namespace legrecon
