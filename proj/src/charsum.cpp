#include "legrecon/charsum.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace legrecon {

std::int64_t complete_char_sum(const MonicPoly& F) {
    const QuadraticCharacter chi(F.modulus());
    const u64 p = F.modulus().value();
    ForwardDifferenceEvaluator ev(F.coeffs(), F.modulus(), 0);
    std::int64_t sum = 0;
    for (u64 x = 0; x < p; ++x, ev.step()) sum += chi(ev.value());
    return sum;
}

std::int64_t short_char_sum(const MonicPoly& F, u64 M) {
    const u64 p = F.modulus().value();
    if (M < 1 || M >= p) throw std::invalid_argument("short_char_sum: window must satisfy 1 <= M < p");
    const QuadraticCharacter chi(F.modulus());
    ForwardDifferenceEvaluator ev(F.coeffs(), F.modulus(), 1);
    std::int64_t sum = 0;
    for (u64 x = 1; x <= M; ++x, ev.step()) sum += chi(ev.value());
    return sum;
}

std::int64_t pair_identity(const FpElement& a, const FpElement& b) {
    const PrimeModulus& m = a.modulus();
    if (!(m == b.modulus())) throw std::invalid_argument("pair_identity: moduli differ");
    const QuadraticCharacter chi(m);
    std::int64_t sum = 0;
    for (u64 x = 0; x < m.value(); ++x) {
        sum += chi(m.mul(m.add(x, a.value()), m.add(x, b.value())));
    }
    return sum;
}

std::int64_t multilinear_form_sum(std::span<const LinearForm> forms, unsigned d,
                                  const PrimeModulus& modulus, const ScanOptions& opts) {
    if (d == 0) throw std::invalid_argument("multilinear_form_sum: d must be >= 1");
    for (std::size_t i = 0; i < forms.size(); ++i) {
        if (forms[i].coeffs.size() != d - 1) {
            throw std::invalid_argument("linear form must have d-1 coefficients");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (forms[i] == forms[j]) throw std::invalid_argument("linear forms must be pairwise distinct");
        }
    }
    opts.budget.check(power_as_double(modulus.value(), d) * static_cast<double>(forms.size()),
                      "multilinear form sum");
    const MonicSpace tuples(modulus, d, opts.budget);
    const QuadraticCharacter chi(modulus);

    std::vector<std::int64_t> partial(block_count(tuples.size(), opts), 0);
    for_each_block(tuples.size(), opts, [&](u64 block, u64 begin, u64 end) {
        std::vector<u64> s(d);
        std::int64_t sum = 0;
        for (u64 index = begin; index < end; ++index) {
            tuples.coeffs_at(index, s);
            u64 product = 1;
            for (const auto& form : forms) {
                u64 value = modulus.add(s[0], modulus.reduce(form.constant));
                for (unsigned i = 1; i < d; ++i) {
                    value = modulus.add(value, modulus.mul(s[i], modulus.reduce(form.coeffs[i - 1])));
                }
                product = modulus.mul(product, value);
            }
            sum += chi(product);
        }
        partial[block] = sum;
    });
    std::int64_t total = 0;
    for (auto v : partial) total += v;
    return total;
}

WeightVector::WeightVector(std::vector<double> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw std::invalid_argument("weight vector must be nonempty");
    for (double a : entries_) {
        if (!(std::abs(a) <= 1.0)) throw std::invalid_argument("weights must satisfy |alpha_x| <= 1");
    }
}

WeightVector sample_weight_vector(std::size_t window, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<double> entries(window);
    if (seed % 2 == 0) {
        std::bernoulli_distribution coin(0.5);
        for (auto& a : entries) a = coin(rng) ? 1.0 : -1.0;
    } else {
        std::uniform_real_distribution<double> uniform(-1.0, 1.0);
        for (auto& a : entries) a = uniform(rng);
    }
    return WeightVector(std::move(entries));
}

std::vector<LinearForm> sample_distinct_forms(const PrimeModulus& modulus, unsigned d, std::size_t count,
                                              std::uint64_t seed) {
    if (d == 0) throw std::invalid_argument("d must be >= 1");
    if (static_cast<double>(count) > power_as_double(modulus.value(), d)) {
        throw std::invalid_argument("not enough distinct linear forms");
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<u64> residue(0, modulus.value() - 1);
    std::vector<LinearForm> forms;
    while (forms.size() < count) {
        LinearForm form;
        form.coeffs.resize(d - 1);
        for (auto& c : form.coeffs) c = residue(rng);
        form.constant = residue(rng);
        if (std::find(forms.begin(), forms.end(), form) == forms.end()) forms.push_back(std::move(form));
    }
    return forms;
}

std::vector<double> moment_sums(const WeightVector& w, unsigned d, std::span<const unsigned> rs,
                                const PrimeModulus& modulus, const ScanOptions& opts) {
    for (unsigned r : rs) {
        if (r == 0) throw std::invalid_argument("moment order r must be >= 1");
    }
    const u64 p = modulus.value();
    const std::size_t window = w.window();
    if (window > p) throw std::invalid_argument("weight window N must not exceed p");
    opts.budget.check(power_as_double(p, d) * static_cast<double>(window), "moment sum");
    const MonicSpace space(modulus, d, opts.budget);
    const QuadraticCharacter chi(modulus);
    const auto alpha = w.entries();

    std::vector<std::vector<double>> partial(block_count(space.size(), opts),
                                             std::vector<double>(rs.size(), 0.0));
    for_each_block(space.size(), opts, [&](u64 block, u64 begin, u64 end) {
        std::vector<u64> c(d);
        auto& acc = partial[block];
        for (u64 index = begin; index < end; ++index) {
            space.coeffs_at(index, c);
            ForwardDifferenceEvaluator ev(c, modulus, 1);
            double inner = 0.0;
            for (std::size_t x = 0; x < window; ++x, ev.step()) inner += alpha[x] * chi(ev.value());
            const double sq = inner * inner;
            for (std::size_t i = 0; i < rs.size(); ++i) acc[i] += std::pow(sq, rs[i]);
        }
    });
    std::vector<double> total(rs.size(), 0.0);
    for (const auto& block : partial) {
        for (std::size_t i = 0; i < rs.size(); ++i) total[i] += block[i];
    }
    return total;
}

double moment_sum(const WeightVector& w, unsigned d, unsigned r, const PrimeModulus& modulus,
                  const ScanOptions& opts) {
    const unsigned rs[] = {r};
    return moment_sums(w, d, rs, modulus, opts).front();
}

double weil_bound(unsigned degree, u64 p) { return degree * std::sqrt(static_cast<double>(p)); }

double short_sum_reference(unsigned degree, u64 p) {
    const double pd = static_cast<double>(p);
    return degree * std::sqrt(pd) * std::log(pd);
}

double multilinear_bound(std::size_t forms, unsigned d, u64 p) {
    return 2.0 * static_cast<double>(forms) * std::pow(static_cast<double>(p), d - 0.5);
}

double moment_bound(u64 p, unsigned d, unsigned r, std::size_t window) {
    const double n = static_cast<double>(window);
    const double pd = static_cast<double>(p);
    // (2r)!/r! = (r+1)(r+2)...(2r)
    double falling = 1.0;
    for (unsigned i = r + 1; i <= 2 * r; ++i) falling *= i;
    return 4.0 * r * std::pow(n, 2.0 * r) * std::pow(pd, d - 0.5) + falling * std::pow(n, r) * std::pow(pd, d);
}

SweepResult weil_sweep(const PrimeModulus& modulus, unsigned degree, const ScanOptions& opts) {
    const u64 p = modulus.value();
    opts.budget.check(power_as_double(p, degree + 1), "Weil sweep");
    const MonicSpace space(modulus, degree, opts.budget);
    const QuadraticCharacter chi(modulus);
    const double bound = weil_bound(degree, p);

    // Canonical index = upper * p + s_0, so each block of upper indices covers
    // p consecutive polynomials that differ only in the constant term. The
    // values F(x) - s_0 are computed once per block entry.
    const u64 uppers = space.size() / p;
    std::vector<SweepResult> partial(block_count(uppers, opts));
    for_each_block(uppers, opts, [&](u64 block, u64 begin, u64 end) {
        SweepResult& out = partial[block];
        std::int64_t worst = -1;
        u64 worst_index = 0;
        std::vector<u64> c(degree);
        std::vector<u64> shifted(p);
        for (u64 upper = begin; upper < end; ++upper) {
            space.coeffs_at(upper * p, c);
            ForwardDifferenceEvaluator ev(c, modulus, 0);
            for (u64 x = 0; x < p; ++x, ev.step()) shifted[x] = ev.value();
            for (u64 s0 = 0; s0 < p; ++s0) {
                c[0] = s0;
                if (is_perfect_square_raw(c, modulus)) continue;
                std::int64_t sum = 0;
                for (u64 x = 0; x < p; ++x) sum += chi(modulus.add(shifted[x], s0));
                const std::int64_t mag = sum < 0 ? -sum : sum;
                ++out.checked;
                if (static_cast<double>(mag) > bound) ++out.violations;
                if (mag > worst) {
                    worst = mag;
                    worst_index = upper * p + s0;
                }
            }
        }
        if (worst >= 0) {
            out.max_measured = static_cast<double>(worst);
            out.worst = space.at(worst_index);
        }
    });

    SweepResult total;
    for (auto& part : partial) {
        total.checked += part.checked;
        total.violations += part.violations;
        if (part.worst && (!total.worst || part.max_measured > total.max_measured)) {
            total.max_measured = part.max_measured;
            total.worst = std::move(part.worst);
        }
    }
    return total;
}

SweepResult short_sum_sweep(const PrimeModulus& modulus, unsigned d, const ScanOptions& opts) {
    const u64 p = modulus.value();
    const CandidateSet candidates = squarefree_candidates(modulus, d, opts.budget);
    const u64 n = candidates.size();
    const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
    opts.budget.check(pairs * static_cast<double>(p), "short-interval sweep");
    const QuadraticCharacter chi(modulus);

    // chi(g(x)) for x = 1..p-1, one row per candidate; chi(gh) = chi(g) chi(h).
    const u64 width = p - 1;
    std::vector<std::int8_t> rows(n * width);
    for (u64 i = 0; i < n; ++i) {
        ForwardDifferenceEvaluator ev(candidates.coeffs(i), modulus, 1);
        for (u64 x = 0; x < width; ++x, ev.step()) rows[i * width + x] = static_cast<std::int8_t>(chi(ev.value()));
    }
    const double scale = short_sum_reference(2 * d, p);

    std::vector<SweepResult> partial(block_count(n, opts));
    for_each_block(n, opts, [&](u64 block, u64 begin, u64 end) {
        SweepResult& out = partial[block];
        std::int64_t worst = -1;
        std::pair<u64, u64> worst_pair{0, 0};
        for (u64 i = begin; i < end; ++i) {
            const std::int8_t* gi = &rows[i * width];
            for (u64 j = i + 1; j < n; ++j) {
                const std::int8_t* hj = &rows[j * width];
                std::int64_t sum = 0;
                std::int64_t peak = 0;
                for (u64 x = 0; x < width; ++x) {
                    sum += gi[x] * hj[x];
                    peak = std::max(peak, sum < 0 ? -sum : sum);
                }
                ++out.checked;
                if (static_cast<double>(peak) > scale) ++out.violations;
                if (peak > worst) {
                    worst = peak;
                    worst_pair = {i, j};
                }
            }
        }
        if (worst >= 0) {
            out.max_measured = static_cast<double>(worst) / scale;
            out.worst = mul(candidates.poly(worst_pair.first), candidates.poly(worst_pair.second));
        }
    });

    SweepResult total;
    for (auto& part : partial) {
        total.checked += part.checked;
        total.violations += part.violations;
        if (part.worst && (!total.worst || part.max_measured > total.max_measured)) {
            total.max_measured = part.max_measured;
            total.worst = std::move(part.worst);
        }
    }
    return total;
}

}  // namespace legrecon
