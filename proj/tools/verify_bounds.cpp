#include <cmath>
#include <functional>
#include <iomanip>
#include <set>
#include <sstream>

#include "cli.hpp"
#include "legrecon/charsum.hpp"
#include "legrecon/quantum.hpp"

namespace legrecon::cli {

namespace {

// Instances above this many operations are left out of the sweep plan; the
// user's --budget must then cover every planned instance.
constexpr double kPlanCap = 1e9;

const std::vector<unsigned long long> kDefaultPrimes = {5, 7, 11, 13, 31, 61, 101};
const std::vector<unsigned long long> kFormPrimes = {5, 7, 11};
const std::vector<unsigned long long> kMomentPrimes = {7, 101};

struct Row {
    std::string lemma;
    u64 p;
    unsigned d;
    std::string params;
    std::string measured;
    std::string bound;
    bool pass;
};

struct Instance {
    std::string label;
    double ops;
    std::function<std::vector<Row>()> run;
};

std::string number(double x) {
    std::ostringstream os;
    if (std::floor(x) == x && std::abs(x) < 1e15) {
        os << static_cast<long long>(x);
    } else {
        os << std::setprecision(10) << x;
    }
    return os.str();
}

std::string number(std::int64_t x) { return std::to_string(x); }

bool wants(const VerifyConfig& c, const std::string& lemma) { return c.lemma == "all" || c.lemma == lemma; }

std::vector<unsigned long long> primes_for(const VerifyConfig& c, const std::vector<unsigned long long>& defaults) {
    if (c.p != 0) return {c.p};
    return defaults;
}

void plan_pair_identity(const VerifyConfig& c, std::vector<Instance>& plan) {
    for (auto p : primes_for(c, kDefaultPrimes)) {
        const PrimeModulus m(p);
        for (u64 a = 0; a < p; ++a) {
            for (u64 b = 0; b < p; ++b) {
                plan.push_back({"pair-identity p=" + std::to_string(p), static_cast<double>(p), [m, a, b] {
                                    const std::int64_t sum = pair_identity(FpElement(a, m), FpElement(b, m));
                                    const std::int64_t expected = a == b ? static_cast<std::int64_t>(m.value()) - 1 : -1;
                                    return std::vector<Row>{{"pair-identity", m.value(), 1,
                                                             "a=" + std::to_string(a) + ";b=" + std::to_string(b),
                                                             number(sum), number(expected), sum == expected}};
                                }});
            }
        }
    }
}

void plan_weil(const VerifyConfig& c, std::vector<Instance>& plan) {
    for (auto p : primes_for(c, kDefaultPrimes)) {
        for (unsigned D = 1; D <= 2 * c.max_d; ++D) {
            const double ops = power_as_double(p, D + 1);
            if (ops > kPlanCap) continue;
            const PrimeModulus m(p);
            const unsigned threads = c.threads;
            plan.push_back({"weil p=" + std::to_string(p) + " D=" + std::to_string(D), ops, [m, D, threads, ops] {
                                ScanOptions scan;
                                scan.threads = threads;
                                scan.budget.max_ops = ops;
                                const SweepResult r = weil_sweep(m, D, scan);
                                std::string params = "checked=" + std::to_string(r.checked);
                                if (r.worst) params += ";worst=" + to_string(*r.worst);
                                return std::vector<Row>{{"weil", m.value(), D, params, number(r.max_measured),
                                                         number(weil_bound(D, m.value())), r.violations == 0}};
                            }});
        }
    }
}

void plan_weil_short(const VerifyConfig& c, std::vector<Instance>& plan) {
    for (auto p : primes_for(c, kDefaultPrimes)) {
        for (unsigned d = 1; d <= c.max_d; ++d) {
            const double n = d == 1 ? static_cast<double>(p) : power_as_double(p, d) - power_as_double(p, d - 1);
            const double ops = n * (n - 1) / 2 * static_cast<double>(p);
            if (ops > kPlanCap) continue;
            const PrimeModulus m(p);
            const unsigned threads = c.threads;
            plan.push_back({"weil-short p=" + std::to_string(p) + " d=" + std::to_string(d), ops, [m, d, threads, ops] {
                                ScanOptions scan;
                                scan.threads = threads;
                                scan.block_size = 16;
                                scan.budget.max_ops = std::max(ops, power_as_double(m.value(), d));
                                const SweepResult r = short_sum_sweep(m, d, scan);
                                std::string params = "pairs=" + std::to_string(r.checked) + ";scale=2d*sqrt(p)*ln(p)";
                                if (r.worst) params += ";worst=" + to_string(*r.worst);
                                return std::vector<Row>{{"weil-short", m.value(), d, params, number(r.max_measured),
                                                         number(1.0), r.violations == 0}};
                            }});
        }
    }
}

void plan_multi_weil(const VerifyConfig& c, std::vector<Instance>& plan) {
    for (auto p : primes_for(c, kFormPrimes)) {
        for (unsigned d = 1; d <= c.max_d; ++d) {
            for (std::size_t forms = 1; forms <= 3; ++forms) {
                const double per_set = power_as_double(p, d) * static_cast<double>(forms);
                const double ops = per_set * c.samples;
                if (ops > kPlanCap || static_cast<double>(forms) > power_as_double(p, d)) continue;
                const PrimeModulus m(p);
                const VerifyConfig cfg = c;
                plan.push_back({"multi-weil p=" + std::to_string(p) + " d=" + std::to_string(d), ops,
                                [m, d, forms, cfg, per_set] {
                                    ScanOptions scan;
                                    scan.threads = cfg.threads;
                                    scan.budget.max_ops = per_set;
                                    const double bound = multilinear_bound(forms, d, m.value());
                                    std::int64_t worst = 0;
                                    std::uint64_t violations = 0;
                                    for (unsigned s = 0; s < cfg.samples; ++s) {
                                        const auto set = sample_distinct_forms(m, d, forms, cfg.seed * 7919 + s);
                                        const std::int64_t v = std::abs(multilinear_form_sum(set, d, m, scan));
                                        worst = std::max(worst, v);
                                        if (static_cast<double>(v) > bound) ++violations;
                                    }
                                    return std::vector<Row>{{"multi-weil", m.value(), d,
                                                             "forms=" + std::to_string(forms) +
                                                                 ";samples=" + std::to_string(cfg.samples),
                                                             number(worst), number(bound), violations == 0}};
                                }});
            }
        }
    }
}

void plan_average(const VerifyConfig& c, std::vector<Instance>& plan) {
    for (auto p : primes_for(c, kMomentPrimes)) {
        const double ln = std::log(static_cast<double>(p));
        for (unsigned d = 1; d <= c.max_d; ++d) {
            std::set<std::size_t> windows = {1, 5, static_cast<std::size_t>(std::ceil(d * ln * ln))};
            std::set<unsigned> orders = {1, 2, static_cast<unsigned>(std::ceil(ln))};
            for (std::size_t window : windows) {
                window = std::min<std::size_t>(window, p);
                const double per_trial = power_as_double(p, d) * static_cast<double>(window);
                const double ops = per_trial * c.trials;
                if (ops > kPlanCap) continue;
                const PrimeModulus m(p);
                const VerifyConfig cfg = c;
                const std::vector<unsigned> rs(orders.begin(), orders.end());
                plan.push_back({"average p=" + std::to_string(p) + " d=" + std::to_string(d), ops,
                                [m, d, window, rs, cfg, per_trial] {
                                    ScanOptions scan;
                                    scan.threads = cfg.threads;
                                    scan.budget.max_ops = per_trial;
                                    std::vector<double> worst(rs.size(), 0.0);
                                    for (unsigned t = 0; t < cfg.trials; ++t) {
                                        const WeightVector w = sample_weight_vector(window, cfg.seed * 1000003 + t);
                                        const auto moments = moment_sums(w, d, rs, m, scan);
                                        for (std::size_t i = 0; i < rs.size(); ++i) worst[i] = std::max(worst[i], moments[i]);
                                    }
                                    std::vector<Row> rows;
                                    for (std::size_t i = 0; i < rs.size(); ++i) {
                                        const double bound = moment_bound(m.value(), d, rs[i], window);
                                        rows.push_back({"average", m.value(), d,
                                                        "r=" + std::to_string(rs[i]) + ";N=" + std::to_string(window) +
                                                            ";trials=" + std::to_string(cfg.trials),
                                                        number(worst[i]), number(bound), worst[i] <= bound});
                                    }
                                    return rows;
                                }});
            }
        }
    }
}

void plan_sigma(const VerifyConfig& c, std::vector<Instance>& plan) {
    for (auto p : primes_for(c, kDefaultPrimes)) {
        for (unsigned d = 1; d <= c.max_d; ++d) {
            const double n = power_as_double(p, d);
            const double ops = n * n / 2 * static_cast<double>(p) / 64;
            if (ops > kPlanCap) continue;
            const PrimeModulus m(p);
            const unsigned threads = c.threads;
            plan.push_back({"sigma p=" + std::to_string(p) + " d=" + std::to_string(d), ops, [m, d, threads] {
                                ScanOptions scan;
                                scan.threads = threads;
                                scan.block_size = 64;
                                scan.budget.max_ops = kPlanCap;
                                const std::int64_t sigma = sigma_2d(m, d, scan);
                                const double bound = sigma_bound(m.value(), d);
                                const bool applies = sigma_bound_applies(m.value());
                                return std::vector<Row>{{"sigma", m.value(), d, applies ? "p>3" : "p<=3;bound-not-claimed",
                                                         number(sigma), number(bound),
                                                         !applies || static_cast<double>(sigma) <= bound}};
                            }});
        }
    }
}

}  // namespace

int cmd_verify_bounds(const VerifyConfig& config, std::ostream& out, std::ostream& err) {
    static const std::set<std::string> kLemmas = {"all", "weil", "weil-short", "pair-identity",
                                                  "multi-weil", "average", "sigma"};
    if (!kLemmas.count(config.lemma)) throw UsageError("unknown lemma '" + config.lemma + "'");
    if (config.p != 0) make_modulus(config.p);
    if (config.max_d == 0) throw UsageError("--d must be >= 1");
    if (config.trials == 0 || config.samples == 0) throw UsageError("--trials and --samples must be >= 1");

    std::vector<Instance> plan;
    if (wants(config, "pair-identity")) plan_pair_identity(config, plan);
    if (wants(config, "weil")) plan_weil(config, plan);
    if (wants(config, "weil-short")) plan_weil_short(config, plan);
    if (wants(config, "multi-weil")) plan_multi_weil(config, plan);
    if (wants(config, "average")) plan_average(config, plan);
    if (wants(config, "sigma")) plan_sigma(config, plan);

    for (const auto& inst : plan) {
        if (inst.ops > config.budget) {
            throw UsageError("budget too small: " + inst.label + " needs ~" + number(std::ceil(inst.ops)) +
                             " operations");
        }
    }

    out << "lemma,p,d,params,measured,bound,pass\n";
    std::uint64_t violations = 0;
    for (const auto& inst : plan) {
        for (const Row& row : inst.run()) {
            out << row.lemma << "," << row.p << "," << row.d << "," << row.params << "," << row.measured << ","
                << row.bound << "," << (row.pass ? "pass" : "fail") << "\n";
            if (!row.pass) {
                ++violations;
                err << "violation: " << row.lemma << " p=" << row.p << " d=" << row.d << " " << row.params
                    << " measured=" << row.measured << " bound=" << row.bound << "\n";
            }
        }
    }
    return violations == 0 ? kSuccess : kFailure;
}

}  // namespace legrecon::cli
