#include <algorithm>
#include <sstream>

#include "cli.hpp"
#include "legrecon/reconstruct.hpp"

namespace legrecon::cli {

namespace {

template <class T>
T median(std::vector<T> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

}  // namespace

int cmd_bench(const BenchConfig& config, std::ostream& out, std::ostream& err) {
    if (config.seeds == 0) throw UsageError("--seeds must be >= 1");
    if (config.d == 0) throw UsageError("--d must be >= 1");
    std::vector<PrimeModulus> moduli;
    for (auto p : config.primes) moduli.push_back(make_modulus(p));
    std::vector<Algorithm> algos;
    for (const auto& name : config.algos) {
        try {
            algos.push_back(parse_algorithm(name));
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }

    out << "p,d,algo,seeds,successes,median_ms,median_queries,median_distinct_points,median_work,"
           "max_survivors_stage1,fallbacks,status\n";
    bool all_ok = true;
    for (const auto& m : moduli) {
        AlgorithmParams params;
        try {
            params = AlgorithmParams::make(m, config.d);
        } catch (const std::invalid_argument& e) {
            err << "skipping p=" << m.value() << ": " << e.what() << "\n";
            continue;
        }
        for (Algorithm algo : algos) {
            RecoveryOptions opts;
            opts.scan.threads = config.threads;
            opts.scan.budget.max_ops = config.budget;
            std::vector<double> ms;
            std::vector<std::uint64_t> queries, distinct, work;
            std::uint64_t successes = 0, fallbacks = 0, max_survivors = 0;
            bool skipped = false;
            for (unsigned s = 0; s < config.seeds && !skipped; ++s) {
                const std::uint64_t seed = config.seed + s;
                OracleSession session(random_squarefree(m, config.d, seed), 1.0, seed);
                try {
                    const RecoveryReport r = recover(algo, session, config.d, params, opts);
                    ms.push_back(r.total_time.count());
                    queries.push_back(r.total_queries);
                    distinct.push_back(r.distinct_points);
                    work.push_back(r.work);
                    successes += r.recovered && *r.recovered == session.hidden();
                    fallbacks += r.fallback_used;
                    max_survivors = std::max(max_survivors, r.survivors_stage1);
                } catch (const BudgetExceeded& e) {
                    err << "skipping p=" << m.value() << " " << algorithm_name(algo) << ": " << e.what() << "\n";
                    skipped = true;
                }
            }
            out << m.value() << "," << config.d << "," << algorithm_name(algo) << "," << config.seeds << ",";
            if (skipped) {
                out << ",,,,,,,skipped\n";
                continue;
            }
            all_ok = all_ok && successes == config.seeds;
            std::ostringstream time;
            if (!config.no_timing) time << median(ms);
            out << successes << "," << time.str() << "," << median(queries) << "," << median(distinct) << ","
                << median(work) << "," << max_survivors << "," << fallbacks << ",ok\n";
        }
    }
    return all_ok ? kSuccess : kFailure;
}

}  // namespace legrecon::cli
