#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "legrecon/quantum.hpp"
#include "legrecon/reconstruct.hpp"

namespace legrecon::cli {

namespace {

using Json = nlohmann::ordered_json;

MonicPoly make_hidden(const std::string& text, const PrimeModulus& m, unsigned d, std::uint64_t seed) {
    if (text == "random") return random_squarefree(m, d, seed);
    MonicPoly f = [&] {
        try {
            return parse_poly(text, d, m);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }();
    if (!is_squarefree(f)) throw UsageError("hidden polynomial must be square-free");
    return f;
}

Json params_json(const AlgorithmParams& params) {
    Json j;
    j["epsilon"] = params.epsilon;
    j["N"] = params.n_window;
    j["M"] = params.m_window;
    j["N_eff"] = params.n_eff;
    j["M_eff"] = params.m_eff;
    j["stage1_threshold"] = params.stage1_threshold;
    j["stage2_threshold"] = params.stage2_threshold;
    j["log"] = "natural";
    return j;
}

}  // namespace

PrimeModulus make_modulus(unsigned long long p) {
    try {
        return PrimeModulus(p);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

int cmd_recover(const RecoverConfig& config, std::ostream& out, std::ostream& err) {
    const PrimeModulus m = make_modulus(config.p);
    if (config.d == 0) throw UsageError("--d must be >= 1");
    if (!(config.gamma > 0.5 && config.gamma <= 1.0)) throw UsageError("--gamma must lie in (1/2, 1]");
    if (config.reps == 0 || config.reps % 2 == 0) throw UsageError("--reps must be odd and >= 1");
    if (!(config.budget > 0)) throw UsageError("--budget must be positive");
    const Algorithm algo = [&] {
        try {
            return parse_algorithm(config.algo);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }();
    const MonicPoly hidden = make_hidden(config.hidden, m, config.d, config.seed);

    AlgorithmParams params;
    try {
        params = AlgorithmParams::make(m, config.d, config.epsilon);
    } catch (const std::invalid_argument& e) {
        if (algo != Algorithm::kBruteForce) throw UsageError(e.what());
    }

    RecoveryOptions opts;
    opts.scan.threads = config.threads;
    opts.scan.budget.max_ops = config.budget;
    opts.repetitions = config.reps;

    OracleSession session(hidden, config.gamma, config.seed);
    RecoveryReport report;
    try {
        report = recover(algo, session, config.d, params, opts);
    } catch (const BudgetExceeded& e) {
        throw UsageError(e.what());
    }
    const bool success = report.recovered && *report.recovered == hidden;
    const unsigned floor = query_lower_bound(m, config.d, opts.scan.budget);

    if (config.json) {
        Json j;
        j["schema"] = "legrecon.recover/1";
        j["algorithm"] = std::string(algorithm_name(algo));
        j["p"] = m.value();
        j["d"] = config.d;
        j["seed"] = config.seed;
        j["gamma"] = config.gamma;
        j["reps"] = config.reps;
        j["hidden"] = to_string(hidden);
        j["recovered"] = report.recovered ? Json(to_string(*report.recovered)) : Json(nullptr);
        j["success"] = success;
        j["candidates"] = report.candidates;
        j["survivors_stage1"] = report.survivors_stage1;
        j["survivors_stage2"] = report.survivors_stage2;
        j["total_queries"] = report.total_queries;
        j["distinct_points"] = report.distinct_points;
        j["query_lower_bound"] = floor;
        j["work"] = report.work;
        j["fallback_used"] = report.fallback_used;
        j["ambiguous"] = report.ambiguous;
        if (config.no_timing) {
            j["elapsed_ms"] = nullptr;
        } else {
            j["elapsed_ms"] = Json{{"stage1", report.stage1_time.count()},
                                   {"stage2", report.stage2_time.count()},
                                   {"total", report.total_time.count()}};
        }
        // Windows are undefined when N_eff <= d; only brute force runs there.
        j["params"] = report.params.n_eff == 0 ? Json(nullptr) : params_json(report.params);
        out << j.dump(2) << "\n";
    } else {
        out << "algorithm:        " << algorithm_name(algo) << "\n"
            << "hidden:           " << hidden << "\n"
            << "recovered:        " << (report.recovered ? to_string(*report.recovered) : "none") << "\n"
            << "survivors stage1: " << report.survivors_stage1 << " of " << report.candidates << "\n"
            << "survivors stage2: " << report.survivors_stage2 << "\n"
            << "queries:          " << report.total_queries << " (" << report.distinct_points
            << " distinct, floor " << floor << ")\n"
            << "fallback:         " << (report.fallback_used ? "yes" : "no") << "\n";
        if (!config.no_timing) out << "elapsed:          " << report.total_time.count() << " ms\n";
    }
    if (!success) {
        err << "recovery mismatch: hidden " << hidden << ", recovered "
            << (report.recovered ? to_string(*report.recovered) : "none") << "\n";
        return kFailure;
    }
    return kSuccess;
}

int cmd_quantum(const QuantumConfig& config, std::ostream& out, std::ostream& err) {
    const PrimeModulus m = make_modulus(config.p);
    if (config.d == 0) throw UsageError("--d must be >= 1");
    if (!(config.epsilon > 0)) throw UsageError("--epsilon must be positive");
    const unsigned k = config.k > 0 ? config.k : choose_k(config.d, config.epsilon);
    const MonicPoly hidden = make_hidden(config.hidden, m, config.d, config.seed);

    GramOptions opts;
    opts.scan.threads = config.threads;
    opts.max_order = config.max_order;
    opts.scan.budget.max_ops = 1e12;
    GramMatrix gram;
    std::int64_t sigma = 0;
    try {
        gram = gram_matrix(m, config.d, k, opts);
        sigma = sigma_2d(m, config.d, opts.scan);
    } catch (const BudgetExceeded& e) {
        throw UsageError(e.what());
    }

    PovmResult result;
    try {
        result = measurement_distribution(hidden, gram, povm_alpha(gram));
    } catch (const ConvergenceError& e) {
        err << "eigenvalue iteration failed: " << e.what() << "\n";
        return kFailure;
    }
    double wrong = 0.0;
    for (const auto& [g, prob] : result.outcomes) {
        if (!(g == hidden)) wrong += prob;
    }
    const double pd = static_cast<double>(m.value());

    if (config.json) {
        Json j;
        j["schema"] = "legrecon.quantum/1";
        j["p"] = m.value();
        j["d"] = config.d;
        j["epsilon"] = config.epsilon;
        j["k"] = k;
        j["queries"] = k;
        j["hidden"] = to_string(hidden);
        j["candidates"] = gram.order();
        j["sigma_2d"] = sigma;
        j["sigma_bound"] = sigma_bound(m.value(), config.d);
        j["sigma_bound_applies"] = sigma_bound_applies(m.value());
        j["lambda_max"] = result.lambda_max;
        j["alpha"] = result.alpha;
        j["one_minus_alpha_times_p"] = (1.0 - result.alpha) * pd;
        j["p_correct"] = result.p_correct;
        j["p_wrong_total"] = wrong;
        j["residual_mass"] = result.residual;
        j["iterations"] = result.iterations;
        out << j.dump(2) << "\n";
    } else {
        out << "k (queries):      " << k << "\n"
            << "sigma_2d:         " << sigma << " (bound " << sigma_bound(m.value(), config.d) << ")\n"
            << "lambda_max:       " << result.lambda_max << "\n"
            << "alpha:            " << result.alpha << "\n"
            << "(1 - alpha) * p:  " << (1.0 - result.alpha) * pd << "\n"
            << "P(correct):       " << result.p_correct << "\n"
            << "P(wrong):         " << wrong << "\n"
            << "residual mass:    " << result.residual << "\n";
    }
    return kSuccess;
}

namespace {

unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Reconstruct a hidden polynomial from Legendre-symbol queries"};
    app.require_subcommand(1);
    std::string out_file;

    RecoverConfig rc;
    rc.threads = default_threads();
    auto* recover_cmd = app.add_subcommand("recover", "Recover a hidden polynomial from its oracle");
    recover_cmd->add_option("--p", rc.p, "Odd prime modulus")->required();
    recover_cmd->add_option("--d", rc.d, "Degree of the hidden polynomial")->required();
    recover_cmd->add_option("--algo", rc.algo, "brute | short | two-stage");
    recover_cmd->add_option("--hidden", rc.hidden, "Polynomial text, coefficient list s_0,..,s_{d-1}, or random");
    recover_cmd->add_option("--seed", rc.seed, "Seed for the random instance and oracle noise");
    recover_cmd->add_option("--gamma", rc.gamma, "Probability that a query answers correctly");
    recover_cmd->add_option("--reps", rc.reps, "Majority-vote repetitions per point (odd)");
    recover_cmd->add_option("--epsilon", rc.epsilon, "Analysis parameter recorded in the report");
    recover_cmd->add_flag("--json", rc.json, "Emit the report as JSON");
    recover_cmd->add_flag("--no-timing", rc.no_timing, "Omit wall-clock fields");
    recover_cmd->add_option("--threads", rc.threads, "Worker threads for candidate scans");
    recover_cmd->add_option("--budget", rc.budget, "Operation budget for exhaustive scans");
    recover_cmd->add_option("--out", out_file, "Write the report to a file");

    VerifyConfig vc;
    vc.threads = default_threads();
    auto* verify_cmd = app.add_subcommand("verify-bounds", "Check character-sum bounds exhaustively");
    verify_cmd->add_option("--lemma", vc.lemma,
                           "all | weil | weil-short | pair-identity | multi-weil | average | sigma");
    verify_cmd->add_option("--p", vc.p, "Restrict the sweep to one prime");
    verify_cmd->add_option("--d", vc.max_d, "Largest polynomial degree d");
    verify_cmd->add_option("--trials", vc.trials, "Random weight vectors per moment instance");
    verify_cmd->add_option("--samples", vc.samples, "Random form sets per multilinear instance");
    verify_cmd->add_option("--seed", vc.seed, "Seed for sampled instances");
    verify_cmd->add_option("--threads", vc.threads, "Worker threads");
    verify_cmd->add_option("--budget", vc.budget, "Operation budget every instance must fit in");
    verify_cmd->add_option("--out", out_file, "Write the CSV to a file");

    QuantumConfig qc;
    qc.threads = default_threads();
    auto* quantum_cmd = app.add_subcommand("quantum", "Simulate the k-query POVM identification");
    quantum_cmd->add_option("--p", qc.p, "Odd prime modulus")->required();
    quantum_cmd->add_option("--d", qc.d, "Degree")->required();
    quantum_cmd->add_option("--epsilon", qc.epsilon, "k = ceil(2(d+1)/epsilon) unless --k is given");
    quantum_cmd->add_option("--k", qc.k, "Number of query copies");
    quantum_cmd->add_option("--hidden", qc.hidden, "Polynomial text, coefficient list, or random");
    quantum_cmd->add_option("--seed", qc.seed, "Seed for the random instance");
    quantum_cmd->add_flag("--json", qc.json, "Emit JSON");
    quantum_cmd->add_option("--threads", qc.threads, "Worker threads");
    quantum_cmd->add_option("--max-order", qc.max_order, "Largest Gram matrix order");
    quantum_cmd->add_option("--out", out_file, "Write the report to a file");

    BenchConfig bc;
    bc.threads = default_threads();
    auto* bench_cmd = app.add_subcommand("bench", "Time the recovery algorithms over a grid");
    bench_cmd->add_option("--p-list", bc.primes, "Primes")->delimiter(',');
    bench_cmd->add_option("--d", bc.d, "Degree");
    bench_cmd->add_option("--algos", bc.algos, "Algorithms")->delimiter(',');
    bench_cmd->add_option("--seeds", bc.seeds, "Instances per cell");
    bench_cmd->add_option("--seed", bc.seed, "First seed");
    bench_cmd->add_flag("--no-timing", bc.no_timing, "Leave wall-time columns empty");
    bench_cmd->add_option("--threads", bc.threads, "Worker threads");
    bench_cmd->add_option("--budget", bc.budget, "Per-cell operation budget");
    bench_cmd->add_option("--out", out_file, "Write the CSV to a file");

    std::vector<std::string> argv_storage{"legrecon"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_storage) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kUsage;
    }

    std::ostringstream buffer;
    std::ostream& sink = out_file.empty() ? out : buffer;
    int code = kSuccess;
    try {
        if (*recover_cmd) code = cmd_recover(rc, sink, err);
        else if (*verify_cmd) code = cmd_verify_bounds(vc, sink, err);
        else if (*quantum_cmd) code = cmd_quantum(qc, sink, err);
        else if (*bench_cmd) code = cmd_bench(bc, sink, err);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const BudgetExceeded& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    if (!out_file.empty()) {
        std::ofstream file(out_file, std::ios::binary);
        if (!file) {
            err << "error: cannot write " << out_file << "\n";
            return kUsage;
        }
        file << buffer.str();
    }
    return code;
}

}  // namespace legrecon::cli
