#pragma once

#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "legrecon/ffield.hpp"

namespace legrecon::cli {

/// Exit codes of every subcommand.
enum ExitCode : int {
    kSuccess = 0,
    kFailure = 1,  // recovery mismatch, bound violation, solver failure
    kUsage = 2,    // invalid flags or budget too small
};

/// Bad flags or an unusable configuration; maps to kUsage.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// PrimeModulus with construction failures reported as UsageError.
PrimeModulus make_modulus(unsigned long long p);

/// Parses `args` (without the program name) and runs the subcommand.
/// Reports go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Subcommand bodies, shared with run(); each returns an ExitCode.
struct RecoverConfig {
    unsigned long long p = 0;
    unsigned d = 1;
    std::string algo = "two-stage";
    std::string hidden = "random";
    unsigned long long seed = 0;
    double gamma = 1.0;
    unsigned reps = 1;
    double epsilon = 0.5;
    bool json = false;
    bool no_timing = false;
    unsigned threads = 1;
    double budget = 1e9;
};
int cmd_recover(const RecoverConfig& config, std::ostream& out, std::ostream& err);

struct VerifyConfig {
    std::string lemma = "all";
    unsigned long long p = 0;  // 0: default prime set
    unsigned max_d = 2;
    unsigned trials = 100;
    unsigned samples = 500;
    unsigned long long seed = 1;
    unsigned threads = 1;
    double budget = 1e9;
};
int cmd_verify_bounds(const VerifyConfig& config, std::ostream& out, std::ostream& err);

struct QuantumConfig {
    unsigned long long p = 0;
    unsigned d = 1;
    double epsilon = 0.5;
    unsigned k = 0;  // 0: choose from epsilon
    std::string hidden = "random";
    unsigned long long seed = 0;
    bool json = false;
    unsigned threads = 1;
    unsigned long long max_order = 5000;
};
int cmd_quantum(const QuantumConfig& config, std::ostream& out, std::ostream& err);

struct BenchConfig {
    std::vector<unsigned long long> primes = {101, 1009, 10007};
    unsigned d = 1;
    std::vector<std::string> algos = {"brute", "short", "two-stage"};
    unsigned seeds = 5;
    unsigned long long seed = 0;
    bool no_timing = false;
    unsigned threads = 1;
    double budget = 1e9;
};
int cmd_bench(const BenchConfig& config, std::ostream& out, std::ostream& err);

}  // namespace legrecon::cli
