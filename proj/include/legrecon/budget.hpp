#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace legrecon {

/// Raised when an exhaustive computation would exceed its operation budget.
class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(const std::string& what, double required, double allowed);

    double required() const noexcept { return required_; }
    double allowed() const noexcept { return allowed_; }

private:
    double required_;
    double allowed_;
};

/// Cap on elementary operations for exhaustive enumerations (p^d * window).
struct Budget {
    static constexpr double kDefaultOps = 1e9;

    double max_ops = kDefaultOps;

    /// Throws BudgetExceeded if `ops` is above the cap.
    void check(double ops, const std::string& what) const;
};

/// p^e as a double, saturating to +inf instead of overflowing.
double power_as_double(std::uint64_t p, unsigned e);

}  // namespace legrecon
