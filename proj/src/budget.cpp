#include "legrecon/budget.hpp"

#include <cmath>
#include <sstream>

namespace legrecon {

namespace {

std::string budget_message(const std::string& what, double required, double allowed) {
    std::ostringstream os;
    os << what << ": requires ~" << required << " operations, budget is " << allowed;
    return os.str();
}

}  // namespace

BudgetExceeded::BudgetExceeded(const std::string& what, double required, double allowed)
    : std::runtime_error(budget_message(what, required, allowed)),
      required_(required),
      allowed_(allowed) {}

void Budget::check(double ops, const std::string& what) const {
    if (!(ops <= max_ops)) throw BudgetExceeded(what, ops, max_ops);
}

double power_as_double(std::uint64_t p, unsigned e) {
    return std::pow(static_cast<double>(p), static_cast<double>(e));
}

}  // namespace legrecon
