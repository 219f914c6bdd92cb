#include "engage/policy.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace engage {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

bool near(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); }

}  // namespace

double PolicyPlan::action_at(std::size_t n, const LinearLandscape& landscape) const {
  if (n < prefix.size()) return prefix[n];
  return std::visit(overloaded{[&](const HoldAt&) { return landscape.hold_action(); },
                               [&](const ExploitForever&) { return landscape.k_max(); }},
                    tail);
}

std::string describe(const PolicyPlan& plan) {
  std::ostringstream out;
  out.precision(6);
  out << '[';
  for (std::size_t i = 0; i < plan.prefix.size(); ++i) out << (i ? " " : "") << plan.prefix[i];
  out << "] ";
  std::visit(overloaded{[&](const HoldAt& h) { out << "hold(" << h.state << ')'; },
                        [&](const ExploitForever&) { out << "exploit"; }},
             plan.tail);
  return out.str();
}

void validate(const PolicyPlan& plan, const LinearLandscape& landscape, double initial_state) {
  double x = initial_state;
  for (double a : plan.prefix) {
    if (!std::isfinite(a) || !landscape.contains(a))
      throw std::invalid_argument("plan action outside [-K, K]");
    x += landscape.experience(a);
  }
  if (const auto* hold = std::get_if<HoldAt>(&plan.tail); hold && !near(x, hold->state))
    throw std::invalid_argument("plan prefix does not end at its hold state");
}

std::vector<double> unroll_states(const PolicyPlan& plan, const LinearLandscape& landscape,
                                  std::size_t n, double initial_state) {
  std::vector<double> states;
  states.reserve(n);
  double x = initial_state;
  for (std::size_t t = 0; t < n; ++t) {
    x += landscape.experience(plan.action_at(t, landscape));
    states.push_back(x);
  }
  return states;
}

double plan_value(const PolicyPlan& plan, const PiecewiseDemand& f,
                  const LinearLandscape& landscape, const EngagementParams& params,
                  double initial_state) {
  double value = 0.0;
  double weight = 1.0;
  double x = initial_state;
  auto step = [&](double action) {
    value += weight * landscape.revenue(action);
    x = f.snap(x + landscape.experience(action));
    weight *= effective_discount(f(x), params);
  };
  for (double a : plan.prefix) step(a);

  if (std::holds_alternative<HoldAt>(plan.tail)) {
    return value + weight * landscape.revenue(landscape.hold_action()) /
                       (1.0 - effective_discount(f(x), params));
  }
  // Exploit: walk down until the state is below every breakpoint, after
  // which demand is constant and the series closes.
  const auto bps = f.breakpoints();
  while (!bps.empty() && x >= bps.front() && weight > 0.0) step(landscape.k_max());
  return value + weight * landscape.revenue(landscape.k_max()) /
                     (1.0 - effective_discount(f.min_value(), params));
}

}  // namespace engage
