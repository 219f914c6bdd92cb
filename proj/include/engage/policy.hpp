#pragma once

#include <string>
#include <variant>
#include <vector>

#include "engage/core.hpp"

namespace engage {

/// Perpetual i = C_E once the prefix is exhausted; the state stays put.
struct HoldAt {
  double state;
  friend bool operator==(const HoldAt&, const HoldAt&) = default;
};

/// Perpetual i = K once the prefix is exhausted.
struct ExploitForever {
  friend bool operator==(const ExploitForever&, const ExploitForever&) = default;
};

using PlanTail = std::variant<HoldAt, ExploitForever>;

/// Interaction-indexed plan: the n-th interaction shows prefix[n-1], and the
/// tail rule afterwards. In the linear setting experiences are
/// deterministic, so a plan fixes the whole state trajectory.
struct PolicyPlan {
  std::vector<double> prefix;
  PlanTail tail = ExploitForever{};

  /// Action at the n-th interaction (zero-based).
  double action_at(std::size_t n, const LinearLandscape& landscape) const;

  bool holds() const { return std::holds_alternative<HoldAt>(tail); }

  friend bool operator==(const PolicyPlan&, const PolicyPlan&) = default;
};

/// Short human-readable rendering such as "[-6] hold(6)". No commas.
std::string describe(const PolicyPlan& plan);

/// Throws std::invalid_argument if an action leaves [-K, K] or a HoldAt
/// tail does not match the state reached by the prefix.
void validate(const PolicyPlan& plan, const LinearLandscape& landscape,
              double initial_state = 0.0);

/// States x_2, x_3, ... after each of the first n interactions.
std::vector<double> unroll_states(const PolicyPlan& plan, const LinearLandscape& landscape,
                                  std::size_t n, double initial_state = 0.0);

/// Exact expected discounted revenue of the plan, walking the prefix and
/// closing the tail with its geometric series.
double plan_value(const PolicyPlan& plan, const PiecewiseDemand& f,
                  const LinearLandscape& landscape, const EngagementParams& params,
                  double initial_state = 0.0);

}  // namespace engage
