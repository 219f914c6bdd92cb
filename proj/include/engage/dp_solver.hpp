#pragma once

#include <vector>

#include "engage/core.hpp"
#include "engage/policy.hpp"

namespace engage {

/// One monotone segment between two states.
struct SegmentPayoff {
  double payoff;    // discounted revenue collected along the segment
  double discount;  // product of gamma f~ over the states visited
  std::vector<double> actions;
};

/// Highest-revenue monotone move from `from` to `to`. Descending: full
/// steps of K - C_E with a partial final step. Ascending: a partial first
/// step and then full steps of K + C_E.
SegmentPayoff get_payoff(double from, double to, const PiecewiseDemand& f,
                         const LinearLandscape& landscape, const EngagementParams& params);

struct SolveResult {
  double value;
  PolicyPlan plan;
  double equilibrium_state;  // -inf when the plan exploits forever
  double equilibrium_demand;
};

/// Exact optimal plan for piecewise-constant demand by dynamic programming
/// over the breakpoints; O(k^2) segment evaluations.
SolveResult solve(const PiecewiseDemand& f, const LinearLandscape& landscape,
                  const EngagementParams& params, double initial_state = 0.0);

/// Brute force over every monotone chain of breakpoints. Refuses k > 6.
SolveResult enumerate_oracle(const PiecewiseDemand& f, const LinearLandscape& landscape,
                             const EngagementParams& params, double initial_state = 0.0);

/// Value iteration on a finite state set built from full steps, holds and
/// exact landings. Returns V(initial_state).
double value_iteration_oracle(const PiecewiseDemand& f, const LinearLandscape& landscape,
                              const EngagementParams& params, double tol,
                              double initial_state = 0.0);

}  // namespace engage
