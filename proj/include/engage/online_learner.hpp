#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "engage/core.hpp"
#include "engage/policy.hpp"

namespace engage {

/// Move-then-hold plans anchored on the (K - C_E) lattice, plus exploit.
struct PolicyClass {
  std::vector<PolicyPlan> policies;
  std::vector<double> anchors;  // -inf for the exploit entry
  std::vector<int> directions;  // -1 down, +1 up, 0 for hold-at-start and exploit

  std::size_t size() const { return policies.size(); }
};

/// Anchors are every multiple of s = K - C_E in [-m - s, m + s]. Downward
/// anchors are reached with action K, upward ones with 2 C_E - K; both move
/// the state by exactly s. The last entry is ExploitForever.
PolicyClass build_policy_class(double m, const LinearLandscape& landscape);

/// Exp3 with implicit exploration.
struct LearnerState {
  std::vector<double> loss_estimates;
  double eta;
  double ix;
  std::uint64_t round = 0;

  LearnerState(std::size_t n_policies, double eta, double ix);

  /// Exponential weights over the loss estimates; sums to one.
  std::vector<double> probabilities() const;
};

/// eta = sqrt(2 ln n / (N n)) and ix = eta / 2 for n policies and N rounds.
/// A single-policy class uses ln 2 so that eta stays positive.
LearnerState tuned_learner(std::size_t n_policies, std::size_t n_rounds);

std::size_t exp3ix_sample(const LearnerState& state, Rng& rng);

/// Adds loss / (p_chosen + ix) to the chosen estimate and advances the
/// round. Throws std::invalid_argument unless 0 <= loss <= 1.
LearnerState exp3ix_update(LearnerState state, std::size_t chosen, double loss);

struct UserSpec {
  PiecewiseDemand demand;
  EngagementParams params;
};

struct RevenueBounds {
  double low;
  double high;
};

/// Range of any episodic revenue: (C_R + K) / (1 - gamma) from above and
/// min(C_R - K, (C_R - K) / (1 - gamma)) from below, using the most patient
/// user.
RevenueBounds default_revenue_bounds(const std::vector<UserSpec>& users,
                                     const LinearLandscape& landscape);

struct OnlineConfig {
  std::optional<RevenueBounds> bounds;  // default_revenue_bounds when empty
  std::optional<std::uint64_t> t_max;   // default_t_max for the most patient user
  std::uint64_t seed = 0;
};

struct RoundRecord {
  std::size_t round;
  std::size_t chosen_policy;
  double realized_revenue;
  double loss;
};

struct RunReport {
  std::vector<RoundRecord> rounds;
  std::vector<std::string> policy_labels;
  std::size_t best_fixed_index;
  double best_fixed_value;  // sum over users of J_{f_j}(best policy)
  double realized_total;    // sum of simulated episodic revenues
  double expected_total;    // sum of J_{f_j}(chosen policy)
  double realized_regret;   // best_fixed_value - realized_total
  double expected_regret;   // best_fixed_value - expected_total
  std::size_t bounds_violations;
  RevenueBounds bounds;
  std::uint64_t t_max;
};

/// Exact value of every class policy for every user, then the argmax of the
/// column sums. Returns (index, summed value).
std::pair<std::size_t, double> best_fixed_in_class(const std::vector<UserSpec>& users,
                                                   const PolicyClass& policy_class,
                                                   const LinearLandscape& landscape);

/// One round per user: sample a policy, play one truncated episode, feed the
/// normalized loss back. Learner draws use make_stream(seed, 0) and the
/// episode of round j uses make_stream(seed, j + 1).
RunReport run_online(const std::vector<UserSpec>& users, const LinearLandscape& landscape,
                     const PolicyClass& policy_class, const OnlineConfig& config);

RunReport run_online(const std::vector<UserSpec>& users, const LinearLandscape& landscape,
                     double m, const OnlineConfig& config);

}  // namespace engage
