#include "engage/online_learner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "engage/simulator.hpp"

namespace engage {

PolicyClass build_policy_class(double m, const LinearLandscape& landscape) {
  if (!(m > 0.0) || !std::isfinite(m)) throw std::invalid_argument("m must be positive");
  const double s = landscape.down_step();
  const double reach = (m + s) / s;
  const auto top = static_cast<long long>(std::floor(reach + 1e-9));

  PolicyClass out;
  for (long long j = -top; j <= top; ++j) {
    const auto n = static_cast<std::size_t>(j < 0 ? -j : j);
    const double action = j < 0 ? landscape.k_max() : 2.0 * landscape.c_e() - landscape.k_max();
    const double anchor = static_cast<double>(j) * s;
    out.policies.push_back({std::vector<double>(n, action), HoldAt{anchor}});
    out.anchors.push_back(anchor);
    out.directions.push_back(j < 0 ? -1 : (j > 0 ? 1 : 0));
  }
  out.policies.push_back({{}, ExploitForever{}});
  out.anchors.push_back(-std::numeric_limits<double>::infinity());
  out.directions.push_back(0);
  return out;
}

LearnerState::LearnerState(std::size_t n_policies, double eta_, double ix_)
    : loss_estimates(n_policies, 0.0), eta(eta_), ix(ix_) {
  if (n_policies == 0) throw std::invalid_argument("empty policy class");
  if (!(eta > 0.0) || !std::isfinite(eta)) throw std::invalid_argument("eta must be positive");
  if (!(ix >= 0.0) || !std::isfinite(ix)) throw std::invalid_argument("ix must be >= 0");
}

std::vector<double> LearnerState::probabilities() const {
  const double lo = *std::min_element(loss_estimates.begin(), loss_estimates.end());
  std::vector<double> w(loss_estimates.size());
  double total = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    w[j] = std::exp(-eta * (loss_estimates[j] - lo));
    total += w[j];
  }
  for (double& v : w) v /= total;
  return w;
}

LearnerState tuned_learner(std::size_t n_policies, std::size_t n_rounds) {
  if (n_rounds == 0) throw std::invalid_argument("need at least one round");
  const double n = static_cast<double>(n_policies);
  const double eta = std::sqrt(2.0 * std::log(std::max(n, 2.0)) /
                               (static_cast<double>(n_rounds) * n));
  return LearnerState(n_policies, eta, eta / 2.0);
}

std::size_t exp3ix_sample(const LearnerState& state, Rng& rng) {
  const auto probs = state.probabilities();
  const double u = std::generate_canonical<double, 53>(rng);
  double acc = 0.0;
  for (std::size_t j = 0; j < probs.size(); ++j) {
    acc += probs[j];
    if (u < acc) return j;
  }
  // Rounding left the cumulative sum just under one.
  for (std::size_t j = probs.size(); j-- > 0;)
    if (probs[j] > 0.0) return j;
  return probs.size() - 1;
}

LearnerState exp3ix_update(LearnerState state, std::size_t chosen, double loss) {
  if (!(loss >= 0.0 && loss <= 1.0)) throw std::invalid_argument("loss must lie in [0, 1]");
  if (chosen >= state.loss_estimates.size()) throw std::out_of_range("policy index");
  const double p = state.probabilities()[chosen];
  state.loss_estimates[chosen] += loss / (p + state.ix);
  ++state.round;
  return state;
}

RevenueBounds default_revenue_bounds(const std::vector<UserSpec>& users,
                                     const LinearLandscape& landscape) {
  if (users.empty()) throw std::invalid_argument("no users");
  double gamma = 0.0;
  for (const auto& u : users) gamma = std::max(gamma, u.params.gamma());
  const double worst = landscape.c_r() - landscape.k_max();
  return {std::min(worst, worst / (1.0 - gamma)),
          (landscape.c_r() + landscape.k_max()) / (1.0 - gamma)};
}

std::pair<std::size_t, double> best_fixed_in_class(const std::vector<UserSpec>& users,
                                                   const PolicyClass& policy_class,
                                                   const LinearLandscape& landscape) {
  std::size_t best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < policy_class.size(); ++j) {
    double total = 0.0;
    for (const auto& u : users)
      total += plan_value(policy_class.policies[j], u.demand, landscape, u.params);
    if (total > best_value) {
      best_value = total;
      best = j;
    }
  }
  return {best, best_value};
}

RunReport run_online(const std::vector<UserSpec>& users, const LinearLandscape& landscape,
                     const PolicyClass& policy_class, const OnlineConfig& config) {
  if (users.empty()) throw std::invalid_argument("no users");
  const RevenueBounds bounds = config.bounds.value_or(default_revenue_bounds(users, landscape));
  if (!(bounds.high > bounds.low)) throw std::invalid_argument("revenue bounds need high > low");

  std::uint64_t t_max = 0;
  if (config.t_max) {
    t_max = *config.t_max;
  } else {
    for (const auto& u : users) t_max = std::max(t_max, default_t_max(landscape, u.params));
  }

  RunReport report{};
  report.bounds = bounds;
  report.t_max = t_max;
  for (const auto& plan : policy_class.policies) report.policy_labels.push_back(describe(plan));

  LearnerState state = tuned_learner(policy_class.size(), users.size());
  Rng learner_rng = make_stream(config.seed, 0);
  for (std::size_t j = 0; j < users.size(); ++j) {
    const UserSpec& user = users[j];
    const std::size_t chosen = exp3ix_sample(state, learner_rng);
    const PolicyPlan& plan = policy_class.policies[chosen];
    Rng episode_rng = make_stream(config.seed, j + 1);
    const double revenue =
        simulate_episode(plan, user.demand, landscape, user.params, t_max, episode_rng)
            .discounted_revenue;
    double clamped = revenue;
    if (revenue < bounds.low || revenue > bounds.high) {
      ++report.bounds_violations;
      clamped = std::clamp(revenue, bounds.low, bounds.high);
    }
    const double loss = (bounds.high - clamped) / (bounds.high - bounds.low);
    state = exp3ix_update(std::move(state), chosen, loss);

    report.rounds.push_back({j, chosen, revenue, loss});
    report.realized_total += revenue;
    report.expected_total += plan_value(plan, user.demand, landscape, user.params);
  }

  const auto [best, value] = best_fixed_in_class(users, policy_class, landscape);
  report.best_fixed_index = best;
  report.best_fixed_value = value;
  report.realized_regret = value - report.realized_total;
  report.expected_regret = value - report.expected_total;
  return report;
}

RunReport run_online(const std::vector<UserSpec>& users, const LinearLandscape& landscape,
                     double m, const OnlineConfig& config) {
  return run_online(users, landscape, build_policy_class(m, landscape), config);
}

}  // namespace engage
