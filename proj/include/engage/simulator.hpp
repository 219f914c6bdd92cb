#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "engage/core.hpp"
#include "engage/policy.hpp"

namespace engage {

/// One timestep. Disengaged steps carry zero revenue and experience and no
/// action.
struct TranscriptEntry {
  bool engaged;
  double revenue;
  double experience;
  std::optional<double> action;
};

using Transcript = std::vector<TranscriptEntry>;

struct EpisodeResult {
  double discounted_revenue;    // sum of gamma^(t-1) r_t up to truncation
  std::uint64_t interactions;   // engaged timesteps
  double engaged_fraction;      // interactions / truncated_at
  std::uint64_t truncated_at;   // t_max
};

/// Plays one episode of at most t_max timesteps. Timestep 1 is always an
/// interaction; afterwards an engaged user returns with probability f(x)
/// and a disengaged one with (1 - c) f(x). When `transcript` is non-null
/// every timestep is appended to it.
EpisodeResult simulate_episode(const PolicyPlan& plan, const PiecewiseDemand& f,
                               const LinearLandscape& landscape, const EngagementParams& params,
                               std::uint64_t t_max, Rng& rng, Transcript* transcript = nullptr,
                               double initial_state = 0.0);

/// Monte-Carlo estimate. `truncation_bias` bounds the discounted mass
/// beyond the horizon that the sample mean cannot see.
struct Estimate {
  double mean;
  double std_error;
  double truncation_bias;
  std::size_t samples;
};

/// Episode i draws from make_stream(seed, i), so results do not depend on
/// `threads` (0 picks the hardware concurrency).
struct MonteCarloConfig {
  std::uint64_t t_max;
  std::size_t n_episodes;
  std::uint64_t seed;
  unsigned threads = 1;
  double initial_state = 0.0;
};

/// Smallest horizon whose discounted tail is below eps relative to one
/// step of maximal revenue: ceil(log(eps (1 - gamma) / (C_R + K)) / log gamma).
std::uint64_t default_t_max(const LinearLandscape& landscape, const EngagementParams& params,
                            double eps = 1e-4);

Estimate estimate_value(const PolicyPlan& plan, const PiecewiseDemand& f,
                        const LinearLandscape& landscape, const EngagementParams& params,
                        const MonteCarloConfig& config);

/// Mean number of engaged timesteps among the first `config.t_max`.
Estimate expected_interactions(const PolicyPlan& plan, const PiecewiseDemand& f,
                               const LinearLandscape& landscape,
                               const EngagementParams& params, const MonteCarloConfig& config);

/// Mean of sum user_gamma^(t-1) * reward * s_t.
Estimate user_utility(const PolicyPlan& plan, const PiecewiseDemand& f,
                      const LinearLandscape& landscape, const EngagementParams& params,
                      double per_interaction_reward, double user_gamma,
                      const MonteCarloConfig& config);

/// Sample mean and standard error of independent draws of gamma^W, where W
/// is the return time at demand p.
Estimate estimate_effective_discount(double p, const EngagementParams& params,
                                     std::size_t samples, std::uint64_t seed);

}  // namespace engage
