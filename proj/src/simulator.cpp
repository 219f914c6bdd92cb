#include "engage/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace engage {

namespace {

struct Episode {
  EpisodeResult result;
  double user_sum;  // sum user_gamma^(t-1) s_t
};

bool draw(double prob, Rng& rng) { return std::generate_canonical<double, 53>(rng) < prob; }

Episode run_episode(const PolicyPlan& plan, const PiecewiseDemand& f,
                    const LinearLandscape& landscape, const EngagementParams& params,
                    std::uint64_t t_max, Rng& rng, double user_gamma, Transcript* transcript,
                    double initial_state) {
  if (t_max < 1) throw std::invalid_argument("t_max must be >= 1");
  const double gamma = params.gamma();
  const double stay_out = 1.0 - params.friction();

  double x = initial_state;
  double weight = 1.0;
  double user_weight = 1.0;
  double revenue = 0.0;
  double user_sum = 0.0;
  std::uint64_t n = 0;
  bool engaged = true;
  for (std::uint64_t t = 1; t <= t_max; ++t) {
    if (engaged) {
      const double a = plan.action_at(n++, landscape);
      const double r = landscape.revenue(a);
      const double e = landscape.experience(a);
      revenue += weight * r;
      user_sum += user_weight;
      x = f.snap(x + e);
      if (transcript) transcript->push_back({true, r, e, a});
    } else if (transcript) {
      transcript->push_back({false, 0.0, 0.0, std::nullopt});
    }
    const double p = f(x);
    const double prob = engaged ? p : stay_out * p;
    if (!engaged && prob <= 0.0) {
      // Absorbing: the user never returns.
      if (transcript)
        for (std::uint64_t s = t + 1; s <= t_max; ++s)
          transcript->push_back({false, 0.0, 0.0, std::nullopt});
      break;
    }
    engaged = draw(prob, rng);
    weight *= gamma;
    user_weight *= user_gamma;
  }
  const EpisodeResult result{revenue, n, static_cast<double>(n) / static_cast<double>(t_max),
                             t_max};
  return {result, user_sum};
}

// Evaluates sample(i) for every episode, possibly across threads, then
// reduces in index order.
template <class Sample>
Estimate monte_carlo(std::size_t n, unsigned threads, Sample sample) {
  if (n < 2) throw std::invalid_argument("need at least two episodes");
  std::vector<double> values(n);
  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) values[i] = sample(i);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < n; i += workers) values[i] = sample(i);
      });
    for (auto& t : pool) t.join();
  }
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*lo == *hi) return {*lo, 0.0, 0.0, n};
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double var = ss / static_cast<double>(n - 1);
  return {mean, std::sqrt(var / static_cast<double>(n)), 0.0, n};
}

}  // namespace

EpisodeResult simulate_episode(const PolicyPlan& plan, const PiecewiseDemand& f,
                               const LinearLandscape& landscape, const EngagementParams& params,
                               std::uint64_t t_max, Rng& rng, Transcript* transcript,
                               double initial_state) {
  return run_episode(plan, f, landscape, params, t_max, rng, 1.0, transcript, initial_state)
      .result;
}

std::uint64_t default_t_max(const LinearLandscape& landscape, const EngagementParams& params,
                            double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0, 1)");
  const double gamma = params.gamma();
  const double scale = landscape.c_r() + landscape.k_max();
  const double t = std::ceil(std::log(eps * (1.0 - gamma) / scale) / std::log(gamma));
  return static_cast<std::uint64_t>(std::max(1.0, t));
}

Estimate estimate_value(const PolicyPlan& plan, const PiecewiseDemand& f,
                        const LinearLandscape& landscape, const EngagementParams& params,
                        const MonteCarloConfig& config) {
  Estimate est = monte_carlo(config.n_episodes, config.threads, [&](std::size_t i) {
    Rng rng = make_stream(config.seed, i);
    return run_episode(plan, f, landscape, params, config.t_max, rng, 1.0, nullptr, config.initial_state)
        .result.discounted_revenue;
  });
  const double gamma = params.gamma();
  const double scale = std::max(std::abs(landscape.c_r() + landscape.k_max()),
                                std::abs(landscape.c_r() - landscape.k_max()));
  est.truncation_bias =
      std::pow(gamma, static_cast<double>(config.t_max)) * scale / (1.0 - gamma);
  return est;
}

Estimate expected_interactions(const PolicyPlan& plan, const PiecewiseDemand& f,
                               const LinearLandscape& landscape,
                               const EngagementParams& params, const MonteCarloConfig& config) {
  return monte_carlo(config.n_episodes, config.threads, [&](std::size_t i) {
    Rng rng = make_stream(config.seed, i);
    return static_cast<double>(
        run_episode(plan, f, landscape, params, config.t_max, rng, 1.0, nullptr, config.initial_state)
            .result.interactions);
  });
}

Estimate user_utility(const PolicyPlan& plan, const PiecewiseDemand& f,
                      const LinearLandscape& landscape, const EngagementParams& params,
                      double per_interaction_reward, double user_gamma,
                      const MonteCarloConfig& config) {
  if (!(user_gamma > 0.0 && user_gamma < 1.0))
    throw std::invalid_argument("user_gamma must lie in (0, 1)");
  Estimate est = monte_carlo(config.n_episodes, config.threads, [&](std::size_t i) {
    Rng rng = make_stream(config.seed, i);
    return per_interaction_reward *
           run_episode(plan, f, landscape, params, config.t_max, rng, user_gamma, nullptr, config.initial_state)
               .user_sum;
  });
  est.truncation_bias = std::pow(user_gamma, static_cast<double>(config.t_max)) *
                        std::abs(per_interaction_reward) / (1.0 - user_gamma);
  return est;
}

Estimate estimate_effective_discount(double p, const EngagementParams& params,
                                     std::size_t samples, std::uint64_t seed) {
  Rng rng = make_stream(seed, 0);
  const double gamma = params.gamma();
  return monte_carlo(samples, 1, [&](std::size_t) {
    const auto w = sample_return_time(p, params, rng);
    return w ? std::pow(gamma, static_cast<double>(*w)) : 0.0;
  });
}

}  // namespace engage
