#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace engage {

/// Random source used throughout. Streams are derived from a 64-bit seed
/// and a stream counter with make_stream(), so results are reproducible
/// and independent of scheduling.
using Rng = std::mt19937_64;

Rng make_stream(std::uint64_t seed, std::uint64_t stream);

/// Platform discount factor and user friction.
class EngagementParams {
 public:
  EngagementParams(double gamma, double friction);

  double gamma() const { return gamma_; }
  double friction() const { return friction_; }

 private:
  double gamma_;
  double friction_;
};

/// Monotone non-decreasing, right-continuous step function from user state
/// to per-timestep engagement probability. With breakpoints b_1 < ... < b_k
/// the value on (-inf, b_1) is values[0] and on [b_j, b_{j+1}) it is values[j].
class PiecewiseDemand {
 public:
  PiecewiseDemand(std::vector<double> breakpoints, std::vector<double> values);

  static PiecewiseDemand constant(double value);

  double operator()(double x) const;
  double eval(double x) const { return (*this)(x); }

  /// x moved onto the nearest breakpoint when within 1e-9 relative of it.
  /// Plan replays accumulate states by addition; this keeps a step that was
  /// built to land on a jump from falling just short of it.
  double snap(double x) const;

  std::span<const double> breakpoints() const { return breakpoints_; }
  std::span<const double> values() const { return values_; }

  /// Number of levels (pieces).
  std::size_t complexity() const { return values_.size(); }
  double min_value() const { return values_.front(); }
  double max_value() const { return values_.back(); }

  friend bool operator==(const PiecewiseDemand&, const PiecewiseDemand&) = default;

 private:
  std::vector<double> breakpoints_;
  std::vector<double> values_;
};

/// Linear content space i in [-K, K] with revenue C_R + i and experience
/// C_E - i.
class LinearLandscape {
 public:
  LinearLandscape(double c_r, double c_e, double k_max);

  double c_r() const { return c_r_; }
  double c_e() const { return c_e_; }
  double k_max() const { return k_max_; }

  double revenue(double action) const { return c_r_ + action; }
  double experience(double action) const { return c_e_ - action; }

  /// State decrease from showing i = K.
  double down_step() const { return k_max_ - c_e_; }
  /// State increase from showing i = -K.
  double up_step() const { return k_max_ + c_e_; }
  /// Action that leaves the state unchanged.
  double hold_action() const { return c_e_; }

  bool contains(double action, double tol = 1e-9) const;

  friend bool operator==(const LinearLandscape&, const LinearLandscape&) = default;

 private:
  double c_r_;
  double c_e_;
  double k_max_;
};

// ---------------------------------------------------------------------------
// Closed forms at the level of demand p = f(x).

/// f~(p): the factor such that gamma * f~(p) = E[gamma^W] for the return
/// time W after an interaction at demand p.
double modified_demand(double p, const EngagementParams& params);

/// gamma * modified_demand(p).
double effective_discount(double p, const EngagementParams& params);

/// Timesteps until the next interaction. The first trial succeeds with
/// probability p and every later one with (1 - c) p. Empty when the user
/// never returns.
std::optional<std::uint64_t> sample_return_time(double p, const EngagementParams& params,
                                                Rng& rng);

/// d/dp log f~(p) in closed form.
/// Multiply by f'(x) for the state-level modified elasticity.
double log_modified_demand_slope(double p, const EngagementParams& params);

/// h(p) = 1/(1 - gamma p) - gamma p / (1 - gamma).
double h_regime(double p, double gamma);

/// Minimiser of h on [0, 1].
double h_regime_argmin(double gamma);

/// Long-run value of repeating content with the given mean revenue while the
/// user sits at demand p.
double asymptotic_utility(double p, const EngagementParams& params, double mean_revenue);

/// Three factors whose product is d/dx 1/(1 - gamma f~(f(x))).
struct FactorTerms {
  double utility_squared;  // (1 / (1 - gamma f~))^2
  double discount;         // gamma f~
  double elasticity;       // d/dx log f~
  double product() const { return utility_squared * discount * elasticity; }
};

FactorTerms factor_decomposition(double p, double dpdx, const EngagementParams& params);

/// ((2 - c gamma) p - 1) / ((1 - gamma)(1 - p gamma c)^3); its sign is the
/// sign of the friction/content cross partial of the two-phase Q-function.
double cross_partial_factor(double p, const EngagementParams& params);

/// Snap f down onto the (K - C_E) lattice: f'(x) = f(floor(x/s) s).
PiecewiseDemand round_demand(const PiecewiseDemand& f, const LinearLandscape& landscape);

namespace detail {
/// Unvalidated closed form of f~; accepts c slightly outside [0, 1] so that
/// finite-difference stencils can straddle the ends.
double modified_demand_raw(double p, double gamma, double friction);
}  // namespace detail

}  // namespace engage
