#include "engage/core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace engage {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw std::invalid_argument(std::string(name) + " must be finite");
}

void require_probability(double p, const char* name) {
  require_finite(p, name);
  if (p < 0.0 || p > 1.0) throw std::domain_error(std::string(name) + " must lie in [0, 1]");
}

}  // namespace

Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
  return Rng(splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632BE59BD9B4E019ULL)));
}

EngagementParams::EngagementParams(double gamma, double friction)
    : gamma_(gamma), friction_(friction) {
  require_finite(gamma, "gamma");
  require_finite(friction, "friction");
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in (0, 1)");
  if (friction < 0.0 || friction > 1.0)
    throw std::invalid_argument("friction must lie in [0, 1]");
}

PiecewiseDemand::PiecewiseDemand(std::vector<double> breakpoints, std::vector<double> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
  if (values_.size() != breakpoints_.size() + 1)
    throw std::invalid_argument("demand needs exactly one more value than breakpoints");
  for (double b : breakpoints_) require_finite(b, "breakpoint");
  for (std::size_t i = 1; i < breakpoints_.size(); ++i)
    if (!(breakpoints_[i - 1] < breakpoints_[i]))
      throw std::invalid_argument("breakpoints must be strictly ascending");
  for (double v : values_) require_probability(v, "demand value");
  for (std::size_t i = 1; i < values_.size(); ++i)
    if (values_[i] < values_[i - 1])
      throw std::invalid_argument("demand values must be non-decreasing");
}

PiecewiseDemand PiecewiseDemand::constant(double value) { return PiecewiseDemand({}, {value}); }

double PiecewiseDemand::operator()(double x) const {
  // Index of the first breakpoint strictly greater than x == number of
  // breakpoints <= x, which is the piece index (right-continuous).
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  return values_[static_cast<std::size_t>(it - breakpoints_.begin())];
}

double PiecewiseDemand::snap(double x) const {
  auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), x);
  const double tol = 1e-9 * std::max(1.0, std::abs(x));
  if (it != breakpoints_.end() && *it - x <= tol) return *it;
  if (it != breakpoints_.begin() && x - *(it - 1) <= tol) return *(it - 1);
  return x;
}

LinearLandscape::LinearLandscape(double c_r, double c_e, double k_max)
    : c_r_(c_r), c_e_(c_e), k_max_(k_max) {
  require_finite(c_r, "c_r");
  require_finite(c_e, "c_e");
  require_finite(k_max, "k_max");
  if (c_r < 0.0) throw std::invalid_argument("c_r must be >= 0");
  if (!(k_max > 0.0)) throw std::invalid_argument("k_max must be > 0");
  if (c_e < 0.0 || !(c_e < k_max))
    throw std::invalid_argument("c_e must lie in [0, k_max)");
}

bool LinearLandscape::contains(double action, double tol) const {
  return action >= -k_max_ - tol && action <= k_max_ + tol;
}

namespace detail {

double modified_demand_raw(double p, double gamma, double friction) {
  const double q = (1.0 - friction) * p;
  return p + (1.0 - p) * q * gamma / (1.0 - gamma * (1.0 - q));
}

}  // namespace detail

double modified_demand(double p, const EngagementParams& params) {
  require_probability(p, "demand level");
  return std::clamp(detail::modified_demand_raw(p, params.gamma(), params.friction()), p, 1.0);
}

double effective_discount(double p, const EngagementParams& params) {
  return params.gamma() * modified_demand(p, params);
}

std::optional<std::uint64_t> sample_return_time(double p, const EngagementParams& params,
                                                Rng& rng) {
  require_probability(p, "demand level");
  std::bernoulli_distribution first(p);
  if (first(rng)) return 1;
  const double q = (1.0 - params.friction()) * p;
  if (q <= 0.0) return std::nullopt;
  // Failures before the first success of the re-engagement trials.
  std::geometric_distribution<std::uint64_t> later(q);
  return 2 + later(rng);
}

double log_modified_demand_slope(double p, const EngagementParams& params) {
  require_finite(p, "demand level");
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("demand level must lie in (0, 1)");
  const double g = params.gamma();
  const double k = 1.0 - params.friction();
  const double q = k * p;
  const double num = (1.0 - p) * q * g;
  const double den = 1.0 - g * (1.0 - q);
  const double dnum = g * (k * (1.0 - p) - q);
  const double dden = g * k;
  const double slope = 1.0 + (dnum * den - num * dden) / (den * den);
  return slope / (p + num / den);
}

double h_regime(double p, double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in (0, 1)");
  return 1.0 / (1.0 - gamma * p) - gamma / (1.0 - gamma) * p;
}

double h_regime_argmin(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in (0, 1)");
  return (1.0 - std::sqrt(1.0 - gamma)) / gamma;
}

double asymptotic_utility(double p, const EngagementParams& params, double mean_revenue) {
  return mean_revenue / (1.0 - effective_discount(p, params));
}

FactorTerms factor_decomposition(double p, double dpdx, const EngagementParams& params) {
  require_finite(dpdx, "dpdx");
  if (dpdx < 0.0) throw std::domain_error("demand slope must be >= 0");
  const double discount = effective_discount(p, params);
  const double utility = 1.0 / (1.0 - discount);
  return {utility * utility, discount, log_modified_demand_slope(p, params) * dpdx};
}

double cross_partial_factor(double p, const EngagementParams& params) {
  require_probability(p, "demand level");
  const double g = params.gamma();
  const double c = params.friction();
  const double denom = 1.0 - p * g * c;
  return ((2.0 - c * g) * p - 1.0) / ((1.0 - g) * denom * denom * denom);
}

PiecewiseDemand round_demand(const PiecewiseDemand& f, const LinearLandscape& landscape) {
  const double step = landscape.down_step();
  const auto bps = f.breakpoints();
  const auto vals = f.values();

  // Each jump moves to the lattice point at or above its breakpoint; a
  // breakpoint within rounding noise of the lattice stays put.
  std::vector<double> breakpoints;
  std::vector<double> values{vals.front()};
  std::optional<long long> open_cell;
  for (std::size_t j = 0; j < bps.size(); ++j) {
    const double ratio = bps[j] / step;
    const double nearest = std::round(ratio);
    const bool on_lattice = std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, std::abs(ratio));
    const auto cell = static_cast<long long>(on_lattice ? nearest : std::ceil(ratio));
    if (open_cell == cell) {
      values.back() = vals[j + 1];
    } else {
      breakpoints.push_back(static_cast<double>(cell) * step);
      values.push_back(vals[j + 1]);
      open_cell = cell;
    }
  }

  // Drop jumps that merged into no change.
  std::vector<double> kept_bps;
  std::vector<double> kept_vals{values.front()};
  for (std::size_t j = 0; j < breakpoints.size(); ++j) {
    if (values[j + 1] == kept_vals.back()) continue;
    kept_bps.push_back(breakpoints[j]);
    kept_vals.push_back(values[j + 1]);
  }
  return PiecewiseDemand(std::move(kept_bps), std::move(kept_vals));
}

}  // namespace engage
