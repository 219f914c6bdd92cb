#include "engage/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace engage {

namespace {

constexpr double kFigureGamma = 0.9;

void require_interior(const std::vector<double>& p_grid) {
  for (double p : p_grid)
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("demand grid must lie in (0, 1)");
}

}  // namespace

void FigureTable::add_row(const std::vector<double>& row) {
  if (row.size() != columns.size()) throw std::invalid_argument("row width mismatch");
  if (data.empty()) data.resize(columns.size());
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (!std::isfinite(row[j])) throw std::domain_error("non-finite value in " + columns[j]);
    data[j].push_back(row[j]);
  }
}

const std::vector<double>& FigureTable::column(const std::string& col) const {
  const auto it = std::find(columns.begin(), columns.end(), col);
  if (it == columns.end()) throw std::out_of_range("no column " + col);
  return data.at(static_cast<std::size_t>(it - columns.begin()));
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n < 2) throw std::invalid_argument("linspace needs at least two points");
  std::vector<double> out(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t j = 0; j < n; ++j) out[j] = lo + step * static_cast<double>(j);
  out.back() = hi;
  return out;
}

std::vector<double> interior_p_grid() { return linspace(0.01, 0.99, 101); }
std::vector<double> closed_p_grid() { return linspace(0.0, 1.0, 101); }

FigureTable emit_h_curves(const std::vector<double>& gammas, const std::vector<double>& p_grid) {
  FigureTable t{"regime", {"gamma", "p", "h"}, {}, {{"gamma", gammas}}};
  for (double g : gammas)
    for (double p : p_grid) t.add_row({g, p, h_regime(p, g)});
  return t;
}

FigureTable emit_asymptotic_utility(const std::vector<double>& c_list,
                                    const std::vector<double>& p_grid) {
  FigureTable t{"asymp",
                {"c", "p", "U"},
                {},
                {{"c", c_list}, {"gamma", {kFigureGamma}}, {"mean_revenue", {1.0}}}};
  for (double c : c_list) {
    const EngagementParams params(kFigureGamma, c);
    for (double p : p_grid) t.add_row({c, p, asymptotic_utility(p, params, 1.0)});
  }
  return t;
}

FigureTable emit_factor_ratios(const std::vector<double>& p_grid) {
  require_interior(p_grid);
  FigureTable t{"terms",
                {"p", "ratio_A", "ratio_B", "ratio_C"},
                {},
                {{"gamma", {kFigureGamma}}, {"c_numerator", {1.0}}, {"c_denominator", {0.0}}}};
  const EngagementParams full(kFigureGamma, 1.0);
  const EngagementParams none(kFigureGamma, 0.0);
  for (double p : p_grid) {
    const FactorTerms hi = factor_decomposition(p, 1.0, full);
    const FactorTerms lo = factor_decomposition(p, 1.0, none);
    t.add_row({p, hi.utility_squared / lo.utility_squared, hi.discount / lo.discount,
               hi.elasticity / lo.elasticity});
  }
  return t;
}

FigureTable emit_elasticity_ratio(const std::vector<double>& c_list,
                                  const std::vector<double>& gamma_list,
                                  const std::vector<double>& p_grid) {
  require_interior(p_grid);
  FigureTable t{"elasticity", {"c", "gamma", "p", "ratio"}, {}, {{"c", c_list}, {"gamma", gamma_list}}};
  for (double c : c_list)
    for (double g : gamma_list) {
      const EngagementParams params(g, c);
      for (double p : p_grid) t.add_row({c, g, p, log_modified_demand_slope(p, params) * p});
    }
  return t;
}

FigureTable comparative_statics_check(const std::vector<double>& p_grid,
                                      const std::vector<double>& c_grid, double gamma) {
  require_interior(p_grid);
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in (0, 1)");
  constexpr double c_r = 1.0;
  constexpr double c_e = 0.0;
  constexpr double h = 1e-4;

  FigureTable t{"statics",
                {"p", "c", "analytic_A", "fd_cross_partial", "sign_agreement"},
                {},
                {{"gamma", {gamma}}, {"c_r", {c_r}}, {"c_e", {c_e}}, {"step", {h}}}};
  for (double p : p_grid) {
    const double shift = std::log(p / (1.0 - p));
    auto q = [&](double c, double i) {
      const double demand = 1.0 / (1.0 + std::exp(-(c_e + i + shift)));
      const double disc = gamma * detail::modified_demand_raw(demand, gamma, c);
      return (c_r - i) + (c_r + c_e) * disc / (1.0 - disc);
    };
    for (double c : c_grid) {
      const double a = cross_partial_factor(p, EngagementParams(gamma, c));
      const double fd = (q(c + h, h) - q(c + h, -h) - q(c - h, h) + q(c - h, -h)) / (4.0 * h * h);
      const bool agree = (a > 0.0 && fd > 0.0) || (a < 0.0 && fd < 0.0) || (a == 0.0 && fd == 0.0);
      t.add_row({p, c, a, fd, agree ? 1.0 : 0.0});
    }
  }
  return t;
}

std::vector<FrictionSweepRow> friction_sweep(const PiecewiseDemand& f,
                                             const LinearLandscape& landscape, double gamma,
                                             const std::vector<double>& c_grid) {
  std::vector<FrictionSweepRow> rows;
  rows.reserve(c_grid.size());
  for (double c : c_grid) {
    const SolveResult r = solve(f, landscape, EngagementParams(gamma, c));
    rows.push_back({c, r.value, r.equilibrium_state, r.equilibrium_demand, describe(r.plan)});
  }
  return rows;
}

Scenario friction_flip_scenario(double gamma, double p1, double p2, double c, double c_prime) {
  auto g = [&](double friction) {
    const EngagementParams params(gamma, friction);
    return 1.0 / (1.0 - effective_discount(p2, params)) -
           1.0 / (1.0 - effective_discount(p1, params));
  };
  const double gc = g(c);
  const double gcp = g(c_prime);
  if (!(gcp > gc)) throw std::invalid_argument("g(c') must exceed g(c)");
  const double b = gc + std::min(0.5 * (gcp - gc), 0.1);
  return {PiecewiseDemand({0.0, b}, {0.0, p1, p2}), LinearLandscape(1.0, 0.0, b), gamma};
}

Scenario high_engagement_scenario(double gamma, double p1, double p2, double eps) {
  const double b = gamma / (1.0 - gamma) * (eps + p2 - p1);
  if (!(b > 0.0)) throw std::invalid_argument("threshold must be positive");
  return {PiecewiseDemand({0.0, b}, {0.0, p1, p2}), LinearLandscape(1.0, 0.0, b), gamma};
}

}  // namespace engage
