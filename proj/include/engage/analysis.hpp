#pragma once

#include <string>
#include <utility>
#include <vector>

#include "engage/core.hpp"
#include "engage/dp_solver.hpp"

namespace engage {

/// Column-oriented table of finite reals plus the parameters that produced it.
struct FigureTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> data;  // data[column][row]
  std::vector<std::pair<std::string, std::vector<double>>> metadata;

  std::size_t rows() const { return data.empty() ? 0 : data.front().size(); }
  void add_row(const std::vector<double>& row);
  const std::vector<double>& column(const std::string& name) const;
};

/// n evenly spaced points from lo to hi inclusive.
std::vector<double> linspace(double lo, double hi, std::size_t n);

/// 101 points in [0.01, 0.99]; used where the demand level must be interior.
std::vector<double> interior_p_grid();
/// 101 points in [0, 1].
std::vector<double> closed_p_grid();

/// Columns gamma, p, h.
FigureTable emit_h_curves(const std::vector<double>& gammas, const std::vector<double>& p_grid);

/// Columns c, p, U with gamma = 0.9 and unit mean revenue.
FigureTable emit_asymptotic_utility(const std::vector<double>& c_list,
                                    const std::vector<double>& p_grid);

/// Columns p, ratio_A, ratio_B, ratio_C: each factor at c = 1 over its value
/// at c = 0, gamma = 0.9. The common demand slope cancels.
FigureTable emit_factor_ratios(const std::vector<double>& p_grid);

/// Columns c, gamma, p, ratio: d/dp log f~ over the classical 1/p.
FigureTable emit_elasticity_ratio(const std::vector<double>& c_list,
                                  const std::vector<double>& gamma_list,
                                  const std::vector<double>& p_grid);

/// Columns p, c, analytic_A, fd_cross_partial, sign_agreement (0 or 1).
///
/// The two-phase payoff shows content i once and then holds:
///   Q_c(i) = (C_R - i) + (C_R + C_E) G(f(C_E + i), c),  G = gamma f~ / (1 - gamma f~)
/// with the content axis oriented so that experience grows with i and a
/// logistic demand placed so that f = p at the evaluation point. The mixed
/// partial is a central difference in (c, i); its sign must match
/// cross_partial_factor.
FigureTable comparative_statics_check(const std::vector<double>& p_grid,
                                      const std::vector<double>& c_grid, double gamma);

struct FrictionSweepRow {
  double friction;
  double optimal_value;
  double equilibrium_state;  // -inf when the optimum exploits forever
  double equilibrium_demand;
  std::string plan_summary;
};

std::vector<FrictionSweepRow> friction_sweep(const PiecewiseDemand& f,
                                             const LinearLandscape& landscape, double gamma,
                                             const std::vector<double>& c_grid);

/// A demand function and landscape; friction is left to the caller.
struct Scenario {
  PiecewiseDemand demand;
  LinearLandscape landscape;
  double gamma;
};

/// Three satisfaction levels 0, p1, p2 with thresholds 0 and b, content in
/// [-b, b], revenue 1 + i and experience -i. b = g(c) + eps where
///   g(c) = 1/(1 - gamma f~_c(p2)) - 1/(1 - gamma f~_c(p1)),
///   eps  = min((g(c') - g(c)) / 2, 0.1),
/// which makes holding at 0 optimal at friction c and holding at b optimal
/// at c'. Requires g(c') > g(c).
Scenario friction_flip_scenario(double gamma, double p1, double p2, double c, double c_prime);

/// Same shape with b = gamma / (1 - gamma) (eps + p2 - p1), for comparing
/// c = 0 against c = 1.
Scenario high_engagement_scenario(double gamma, double p1, double p2, double eps);

}  // namespace engage
