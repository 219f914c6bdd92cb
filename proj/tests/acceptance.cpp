// Acceptance criteria A1-A9. Prints one PASS/FAIL line per criterion and
// exits nonzero when any fails. Tolerances are pinned below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "engage/analysis.hpp"
#include "engage/cli.hpp"
#include "engage/dp_solver.hpp"
#include "engage/online_learner.hpp"
#include "engage/simulator.hpp"
#include "instances.hpp"

using namespace engage;

namespace {

constexpr double kValueTol = 0.01;          // A1, A2 closed-form values
constexpr double kA1Seconds = 1.0;
constexpr double kInteractionTol = 0.5;     // A4 interactions
constexpr double kUtilityTol = 0.3;         // A4 utilities
constexpr std::size_t kA4Episodes = 100000;
constexpr double kA4Seconds = 60.0;
constexpr std::size_t kA5Instances = 60;
constexpr std::size_t kA5MaxBreakpoints = 4;
constexpr double kEnumRelTol = 1e-9;
constexpr double kViRelTol = 1e-5;
constexpr double kA5Seconds = 300.0;
constexpr std::size_t kA5Episodes = 4000;
constexpr std::size_t kA6Samples = 100000;
constexpr double kSigmas = 3.0;             // A5, A6 Monte-Carlo bands
constexpr double kRegretRatio = 0.6;        // A7
constexpr double kCaptiveShortfall = 0.05;  // A7
constexpr double kSymmetryTol = 1e-6;       // A8
constexpr double kSignThreshold = 1e-6;     // A8

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1e-300});
}

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... xs) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, xs...);
  return buf;
}

const LinearLandscape kInstagram(1.0, 0.0, 6.0);
const PiecewiseDemand kInstagramDemand({0.0, 6.0}, {0.0, 0.6, 0.9});

Outcome a1() {
  const auto t0 = Clock::now();
  const SolveResult r = solve(kInstagramDemand, kInstagram, EngagementParams(0.95, 0.0));
  const double elapsed = seconds_since(t0);
  const double boost = plan_value({{-6.0}, HoldAt{6.0}}, kInstagramDemand, kInstagram,
                                  EngagementParams(0.95, 0.0));
  const bool ok = std::abs(r.value - 12.40) <= kValueTol &&
                  r.plan == PolicyPlan{{}, HoldAt{0.0}} && std::abs(boost - 12.10) <= kValueTol &&
                  elapsed < kA1Seconds;
  return {ok, fmt("value %.6f plan %s boost-hold %.6f time %.4fs", r.value,
                  describe(r.plan).c_str(), boost, elapsed)};
}

Outcome a2() {
  const SolveResult r = solve(kInstagramDemand, kInstagram, EngagementParams(0.95, 0.5));
  const double expect = 1.0 / 0.05995 - 6.0;
  bool ok = std::abs(r.value - expect) <= kValueTol &&
            r.plan == PolicyPlan{{-6.0}, HoldAt{6.0}};
  std::string detail = fmt("value %.6f plan %s", r.value, describe(r.plan).c_str());

  const auto rows = friction_sweep(kInstagramDemand, kInstagram, 0.95, linspace(0.0, 1.0, 11));
  bool state_up = true;
  bool value_down = true;
  for (std::size_t j = 1; j < rows.size(); ++j) {
    if (rows[j].equilibrium_state < rows[j - 1].equilibrium_state) {
      if (state_up)
        detail += fmt("; equilibrium_state drops from %g at c=%.1f to %g at c=%.1f",
                      rows[j - 1].equilibrium_state, rows[j - 1].friction,
                      rows[j].equilibrium_state, rows[j].friction);
      state_up = false;
    }
    if (rows[j].optimal_value > rows[j - 1].optimal_value) value_down = false;
  }
  detail += fmt("; sweep state non-decreasing %s, value non-increasing %s",
                state_up ? "yes" : "no", value_down ? "yes" : "no");
  return {ok && state_up && value_down, detail};
}

Outcome a3() {
  bool ok = true;
  std::string detail;
  for (const auto& [c, cp] : std::vector<std::pair<double, double>>{{0.0, 1.0}, {0.2, 0.7}}) {
    const Scenario s = friction_flip_scenario(0.9, 0.6, 0.99, c, cp);
    const double b = s.landscape.k_max();
    const auto lo = solve(s.demand, s.landscape, EngagementParams(s.gamma, c));
    const auto hi = solve(s.demand, s.landscape, EngagementParams(s.gamma, cp));
    ok = ok && lo.equilibrium_state == 0.0 && hi.equilibrium_state == b;
    detail += fmt("%s(c=%.1f: %g, c'=%.1f: %g, b=%.6f)", detail.empty() ? "" : " ", c,
                  lo.equilibrium_state, cp, hi.equilibrium_state, b);
  }
  return {ok, detail};
}

Outcome a4() {
  const auto t0 = Clock::now();
  const Scenario s = friction_flip_scenario(0.9, 0.6, 0.99, 0.0, 1.0);
  const EngagementParams free(s.gamma, 0.0);
  const EngagementParams full(s.gamma, 1.0);
  const PolicyPlan plan0 = solve(s.demand, s.landscape, free).plan;
  const PolicyPlan plan1 = solve(s.demand, s.landscape, full).plan;
  const MonteCarloConfig count_cfg{100, kA4Episodes, 2024, 0};
  const auto n0 = expected_interactions(plan0, s.demand, s.landscape, free, count_cfg);
  const auto n1 = expected_interactions(plan1, s.demand, s.landscape, full, count_cfg);
  // 0.98^1000 / 0.02 < 1e-7, far below the tolerance.
  const MonteCarloConfig util_cfg{1000, kA4Episodes, 2025, 0};
  const auto u0 = user_utility(plan0, s.demand, s.landscape, free, 1.0, 0.98, util_cfg);
  const auto u1 = user_utility(plan1, s.demand, s.landscape, full, 1.0, 0.98, util_cfg);
  const double elapsed = seconds_since(t0);
  const bool ok = std::abs(n0.mean - 60.4) <= kInteractionTol &&
                  std::abs(n1.mean - 63.4) <= kInteractionTol &&
                  std::abs(u0.mean - 30.0) <= kUtilityTol &&
                  std::abs(u1.mean - 33.5) <= kUtilityTol && elapsed < kA4Seconds;
  return {ok, fmt("interactions %.3f (se %.3f) vs %.3f (se %.3f); utility %.3f (se %.3f) vs "
                  "%.3f (se %.3f); time %.1fs",
                  n0.mean, n0.std_error, n1.mean, n1.std_error, u0.mean, u0.std_error, u1.mean,
                  u1.std_error, elapsed)};
}

Outcome a5() {
  const auto t0 = Clock::now();
  std::size_t enum_bad = 0;
  std::size_t vi_bad = 0;
  std::size_t mc_bad = 0;
  double worst_enum = 0.0;
  double worst_vi = 0.0;
  for (std::uint64_t seed = 0; seed < kA5Instances; ++seed) {
    const auto in = testing::random_instance(seed, kA5MaxBreakpoints + 1);
    const auto r = solve(in.demand, in.landscape, in.params, in.initial_state);
    const auto e = enumerate_oracle(in.demand, in.landscape, in.params, in.initial_state);
    const double vi =
        value_iteration_oracle(in.demand, in.landscape, in.params, 1e-12, in.initial_state);
    const double scale = std::max(std::abs(r.value), 1e-300);
    worst_enum = std::max(worst_enum, std::abs(r.value - e.value) / scale);
    worst_vi = std::max(worst_vi, std::abs(r.value - vi) / scale);
    if (!rel_close(r.value, e.value, kEnumRelTol)) ++enum_bad;
    if (!rel_close(r.value, vi, kViRelTol)) ++vi_bad;
    const MonteCarloConfig cfg{default_t_max(in.landscape, in.params), kA5Episodes, seed, 0,
                               in.initial_state};
    const auto mc = estimate_value(r.plan, in.demand, in.landscape, in.params, cfg);
    if (std::abs(mc.mean - r.value) > kSigmas * mc.std_error + mc.truncation_bias) ++mc_bad;
  }
  const double elapsed = seconds_since(t0);
  const bool ok = enum_bad == 0 && vi_bad == 0 && mc_bad == 0 && elapsed < kA5Seconds;
  return {ok, fmt("%zu instances; enum misses %zu (worst rel %.2e), VI misses %zu (worst rel "
                  "%.2e), MC misses %zu; time %.1fs",
                  kA5Instances, enum_bad, worst_enum, vi_bad, worst_vi, mc_bad, elapsed)};
}

Outcome a6() {
  std::size_t bad = 0;
  std::size_t cells = 0;
  double worst = 0.0;
  for (double p : {0.1, 0.3, 0.5, 0.7, 0.9})
    for (double c : {0.0, 0.25, 0.5, 0.75, 1.0})
      for (double g : {0.5, 0.8, 0.95}) {
        const EngagementParams params(g, c);
        const auto e = estimate_effective_discount(p, params, kA6Samples, 7000 + cells++);
        const double z = std::abs(e.mean - effective_discount(p, params)) / e.std_error;
        worst = std::max(worst, z);
        if (z > kSigmas) ++bad;
      }
  return {bad == 0, fmt("%zu cells, %zu outside %.0f se, worst %.2f se", cells, bad, kSigmas,
                        worst)};
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

Outcome a7() {
  // Two alternating users: one rewards building the state to 1, the other
  // never returns.
  const LinearLandscape l(1.0, 0.0, 1.0);
  const EngagementParams params(0.95, 0.0);
  const UserSpec eager{PiecewiseDemand({1.0}, {0.0, 0.9}), params};
  const UserSpec gone{PiecewiseDemand::constant(0.0), params};
  const PolicyClass cls = build_policy_class(1.0, l);
  std::vector<double> avg_regret;
  for (std::size_t n : {200u, 2000u}) {
    std::vector<UserSpec> users;
    for (std::size_t j = 0; j < n; ++j) users.push_back(j % 2 ? gone : eager);
    std::vector<double> per_seed;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      OnlineConfig cfg;
      cfg.seed = seed;
      cfg.bounds = RevenueBounds{0.0, 19.0};
      per_seed.push_back(run_online(users, l, cls, cfg).realized_regret /
                         static_cast<double>(n));
    }
    avg_regret.push_back(median(per_seed));
  }
  const double ratio = avg_regret[1] / avg_regret[0];

  const EngagementParams captive_params(0.9, 0.0);
  const std::vector<UserSpec> captive(2000, {PiecewiseDemand::constant(1.0), captive_params});
  OnlineConfig cfg;
  cfg.seed = 1;
  const RunReport r = run_online(captive, l, 1.0, cfg);
  double tail = 0.0;
  for (std::size_t j = 1500; j < 2000; ++j) tail += r.rounds[j].realized_revenue;
  tail /= 500.0;
  const double optimum = solve(PiecewiseDemand::constant(1.0), l, captive_params).value;
  const bool captive_ok = std::abs(tail - optimum) <= kCaptiveShortfall * optimum;

  return {ratio <= kRegretRatio && captive_ok,
          fmt("median avg regret %.4f at N=200, %.4f at N=2000, ratio %.3f; captive final "
              "quarter %.4f vs optimum %.4f",
              avg_regret[0], avg_regret[1], ratio, tail, optimum)};
}

Outcome a8() {
  std::vector<std::string> broken;
  const std::vector<double> gammas{0.5, 0.7, 0.9};
  const auto grid = closed_p_grid();
  const double step = grid[1] - grid[0];
  const FigureTable h = emit_h_curves(gammas, grid);
  for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
    const std::size_t first = gi * grid.size();
    const std::size_t last = first + grid.size() - 1;
    const auto& hv = h.column("h");
    if (std::abs(hv[first] - 1.0) > 1e-12 || std::abs(hv[last] - 1.0) > 1e-12)
      broken.push_back("h endpoints");
    const auto best = std::min_element(hv.begin() + first, hv.begin() + last + 1) - hv.begin();
    if (std::abs(h.column("p")[best] - h_regime_argmin(gammas[gi])) > step + 1e-12)
      broken.push_back("h argmin");
  }

  const std::vector<double> cs{0.0, 0.25, 0.5, 0.75, 1.0};
  const auto inner = interior_p_grid();
  const FigureTable el = emit_elasticity_ratio(cs, {0.9}, inner);
  for (std::size_t r = 0; r < el.rows(); ++r)
    if (el.column("c")[r] == 1.0 && std::abs(el.column("ratio")[r] - 1.0) > 1e-9)
      broken.push_back("elasticity at c=1");

  const FigureTable terms = emit_factor_ratios(inner);
  const auto& rc = terms.column("ratio_C");
  for (std::size_t r = 0; r < rc.size(); ++r)
    if (rc[r] < 1.0 || (r > 0 && !(rc[r] > rc[r - 1]))) broken.push_back("ratio_C");
  const FigureTable pairs = emit_factor_ratios({0.1, 0.2, 0.3, 0.4, 0.6, 0.7, 0.8, 0.9});
  const auto& ra = pairs.column("ratio_A");
  for (std::size_t k = 0; k < 4; ++k)
    if (std::abs(ra[k] - ra[7 - k]) > kSymmetryTol) broken.push_back("ratio_A symmetry");

  const FigureTable st = comparative_statics_check(inner, cs, 0.9);
  std::size_t checked = 0;
  std::size_t agree = 0;
  for (std::size_t r = 0; r < st.rows(); ++r)
    if (std::abs(st.column("analytic_A")[r]) > kSignThreshold) {
      ++checked;
      if (st.column("sign_agreement")[r] == 1.0) ++agree;
    }
  if (agree != checked) broken.push_back("statics signs");

  std::sort(broken.begin(), broken.end());
  broken.erase(std::unique(broken.begin(), broken.end()), broken.end());
  std::string detail = fmt("statics agreement %zu/%zu", agree, checked);
  for (const auto& b : broken) detail += "; broken: " + b;
  return {broken.empty(), detail};
}

Outcome a9() {
  const auto dir = std::filesystem::temp_directory_path() / "engage_acceptance_a9";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "scenario.json").string();
  std::ofstream(path) << R"({
  "engagement": {"gamma": 0.95, "friction": 0.5},
  "landscape": {"c_r": 1.0, "c_e": 0.0, "k_max": 6.0},
  "demand": {"breakpoints": [0.0, 6.0], "values": [0.0, 0.6, 0.9]},
  "simulation": {"n_episodes": 20000, "seed": 20240611}
})";
  auto run = [&](std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(args, out, err);
    return std::to_string(code) + "\n" + out.str() + err.str();
  };
  const std::vector<std::string> solve_args{"solve", path};
  const std::vector<std::string> sim_args{"simulate", path, "--threads", "0"};
  const bool solve_same = run(solve_args) == run(solve_args);
  const std::string sim = run(sim_args);
  const bool sim_same = sim == run(sim_args);
  std::filesystem::remove_all(dir);
  return {solve_same && sim_same && sim.front() == '0',
          fmt("solve identical %s, simulate identical %s", solve_same ? "yes" : "no",
              sim_same ? "yes" : "no")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"A1", a1}, {"A2", a2}, {"A3", a3}, {"A4", a4}, {"A5", a5},
      {"A6", a6}, {"A7", a7}, {"A8", a8}, {"A9", a9}};
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %s %s\n", name, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
