#include "engage/dp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace engage {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Number of steps of size `step` needed to cover `distance`, forgiving
// rounding noise in the quotient.
std::size_t steps_to_cover(double distance, double step) {
  const double r = distance / step;
  const double n = std::ceil(r - 1e-9 * std::max(1.0, r));
  return static_cast<std::size_t>(std::max(1.0, n));
}

PolicyPlan concat(const std::vector<double>& head, const PolicyPlan& rest) {
  PolicyPlan out;
  out.prefix = head;
  out.prefix.insert(out.prefix.end(), rest.prefix.begin(), rest.prefix.end());
  out.tail = rest.tail;
  return out;
}

// Trailing full exploit steps are implied by an exploit tail.
PolicyPlan canonical(PolicyPlan plan, const LinearLandscape& landscape) {
  if (std::holds_alternative<ExploitForever>(plan.tail))
    while (!plan.prefix.empty() && plan.prefix.back() == landscape.k_max()) plan.prefix.pop_back();
  return plan;
}

SolveResult finish(double value, PolicyPlan plan, const PiecewiseDemand& f,
                   const LinearLandscape& landscape) {
  plan = canonical(std::move(plan), landscape);
  double eq = -kInf;
  double demand = f.min_value();
  if (const auto* hold = std::get_if<HoldAt>(&plan.tail)) {
    eq = hold->state;
    demand = f(eq);
  }
  return {value, std::move(plan), eq, demand};
}

double hold_value(double x, const PiecewiseDemand& f, const LinearLandscape& landscape,
                  const EngagementParams& params) {
  return landscape.revenue(landscape.hold_action()) / (1.0 - effective_discount(f(x), params));
}

double exploit_tail_value(const PiecewiseDemand& f, const LinearLandscape& landscape,
                          const EngagementParams& params) {
  return landscape.revenue(landscape.k_max()) /
         (1.0 - effective_discount(f.min_value(), params));
}

// Point strictly below every breakpoint reached from d >= min_bp by full
// down-steps.
double below_all(double d, double min_bp, const LinearLandscape& landscape) {
  const double step = landscape.down_step();
  return d - step * (1.0 + std::floor((d - min_bp) / step));
}

}  // namespace

SegmentPayoff get_payoff(double from, double to, const PiecewiseDemand& f,
                         const LinearLandscape& landscape, const EngagementParams& params) {
  if (!std::isfinite(from) || !std::isfinite(to)) throw std::invalid_argument("non-finite state");
  if (from == to) throw std::invalid_argument("segment endpoints coincide");

  SegmentPayoff seg{0.0, 1.0, {}};
  double x = from;
  auto take = [&](double action, bool last) {
    seg.payoff += seg.discount * landscape.revenue(action);
    x = last ? to : x + landscape.experience(action);
    seg.discount *= effective_discount(f(x), params);
    seg.actions.push_back(action);
  };

  const double k = landscape.k_max();
  const double c_e = landscape.c_e();
  if (to < from) {
    const std::size_t n = steps_to_cover(from - to, landscape.down_step());
    for (std::size_t t = 1; t <= n; ++t) take(std::min(k, x - to + c_e), t == n);
  } else {
    const double step = landscape.up_step();
    const std::size_t n = steps_to_cover(to - from, step);
    const double residual = (to - from) - static_cast<double>(n - 1) * step;
    take(std::max(-k, c_e - std::min(residual, step)), n == 1);
    for (std::size_t t = 2; t <= n; ++t) take(-k, t == n);
  }
  return seg;
}

SolveResult solve(const PiecewiseDemand& f, const LinearLandscape& landscape,
                  const EngagementParams& params, double initial_state) {
  const auto bps = f.breakpoints();
  const double x0 = initial_state;
  if (!std::isfinite(x0)) throw std::invalid_argument("initial state must be finite");

  if (bps.empty()) {
    const double exploit = exploit_tail_value(f, landscape, params);
    const double stay = hold_value(x0, f, landscape, params);
    if (stay > exploit) return finish(stay, {{}, HoldAt{x0}}, f, landscape);
    return finish(exploit, {{}, ExploitForever{}}, f, landscape);
  }

  std::vector<double> keys(bps.begin(), bps.end());
  if (!std::binary_search(keys.begin(), keys.end(), x0))
    keys.insert(std::upper_bound(keys.begin(), keys.end(), x0), x0);

  struct Entry {
    double value = -kInf;
    PolicyPlan plan;
  };
  std::map<double, Entry> best;
  const double min_bp = bps.front();

  // Moving down: every key at or below the start, ascending.
  for (double d : keys) {
    if (d > x0) break;
    Entry& e = best[d];
    if (d < min_bp) {
      e.value = exploit_tail_value(f, landscape, params);
      e.plan = {{}, ExploitForever{}};
    } else {
      const SegmentPayoff dive =
          get_payoff(d, below_all(d, min_bp, landscape), f, landscape, params);
      e.value = dive.payoff + dive.discount * exploit_tail_value(f, landscape, params);
      e.plan = {dive.actions, ExploitForever{}};
    }
    for (double lower : bps) {
      if (lower >= d) break;
      const SegmentPayoff seg = get_payoff(d, lower, f, landscape, params);
      const Entry& next = best.at(lower);
      const double v = seg.payoff + seg.discount * next.value;
      if (v > e.value) {
        e.value = v;
        e.plan = concat(seg.actions, next.plan);
      }
    }
    const double stay = hold_value(d, f, landscape, params);
    if (stay > e.value) {
      e.value = stay;
      e.plan = {{}, HoldAt{d}};
    }
  }

  // Moving up: every key at or above the start, descending.
  for (auto it = keys.rbegin(); it != keys.rend(); ++it) {
    const double d = *it;
    if (d < x0) break;
    Entry& e = best[d];
    if (d != x0) {
      e.value = hold_value(d, f, landscape, params);
      e.plan = {{}, HoldAt{d}};
    }
    for (auto up = bps.rbegin(); up != bps.rend() && *up > d; ++up) {
      const SegmentPayoff seg = get_payoff(d, *up, f, landscape, params);
      const Entry& next = best.at(*up);
      const double v = seg.payoff + seg.discount * next.value;
      if (v > e.value) {
        e.value = v;
        e.plan = concat(seg.actions, next.plan);
      }
    }
  }

  const Entry& root = best.at(x0);
  return finish(root.value, root.plan, f, landscape);
}

SolveResult enumerate_oracle(const PiecewiseDemand& f, const LinearLandscape& landscape,
                             const EngagementParams& params, double initial_state) {
  const auto bps = f.breakpoints();
  if (bps.size() > 6) throw std::invalid_argument("enumeration oracle supports at most 6 breakpoints");
  const double x0 = initial_state;

  std::vector<PolicyPlan> candidates;
  candidates.push_back({{}, HoldAt{x0}});
  candidates.push_back({{}, ExploitForever{}});

  std::vector<double> below;
  std::vector<double> above;
  for (double b : bps) {
    if (b < x0) below.push_back(b);
    if (b > x0) above.push_back(b);
  }
  std::reverse(below.begin(), below.end());  // visiting order when descending

  auto chain_prefix = [&](const std::vector<double>& stops) {
    std::vector<double> actions;
    double x = x0;
    for (double s : stops) {
      const auto seg = get_payoff(x, s, f, landscape, params);
      actions.insert(actions.end(), seg.actions.begin(), seg.actions.end());
      x = s;
    }
    return actions;
  };

  for (std::uint32_t mask = 1; mask < (1u << below.size()); ++mask) {
    std::vector<double> stops;
    for (std::size_t j = 0; j < below.size(); ++j)
      if (mask & (1u << j)) stops.push_back(below[j]);
    const auto actions = chain_prefix(stops);
    candidates.push_back({actions, HoldAt{stops.back()}});
    // Continue down past every breakpoint, then exploit.
    auto dive = actions;
    const auto tail = get_payoff(stops.back(), below_all(stops.back(), bps.front(), landscape), f,
                                 landscape, params);
    dive.insert(dive.end(), tail.actions.begin(), tail.actions.end());
    candidates.push_back({dive, ExploitForever{}});
  }
  for (std::uint32_t mask = 1; mask < (1u << above.size()); ++mask) {
    std::vector<double> stops;
    for (std::size_t j = 0; j < above.size(); ++j)
      if (mask & (1u << j)) stops.push_back(above[j]);
    candidates.push_back({chain_prefix(stops), HoldAt{stops.back()}});
  }

  double best_value = -kInf;
  const PolicyPlan* best_plan = nullptr;
  for (const auto& plan : candidates) {
    const double v = plan_value(plan, f, landscape, params, x0);
    if (v > best_value) {
      best_value = v;
      best_plan = &plan;
    }
  }
  return finish(best_value, *best_plan, f, landscape);
}

double value_iteration_oracle(const PiecewiseDemand& f, const LinearLandscape& landscape,
                              const EngagementParams& params, double tol,
                              double initial_state) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  const auto bps = f.breakpoints();
  const double x0 = initial_state;
  const double down = landscape.down_step();
  const double up = landscape.up_step();
  const double k = landscape.k_max();

  std::vector<double> sources{x0};
  sources.insert(sources.end(), bps.begin(), bps.end());
  const double lo = *std::min_element(sources.begin(), sources.end());
  const double hi = *std::max_element(sources.begin(), sources.end());
  const double span = bps.empty() ? 0.0 : bps.back() - bps.front();
  const double buffer = std::ceil((span + k + landscape.c_e()) / down) + 2.0;
  const double floor_state = lo - buffer * down;

  // Candidate states: full-step rays from every source in both directions,
  // and up-step rays below every breakpoint (the approach of an ascent).
  std::vector<double> states;
  for (double s : sources) {
    for (double x = s; x >= floor_state; x -= down) states.push_back(x);
    for (double x = s + up; x <= hi; x += up) states.push_back(x);
  }
  for (double b : bps)
    for (double x = b - up; x >= floor_state; x -= up) states.push_back(x);
  std::sort(states.begin(), states.end());
  std::vector<double> uniq;
  for (double x : states)
    if (uniq.empty() || x - uniq.back() > 1e-9 * std::max(1.0, std::abs(x))) uniq.push_back(x);
  states = std::move(uniq);

  auto index_of = [&](double x) -> std::ptrdiff_t {
    auto it = std::lower_bound(states.begin(), states.end(), x - 1e-9 * std::max(1.0, std::abs(x)));
    if (it != states.end() && std::abs(*it - x) <= 1e-9 * std::max(1.0, std::abs(x)))
      return it - states.begin();
    return -1;
  };

  struct Move {
    double reward;
    double discount;
    std::ptrdiff_t target;  // -1: below the floor, value is the exploit tail
  };
  const double terminal = exploit_tail_value(f, landscape, params);
  std::vector<std::vector<Move>> moves(states.size());
  for (std::size_t s = 0; s < states.size(); ++s) {
    const double x = states[s];
    auto add = [&](double action, double y, std::ptrdiff_t target) {
      moves[s].push_back({landscape.revenue(action), effective_discount(f(y), params), target});
    };
    // Exact landings cover holding (y == x) and full steps that stay in the set.
    const auto first = std::lower_bound(states.begin(), states.end(), x - down - 1e-9);
    for (auto it = first; it != states.end() && *it <= x + up + 1e-9; ++it) {
      const double action = std::clamp(x + landscape.c_e() - *it, -k, k);
      add(action, *it, it - states.begin());
    }
    if (x - down < floor_state) add(k, x - down, -1);
  }

  std::vector<double> value(states.size(), 0.0);
  for (int sweep = 0; sweep < 100000; ++sweep) {
    double delta = 0.0;
    for (std::size_t s = 0; s < states.size(); ++s) {
      double v = -kInf;
      for (const Move& m : moves[s])
        v = std::max(v, m.reward + m.discount * (m.target < 0 ? terminal : value[m.target]));
      delta = std::max(delta, std::abs(v - value[s]));
      value[s] = v;
    }
    if (delta < tol) return value[index_of(x0)];
  }
  throw std::runtime_error("value iteration did not converge");
}

}  // namespace engage
