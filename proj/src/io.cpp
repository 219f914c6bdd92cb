#include "engage/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

namespace engage::io {

namespace {

void require_object(const Json& j, const std::string& where) {
  if (!j.is_object()) throw InputError(where + ": expected an object");
}

void check_keys(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
  require_object(j, where);
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) throw InputError(where + ": unknown key '" + key + "'");
}

const Json& member(const Json& j, const std::string& key, const std::string& where) {
  const auto it = j.find(key);
  if (it == j.end()) throw InputError(where + ": missing key '" + key + "'");
  return *it;
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw InputError(where + ": expected a number");
  return j.get<double>();
}

std::uint64_t count(const Json& j, const std::string& where) {
  if (!j.is_number_unsigned()) throw InputError(where + ": expected a non-negative integer");
  return j.get<std::uint64_t>();
}

std::vector<double> numbers(const Json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) out.push_back(number(v, where));
  return out;
}

// Core constructors report violated invariants as invalid_argument or
// domain_error; surface them as input errors naming the block.
template <class F>
auto build(const std::string& where, F make) {
  try {
    return make();
  } catch (const std::invalid_argument& e) {
    throw InputError(where + ": " + e.what());
  } catch (const std::domain_error& e) {
    throw InputError(where + ": " + e.what());
  }
}

PiecewiseDemand parse_demand(const Json& j, const std::string& where) {
  check_keys(j, {"breakpoints", "values"}, where);
  auto bps = numbers(member(j, "breakpoints", where), where + ".breakpoints");
  auto vals = numbers(member(j, "values", where), where + ".values");
  return build(where, [&] { return PiecewiseDemand(std::move(bps), std::move(vals)); });
}

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

std::string fmt(double v) {
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

}  // namespace

ScenarioFile parse_scenario(const Json& doc) {
  check_keys(doc, {"engagement", "landscape", "demand", "simulation", "learning"}, "scenario");

  const Json& eng = member(doc, "engagement", "scenario");
  check_keys(eng, {"gamma", "friction"}, "engagement");
  const double gamma = number(member(eng, "gamma", "engagement"), "engagement.gamma");
  const double friction = number(member(eng, "friction", "engagement"), "engagement.friction");
  const EngagementParams params = build("engagement", [&] { return EngagementParams(gamma, friction); });

  const Json& land = member(doc, "landscape", "scenario");
  check_keys(land, {"c_r", "c_e", "k_max"}, "landscape");
  const double c_r = number(member(land, "c_r", "landscape"), "landscape.c_r");
  const double c_e = number(member(land, "c_e", "landscape"), "landscape.c_e");
  const double k = number(member(land, "k_max", "landscape"), "landscape.k_max");
  const LinearLandscape landscape = build("landscape", [&] { return LinearLandscape(c_r, c_e, k); });

  ScenarioFile out{params, landscape, parse_demand(member(doc, "demand", "scenario"), "demand"), {},
                   std::nullopt};

  if (const auto it = doc.find("simulation"); it != doc.end()) {
    check_keys(*it, {"t_max", "n_episodes", "seed"}, "simulation");
    if (it->contains("t_max")) {
      out.simulation.t_max = count(it->at("t_max"), "simulation.t_max");
      if (*out.simulation.t_max == 0) throw InputError("simulation.t_max: must be >= 1");
    }
    if (it->contains("n_episodes"))
      out.simulation.n_episodes = count(it->at("n_episodes"), "simulation.n_episodes");
    if (it->contains("seed")) out.simulation.seed = count(it->at("seed"), "simulation.seed");
  }

  if (const auto it = doc.find("learning"); it != doc.end()) {
    check_keys(*it, {"m", "n_users", "users", "revenue_bounds", "t_max"}, "learning");
    LearningSettings ls{number(member(*it, "m", "learning"), "learning.m"), 1000, {}, std::nullopt,
                        std::nullopt};
    if (!(ls.m > 0.0)) throw InputError("learning.m: must be positive");
    if (it->contains("n_users")) ls.n_users = count(it->at("n_users"), "learning.n_users");
    if (it->contains("users")) {
      const Json& users = it->at("users");
      if (!users.is_array()) throw InputError("learning.users: expected an array");
      for (std::size_t j = 0; j < users.size(); ++j) {
        const std::string where = "learning.users[" + std::to_string(j) + "]";
        check_keys(users[j], {"demand", "friction"}, where);
        const double c = users[j].contains("friction")
                             ? number(users[j].at("friction"), where + ".friction")
                             : friction;
        ls.users.push_back({parse_demand(member(users[j], "demand", where), where + ".demand"),
                            build(where, [&] { return EngagementParams(gamma, c); })});
      }
    }
    if (it->contains("revenue_bounds")) {
      const Json& rb = it->at("revenue_bounds");
      check_keys(rb, {"low", "high"}, "learning.revenue_bounds");
      const RevenueBounds b{number(member(rb, "low", "learning.revenue_bounds"), "low"),
                            number(member(rb, "high", "learning.revenue_bounds"), "high")};
      if (!(b.high > b.low)) throw InputError("learning.revenue_bounds: need high > low");
      ls.revenue_bounds = b;
    }
    if (it->contains("t_max")) {
      ls.t_max = count(it->at("t_max"), "learning.t_max");
      if (*ls.t_max == 0) throw InputError("learning.t_max: must be >= 1");
    }
    out.learning = std::move(ls);
  }
  return out;
}

ScenarioFile load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open scenario file '" + path + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
  return parse_scenario(doc);
}

std::vector<UserSpec> expand_users(const ScenarioFile& scenario, std::size_t n_users) {
  std::vector<UserSpec> pool;
  if (scenario.learning) pool = scenario.learning->users;
  if (pool.empty()) pool.push_back({scenario.demand, scenario.engagement});
  std::vector<UserSpec> out;
  out.reserve(n_users);
  for (std::size_t j = 0; j < n_users; ++j) out.push_back(pool[j % pool.size()]);
  return out;
}

Json plan_to_json(const PolicyPlan& plan) {
  Json tail;
  if (const auto* hold = std::get_if<HoldAt>(&plan.tail)) {
    tail["kind"] = "hold";
    tail["state"] = hold->state;
  } else {
    tail["kind"] = "exploit";
  }
  return Json{{"prefix", plan.prefix}, {"tail", tail}};
}

PolicyPlan plan_from_json(const Json& j) {
  check_keys(j, {"prefix", "tail"}, "plan");
  PolicyPlan plan;
  plan.prefix = numbers(member(j, "prefix", "plan"), "plan.prefix");
  const Json& tail = member(j, "tail", "plan");
  require_object(tail, "plan.tail");
  const Json& kind = member(tail, "kind", "plan.tail");
  if (kind == "hold") {
    check_keys(tail, {"kind", "state"}, "plan.tail");
    plan.tail = HoldAt{number(member(tail, "state", "plan.tail"), "plan.tail.state")};
  } else if (kind == "exploit") {
    check_keys(tail, {"kind"}, "plan.tail");
    plan.tail = ExploitForever{};
  } else {
    throw InputError("plan.tail.kind: expected \"hold\" or \"exploit\"");
  }
  return plan;
}

Json solve_to_json(const SolveResult& r) {
  return Json{{"value", r.value},
              {"plan", plan_to_json(r.plan)},
              {"equilibrium_state", number_or_null(r.equilibrium_state)},
              {"equilibrium_demand", r.equilibrium_demand}};
}

SolveResult solve_from_json(const Json& j) {
  check_keys(j, {"value", "plan", "equilibrium_state", "equilibrium_demand"}, "solution");
  const Json& eq = member(j, "equilibrium_state", "solution");
  return {number(member(j, "value", "solution"), "solution.value"),
          plan_from_json(member(j, "plan", "solution")),
          eq.is_null() ? -std::numeric_limits<double>::infinity()
                       : number(eq, "solution.equilibrium_state"),
          number(member(j, "equilibrium_demand", "solution"), "solution.equilibrium_demand")};
}

Json estimate_to_json(const Estimate& e) {
  return Json{{"mean", e.mean},
              {"std_error", e.std_error},
              {"truncation_bias", e.truncation_bias},
              {"samples", e.samples}};
}

Json episode_to_json(const EpisodeResult& e) {
  return Json{{"discounted_revenue", e.discounted_revenue},
              {"interactions", e.interactions},
              {"engaged_fraction", e.engaged_fraction},
              {"truncated_at", e.truncated_at}};
}

Json report_to_json(const RunReport& r) {
  Json rounds = Json::array();
  for (const auto& rr : r.rounds)
    rounds.push_back(Json{{"round", rr.round},
                          {"chosen_policy", rr.chosen_policy},
                          {"realized_revenue", rr.realized_revenue},
                          {"loss", rr.loss}});
  return Json{{"policies", r.policy_labels},
              {"rounds", rounds},
              {"summary",
               Json{{"regret", r.realized_regret},
                    {"expected_regret", r.expected_regret},
                    {"best_fixed_index", r.best_fixed_index},
                    {"best_fixed_value", r.best_fixed_value},
                    {"realized_total", r.realized_total},
                    {"bounds_violations", r.bounds_violations},
                    {"revenue_bounds", Json{{"low", r.bounds.low}, {"high", r.bounds.high}}},
                    {"t_max", r.t_max}}}};
}

void write_csv(std::ostream& out, const FigureTable& table) {
  for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << table.columns[c];
  out << '\n';
  for (std::size_t r = 0; r < table.rows(); ++r) {
    for (std::size_t c = 0; c < table.columns.size(); ++c)
      out << (c ? "," : "") << fmt(table.data[c][r]);
    out << '\n';
  }
}

void write_csv(std::ostream& out, const std::vector<FrictionSweepRow>& rows) {
  out << "friction,optimal_value,equilibrium_state,equilibrium_demand,plan_summary\n";
  for (const auto& r : rows)
    out << fmt(r.friction) << ',' << fmt(r.optimal_value) << ',' << fmt(r.equilibrium_state) << ','
        << fmt(r.equilibrium_demand) << ',' << r.plan_summary << '\n';
}

Json table_metadata(const FigureTable& table) {
  Json params = Json::object();
  for (const auto& [key, values] : table.metadata)
    params[key] = values.size() == 1 ? Json(values.front()) : Json(values);
  return Json{{"figure", table.name}, {"columns", table.columns}, {"parameters", params}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace engage::io
