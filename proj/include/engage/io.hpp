#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "engage/analysis.hpp"
#include "engage/core.hpp"
#include "engage/dp_solver.hpp"
#include "engage/online_learner.hpp"
#include "engage/simulator.hpp"

namespace engage::io {

using Json = nlohmann::ordered_json;

/// Malformed or invalid user input; the cli maps it to exit code 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SimulationSettings {
  std::optional<std::uint64_t> t_max;  // default_t_max when absent
  std::size_t n_episodes = 10000;
  std::uint64_t seed = 0;
};

struct LearningSettings {
  double m;
  std::size_t n_users = 1000;
  std::vector<UserSpec> users;  // cycled to n_users; the scenario's own user when empty
  std::optional<RevenueBounds> revenue_bounds;
  std::optional<std::uint64_t> t_max;
};

/// A single JSON document:
///   engagement {gamma, friction}            required
///   landscape  {c_r, c_e, k_max}            required
///   demand     {breakpoints, values}        required
///   simulation {t_max, n_episodes, seed}    optional, all keys optional
///   learning   {m, n_users, users, revenue_bounds {low, high}, t_max}
///                                           optional; m required inside
/// Each entry of learning.users is {demand, friction?}; friction defaults to
/// the scenario's. Unknown keys are rejected everywhere.
struct ScenarioFile {
  EngagementParams engagement;
  LinearLandscape landscape;
  PiecewiseDemand demand;
  SimulationSettings simulation;
  std::optional<LearningSettings> learning;
};

ScenarioFile parse_scenario(const Json& doc);
ScenarioFile load_scenario(const std::string& path);

/// Users for the learning run: learning.users cycled to n_users.
std::vector<UserSpec> expand_users(const ScenarioFile& scenario, std::size_t n_users);

Json plan_to_json(const PolicyPlan& plan);
PolicyPlan plan_from_json(const Json& j);

/// equilibrium_state is null when the plan exploits forever.
Json solve_to_json(const SolveResult& r);
SolveResult solve_from_json(const Json& j);

Json estimate_to_json(const Estimate& e);
Json episode_to_json(const EpisodeResult& e);
Json report_to_json(const RunReport& r);

/// Comma-separated, header row, LF endings, 17 significant digits.
void write_csv(std::ostream& out, const FigureTable& table);
void write_csv(std::ostream& out, const std::vector<FrictionSweepRow>& rows);

/// {"figure", "columns", "parameters"} sidecar for a table.
Json table_metadata(const FigureTable& table);

/// Stable JSON text: two-space indent and a trailing newline.
std::string dump(const Json& j);

}  // namespace engage::io
