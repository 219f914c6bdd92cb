#include "engage/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <ostream>

#include "engage/io.hpp"

namespace engage {

namespace {

using io::InputError;
using io::Json;

// "a:b:n" for n evenly spaced points, or a comma-separated list.
std::vector<double> parse_grid(const std::string& text) {
  try {
    if (text.find(':') != std::string::npos) {
      const auto a = text.find(':');
      const auto b = text.find(':', a + 1);
      if (b == std::string::npos) throw InputError("grid '" + text + "': expected lo:hi:n");
      const double lo = std::stod(text.substr(0, a));
      const double hi = std::stod(text.substr(a + 1, b - a - 1));
      const long n = std::stol(text.substr(b + 1));
      if (n < 2) throw InputError("grid '" + text + "': need at least two points");
      return linspace(lo, hi, static_cast<std::size_t>(n));
    }
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
      const auto end = text.find(',', start);
      out.push_back(std::stod(text.substr(start, end - start)));
      if (end == std::string::npos) break;
      start = end + 1;
    }
    return out;
  } catch (const std::logic_error&) {
    throw InputError("grid '" + text + "': not a number list");
  }
}

PolicyPlan resolve_plan(const std::string& source, const io::ScenarioFile& s) {
  if (source == "solve") return solve(s.demand, s.landscape, s.engagement).plan;
  std::ifstream in(source);
  if (!in) throw InputError("cannot open plan file '" + source + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError(source + ": " + e.what());
  }
  // Accept either a bare plan or a solve result.
  PolicyPlan plan = io::plan_from_json(doc.contains("plan") ? doc.at("plan") : doc);
  try {
    validate(plan, s.landscape);
  } catch (const std::invalid_argument& e) {
    throw InputError(source + ": " + e.what());
  }
  return plan;
}

FigureTable make_figure(const std::string& figure, const std::vector<double>& c_list,
                        const std::vector<double>& gammas, std::size_t points) {
  if (figure == "regime") return emit_h_curves(gammas, linspace(0.0, 1.0, points));
  if (figure == "asymp") return emit_asymptotic_utility(c_list, linspace(0.0, 1.0, points));
  if (figure == "terms") return emit_factor_ratios(linspace(0.01, 0.99, points));
  if (figure == "elasticity")
    return emit_elasticity_ratio(c_list, gammas, linspace(0.01, 0.99, points));
  if (figure == "statics")
    return comparative_statics_check(linspace(0.01, 0.99, points), c_list, gammas.front());
  throw InputError("unknown figure '" + figure + "'");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Engagement-aware content policy toolkit"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string plan_source = "solve";
  std::optional<std::size_t> episodes;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> t_max;
  std::optional<std::size_t> users;
  std::optional<double> m_override;
  unsigned threads = 1;
  std::string figure;
  std::string out_dir = ".";
  std::string c_spec;
  std::string gamma_spec;
  std::size_t points = 101;
  std::string friction_grid = "0:1:11";
  std::string out_path;

  auto* solve_cmd = app.add_subcommand("solve", "Optimal plan by dynamic programming");
  solve_cmd->add_option("scenario", scenario_path, "Scenario JSON")->required();

  auto* sim_cmd = app.add_subcommand("simulate", "Monte-Carlo value of a plan");
  sim_cmd->add_option("scenario", scenario_path, "Scenario JSON")->required();
  sim_cmd->add_option("--plan", plan_source, "'solve' or a plan JSON file");
  sim_cmd->add_option("--episodes", episodes, "Episode count (default from scenario)");
  sim_cmd->add_option("--seed", seed, "64-bit seed (default from scenario)");
  sim_cmd->add_option("--t-max", t_max, "Truncation horizon");
  sim_cmd->add_option("--threads", threads, "Worker threads, 0 for all cores");

  auto* learn_cmd = app.add_subcommand("learn", "Exp3-IX over anchored hold policies");
  learn_cmd->add_option("scenario", scenario_path, "Scenario JSON")->required();
  learn_cmd->add_option("--users", users, "Number of users (default from scenario)");
  learn_cmd->add_option("--seed", seed, "64-bit seed (default from scenario)");
  learn_cmd->add_option("--m", m_override, "Half-width of the anchor range");

  auto* analyze_cmd = app.add_subcommand("analyze", "Write a figure table as CSV plus metadata");
  analyze_cmd->add_option("--figure", figure, "regime|asymp|terms|elasticity|statics")
      ->required()
      ->check(CLI::IsMember({"regime", "asymp", "terms", "elasticity", "statics"}));
  analyze_cmd->add_option("--out-dir", out_dir, "Output directory");
  analyze_cmd->add_option("--c", c_spec, "Friction values, list or lo:hi:n");
  analyze_cmd->add_option("--gamma", gamma_spec, "Discount factors, list or lo:hi:n");
  analyze_cmd->add_option("--points", points, "Demand grid size")->check(CLI::Range(2, 100000));

  auto* sweep_cmd = app.add_subcommand("sweep", "Optimal plan across a friction grid");
  sweep_cmd->add_option("scenario", scenario_path, "Scenario JSON")->required();
  sweep_cmd->add_option("--friction-grid", friction_grid, "List or lo:hi:n");
  sweep_cmd->add_option("--out", out_path, "CSV path (standard output when empty)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 1;
  }

  try {
    if (*solve_cmd) {
      const auto s = io::load_scenario(scenario_path);
      out << io::dump(io::solve_to_json(solve(s.demand, s.landscape, s.engagement)));
    } else if (*sim_cmd) {
      const auto s = io::load_scenario(scenario_path);
      const PolicyPlan plan = resolve_plan(plan_source, s);
      const std::uint64_t horizon =
          t_max.value_or(s.simulation.t_max.value_or(default_t_max(s.landscape, s.engagement)));
      if (horizon == 0) throw InputError("--t-max must be >= 1");
      const std::size_t n = episodes.value_or(s.simulation.n_episodes);
      const std::uint64_t sd = seed.value_or(s.simulation.seed);
      Json result{{"plan", io::plan_to_json(plan)},
                  {"exact_value", plan_value(plan, s.demand, s.landscape, s.engagement)},
                  {"t_max", horizon},
                  {"seed", sd}};
      if (n == 0) throw InputError("--episodes must be >= 1");
      if (n == 1) {
        Rng rng = make_stream(sd, 0);
        result["episode"] = io::episode_to_json(
            simulate_episode(plan, s.demand, s.landscape, s.engagement, horizon, rng));
      } else {
        result["estimate"] = io::estimate_to_json(
            estimate_value(plan, s.demand, s.landscape, s.engagement, {horizon, n, sd, threads}));
      }
      out << io::dump(result);
    } else if (*learn_cmd) {
      const auto s = io::load_scenario(scenario_path);
      const double m = m_override ? *m_override : (s.learning ? s.learning->m : 0.0);
      if (!(m > 0.0)) throw InputError("learning.m or --m must be positive");
      const std::size_t n = users.value_or(s.learning ? s.learning->n_users : 1000);
      if (n == 0) throw InputError("--users must be >= 1");
      OnlineConfig cfg;
      cfg.seed = seed.value_or(s.simulation.seed);
      if (s.learning) {
        cfg.bounds = s.learning->revenue_bounds;
        cfg.t_max = s.learning->t_max;
      }
      const auto stream = io::expand_users(s, n);
      out << io::dump(io::report_to_json(run_online(stream, s.landscape, m, cfg)));
    } else if (*analyze_cmd) {
      const std::vector<double> c_list =
          c_spec.empty() ? std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0} : parse_grid(c_spec);
      std::vector<double> gammas = gamma_spec.empty()
                                       ? (figure == "regime" ? std::vector<double>{0.5, 0.7, 0.9}
                                                             : std::vector<double>{0.9})
                                       : parse_grid(gamma_spec);
      FigureTable table = [&] {
        try {
          return make_figure(figure, c_list, gammas, points);
        } catch (const std::invalid_argument& e) {
          throw InputError(e.what());
        } catch (const std::domain_error& e) {
          throw InputError(e.what());
        }
      }();
      const std::filesystem::path dir(out_dir);
      std::filesystem::create_directories(dir);
      const auto csv_path = dir / (figure + ".csv");
      const auto meta_path = dir / (figure + ".json");
      {
        std::ofstream csv(csv_path, std::ios::binary);
        io::write_csv(csv, table);
        std::ofstream meta(meta_path, std::ios::binary);
        meta << io::dump(io::table_metadata(table));
        if (!csv || !meta) throw InputError("cannot write to '" + out_dir + "'");
      }
      out << csv_path.string() << '\n' << meta_path.string() << '\n';
    } else if (*sweep_cmd) {
      const auto s = io::load_scenario(scenario_path);
      const auto grid = parse_grid(friction_grid);
      std::vector<FrictionSweepRow> rows;
      try {
        rows = friction_sweep(s.demand, s.landscape, s.engagement.gamma(), grid);
      } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
      }
      if (out_path.empty()) {
        io::write_csv(out, rows);
      } else {
        std::ofstream csv(out_path, std::ios::binary);
        io::write_csv(csv, rows);
        if (!csv) throw InputError("cannot write '" + out_path + "'");
        out << out_path << '\n';
      }
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace engage
