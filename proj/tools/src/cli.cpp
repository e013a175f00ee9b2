/******************************************************************************
 * Copyright (c) 2026, the koopman-mor project developers.
 * SPDX-License-Identifier: Apache-2.0
 *****************************************************************************/

#include "koopman/cli.hpp"

#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "koopman/balance.hpp"
#include "koopman/dictionary.hpp"
#include "koopman/dynsys.hpp"
#include "koopman/edmd.hpp"
#include "koopman/gramians.hpp"
#include "koopman/serialize.hpp"

namespace koopman::cli {

namespace {

namespace fs = std::filesystem;

struct GlobalFlags {
  bool quiet = false;
  bool json_logs = false;
};

void log_info(const GlobalFlags& g, const std::string& msg) {
  if (g.quiet) return;
  if (g.json_logs)
    std::cout << "{\"level\":\"info\",\"msg\":\"" << msg << "\"}" << std::endl;
  else
    std::cout << msg << std::endl;
}

Vector parse_vector(const std::string& text) {
  std::vector<double> vals;
  std::istringstream is(text);
  std::string cell;
  while (std::getline(is, cell, ',')) {
    try {
      vals.push_back(std::stod(cell));
    } catch (const std::exception&) {
      throw CLI::ValidationError("expected comma-separated numbers, got '" + text + "'");
    }
  }
  Vector v(static_cast<Eigen::Index>(vals.size()));
  for (size_t i = 0; i < vals.size(); ++i) v[static_cast<Eigen::Index>(i)] = vals[i];
  return v;
}

std::map<std::string, double> parse_params(const std::vector<std::string>& items) {
  std::map<std::string, double> params;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("expected name=value, got '" + item + "'");
    try {
      params[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw CLI::ValidationError("bad numeric value in '" + item + "'");
    }
  }
  return params;
}

Horizon parse_horizon(const std::string& text) {
  if (text == "inf" || text == "infinite") return Horizon::infinite();
  try {
    return Horizon::finite(std::stoi(text));
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    throw CLI::ValidationError("horizon must be a step count or 'inf', got '" + text + "'");
  }
}

// Output locations are checked before any computation starts.
void require_writable_target(const std::string& path) {
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty() && !fs::is_directory(parent))
    throw CLI::ValidationError("output directory does not exist: " + parent.string());
}

// Selectors implied by a dictionary kind: the example1 basis pins its output
// entries; monomial dictionaries read states as outputs unless output rows
// are given explicitly.
std::pair<Selector, Selector> selectors_for(const Dictionary& dict,
                                            const std::vector<int>& output_rows) {
  std::vector<int> state_rows(dict.state_dim());
  for (int i = 0; i < dict.state_dim(); ++i) state_rows[i] = i;
  const Selector P_x = Selector::canonical(Selector::Kind::StateProjector, state_rows,
                                           dict.lifted_dim());
  if (!output_rows.empty())
    return {Selector::canonical(Selector::Kind::OutputSelector, output_rows, dict.lifted_dim()), P_x};
  if (dict.spec().kind == "example1")
    return {Selector::canonical(Selector::Kind::OutputSelector, {2, 3}, dict.lifted_dim()), P_x};
  return {Selector::canonical(Selector::Kind::OutputSelector, state_rows, dict.lifted_dim()), P_x};
}

int cmd_simulate(const GlobalFlags& g, const std::string& config_path, const std::string& system,
                 const std::string& x0_text, int horizon, const std::vector<std::string>& params,
                 const std::string& input_kind, double mu, const std::string& out) {
  require_writable_target(out);
  SimulationConfig cfg;
  if (!config_path.empty()) {
    cfg = simulation_config_from_json(read_text_file(config_path));
  } else {
    cfg.system = system;
    cfg.params = parse_params(params);
    cfg.x0 = parse_vector(x0_text);
    cfg.horizon = horizon;
    cfg.input_kind = input_kind;
    cfg.mu = mu;
  }
  const DiscreteSystem sys = make_system(cfg);
  const InputSignal input = make_input_signal(cfg, sys.input_dim());
  const Trajectory traj = simulate(sys, cfg.x0, input, cfg.horizon);
  save_trajectory_csv(out, traj);
  log_info(g, "wrote " + out + " (" + std::to_string(traj.horizon() + 1) + " rows)");
  return 0;
}

int cmd_fit(const GlobalFlags& g, const std::vector<std::string>& traj_paths,
            const std::string& dict_path, const std::string& input_dict_path, double zeta,
            const std::vector<int>& output_rows, const std::string& out) {
  require_writable_target(out);
  std::vector<Trajectory> trajs;
  for (const auto& p : traj_paths) trajs.push_back(load_trajectory_csv(p));

  const Dictionary dict = make_dictionary(dictionary_spec_from_json(read_text_file(dict_path)));
  const auto [W_h, P_x] = selectors_for(dict, output_rows);

  KoopmanModel model = [&] {
    if (input_dict_path.empty()) {
      const SnapshotPair snaps = build_snapshots(trajs, dict);
      return fit_koopman(snaps, dict, W_h, P_x, zeta);
    }
    const InputDictionary idict = input_dictionary_from_json(read_text_file(input_dict_path));
    const SnapshotPair snaps = build_snapshots(trajs, dict, idict);
    return fit_koopman_with_input(snaps, dict, idict, W_h, P_x, zeta);
  }();

  save_model_json(out, model);
  log_info(g, "wrote " + out + " (fit residual " + format_double(model.fit_residual) + ")");
  return 0;
}

int cmd_gramians(const GlobalFlags& g, const std::string& model_path, const std::string& kind,
                 const std::string& horizon_text, const std::string& projection, bool do_normalize,
                 const std::string& out) {
  require_writable_target(out);
  const KoopmanModel model = load_model_json(model_path);
  const Horizon horizon = parse_horizon(horizon_text);

  Gramian gram = (kind == "obs") ? observability_gramian(model, horizon)
                                 : controllability_gramian(model, horizon);
  if (projection == "state") gram = project(gram, model.state_projector);
  if (do_normalize) gram = normalize(gram);
  save_gramian_json(out, gram);

  const PsdReport psd = psd_check(gram);
  log_info(g, "wrote " + out + " (lambda_min " + format_double(psd.lambda_min) + ", lambda_max " +
                  format_double(psd.lambda_max) + ")");
  return 0;
}

int cmd_balance(const GlobalFlags& g, const std::string& model_path, const std::string& xc_path,
                const std::string& xo_path, double eps_reg, const std::string& out) {
  require_writable_target(out);
  const KoopmanModel model = load_model_json(model_path);
  const Gramian xc = load_gramian_json(xc_path);
  const Gramian xo = load_gramian_json(xo_path);
  const BalancedRealization bal = balance(model, xc, xo, eps_reg);
  save_balanced_json(out, bal);
  std::ostringstream msg;
  msg << "wrote " << out << " (order " << bal.order();
  if (bal.hsv_discarded.size() > 0)
    msg << ", dropped " << bal.hsv_discarded.size() << " negligible directions";
  if (bal.regularization_used > 0.0)
    msg << ", regularized X_c by " << format_double(bal.regularization_used) << " I";
  msg << ")";
  log_info(g, msg.str());
  return 0;
}

int cmd_reduce(const GlobalFlags& g, const std::string& bal_path, int order, const std::string& out) {
  require_writable_target(out);
  const BalancedRealization bal = balanced_from_json(read_text_file(bal_path));
  const ReducedModel rm = truncate(bal, order);
  save_reduced_json(out, rm);
  std::ostringstream msg;
  msg << "wrote " << out << " (order " << rm.order << ", error bound [" << format_double(rm.bound_lower)
      << ", " << format_double(rm.bound_upper) << "]";
  if (rm.bound_advisory) msg << ", advisory only: balanced A is not stable";
  msg << ")";
  log_info(g, msg.str());
  return 0;
}

int cmd_demo(const GlobalFlags& g, int example, std::uint64_t seed, const std::string& out,
             std::string out_dir, const std::string& x0_text,
             const std::vector<std::string>& threshold_items) {
  DemoOptions options;
  options.seed = seed;
  if (out_dir.empty()) {
    const fs::path parent = fs::path(out).parent_path();
    out_dir = parent.empty() ? std::string(".") : parent.string();
  }
  options.out_dir = out_dir;
  if (!x0_text.empty()) options.x0 = parse_vector(x0_text);
  for (const auto& [name, value] : parse_params(threshold_items)) {
    if (demo_default_thresholds().find(name) == demo_default_thresholds().end())
      throw CLI::ValidationError("unknown demo threshold '" + name + "'");
    options.threshold_overrides[name] = value;
  }

  const DemoReport report = run_demo(example, options);
  save_demo_report(out, report);
  for (const auto& c : report.checks) {
    if (c.comparison == "none") continue;
    std::ostringstream line;
    line << (c.passed ? "PASS " : "FAIL ") << c.name << " (measured " << format_double(c.measured);
    if (c.comparison == "<=" || c.comparison == ">=")
      line << ", required " << c.comparison << " " << format_double(c.threshold);
    line << ")";
    log_info(g, line.str());
  }
  log_info(g, "wrote " + out);
  return report.all_passed() ? 0 : 1;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Koopman operator identification, gramians, and balanced truncation"};
  app.require_subcommand(1);

  GlobalFlags g;
  std::uint64_t global_seed = 0;
  app.add_flag("--quiet", g.quiet, "suppress informational output");
  app.add_flag("--json-logs", g.json_logs, "emit log lines as JSON objects");
  app.add_option("--seed", global_seed, "seed for any randomized data generation");

  // simulate
  auto* sim = app.add_subcommand("simulate", "roll a built-in system forward and write a CSV");
  std::string sim_config, sim_system = "example1", sim_x0 = "0.3,0.3", sim_input = "zero", sim_out;
  int sim_T = 25;
  double sim_mu = 0.01;
  std::vector<std::string> sim_params;
  sim->add_option("--config", sim_config, "simulation config JSON (overrides the other flags)");
  sim->add_option("--system", sim_system, "example1|example3|linear")
      ->check(CLI::IsMember({"example1", "example3", "linear"}));
  sim->add_option("--x0", sim_x0, "initial state, comma separated");
  sim->add_option("--T", sim_T, "number of steps")->check(CLI::PositiveNumber);
  sim->add_option("--params", sim_params, "system coefficient overrides, name=value");
  sim->add_option("--input", sim_input, "zero|sin_ramp")->check(CLI::IsMember({"zero", "sin_ramp"}));
  sim->add_option("--mu", sim_mu, "ramp slope for sin_ramp input");
  sim->add_option("--out", sim_out, "output trajectory CSV")->required();

  // fit
  auto* fit = app.add_subcommand("fit", "fit a Koopman operator from trajectory CSVs");
  std::vector<std::string> fit_trajs;
  std::string fit_dict, fit_idict, fit_out;
  double fit_zeta = 0.0;
  std::vector<int> fit_output_rows;
  fit->add_option("--traj", fit_trajs, "trajectory CSV files")->required()->expected(-1);
  fit->add_option("--dict", fit_dict, "dictionary spec JSON")->required();
  fit->add_option("--input-dict", fit_idict, "input dictionary spec JSON (enables the K_u block)");
  fit->add_option("--zeta", fit_zeta, "Tikhonov regularization weight")
      ->check(CLI::NonNegativeNumber);
  fit->add_option("--output-rows", fit_output_rows,
                  "dictionary entry indices (0-based) read as outputs; defaults per dictionary kind");
  fit->add_option("--out", fit_out, "output model JSON")->required();

  // gramians
  auto* gram = app.add_subcommand("gramians", "compute a lifted (optionally projected) gramian");
  std::string gram_model, gram_kind, gram_horizon = "inf", gram_project, gram_out;
  bool gram_normalize = false;
  gram->add_option("--model", gram_model, "model JSON")->required();
  gram->add_option("--kind", gram_kind, "obs|ctrl")->required()->check(CLI::IsMember({"obs", "ctrl"}));
  gram->add_option("--horizon", gram_horizon, "step count or 'inf'");
  gram->add_option("--project", gram_project, "project onto the state block")
      ->check(CLI::IsMember({"state"}));
  gram->add_flag("--normalize", gram_normalize, "divide by the largest absolute entry");
  gram->add_option("--out", gram_out, "output gramian JSON")->required();

  // balance
  auto* bal = app.add_subcommand("balance", "balance a model against a gramian pair");
  std::string bal_model, bal_xc, bal_xo, bal_out;
  double bal_eps = kAutoRegularization;
  bal->add_option("--model", bal_model, "model JSON")->required();
  bal->add_option("--xc", bal_xc, "controllability gramian JSON")->required();
  bal->add_option("--xo", bal_xo, "observability gramian JSON")->required();
  bal->add_option("--eps-reg", bal_eps, "regularization scale applied when X_c is ill conditioned");
  bal->add_option("--out", bal_out, "output balanced model JSON")->required();

  // reduce
  auto* red = app.add_subcommand("reduce", "truncate a balanced model to a reduced order");
  std::string red_bal, red_out;
  int red_order = 0;
  red->add_option("--bal", red_bal, "balanced model JSON")->required();
  red->add_option("--order", red_order, "reduced order (>= 1)")->required()->check(CLI::PositiveNumber);
  red->add_option("--out", red_out, "output reduced model JSON")->required();

  // demo
  auto* demo = app.add_subcommand("demo", "run a built-in end-to-end demonstration");
  int demo_example = 1;
  std::uint64_t demo_seed = 0;
  std::string demo_out = "demo_report.json", demo_dir, demo_x0;
  std::vector<std::string> demo_thresholds;
  demo->add_option("--example", demo_example, "which demonstration to run (1-4)")
      ->required()
      ->check(CLI::Range(1, 4));
  auto* demo_seed_opt = demo->add_option("--seed", demo_seed, "seed for randomized data generation");
  demo->add_option("--out", demo_out, "report JSON path");
  demo->add_option("--outdir", demo_dir, "artifact directory (defaults next to the report)");
  demo->add_option("--x0", demo_x0, "override the demo initial state");
  demo->add_option("--threshold", demo_thresholds, "override a check threshold, name=value");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (sim->parsed())
      return cmd_simulate(g, sim_config, sim_system, sim_x0, sim_T, sim_params, sim_input, sim_mu,
                          sim_out);
    if (fit->parsed())
      return cmd_fit(g, fit_trajs, fit_dict, fit_idict, fit_zeta, fit_output_rows, fit_out);
    if (gram->parsed())
      return cmd_gramians(g, gram_model, gram_kind, gram_horizon, gram_project, gram_normalize,
                          gram_out);
    if (bal->parsed()) return cmd_balance(g, bal_model, bal_xc, bal_xo, bal_eps, bal_out);
    if (red->parsed()) return cmd_reduce(g, red_bal, red_order, red_out);
    if (demo->parsed())
      return cmd_demo(g, demo_example, demo_seed_opt->count() > 0 ? demo_seed : global_seed,
                      demo_out, demo_dir, demo_x0, demo_thresholds);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return 2;
}

int run(const std::vector<std::string>& args) {
  std::vector<std::string> argv_storage;
  argv_storage.push_back("koopman");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  argv.reserve(argv_storage.size());
  for (const auto& s : argv_storage) argv.push_back(s.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace koopman::cli
