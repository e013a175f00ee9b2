/******************************************************************************
 * Copyright (c) 2026, the koopman-mor project developers.
 * SPDX-License-Identifier: Apache-2.0
 *****************************************************************************/

#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

#include <json.hpp>

#include "koopman/balance.hpp"
#include "koopman/cli.hpp"
#include "koopman/dictionary.hpp"
#include "koopman/dynsys.hpp"
#include "koopman/edmd.hpp"
#include "koopman/gramians.hpp"
#include "koopman/serialize.hpp"

namespace koopman::cli {

namespace {

namespace fs = std::filesystem;

// The data-regeneration recipe behind each demo. The oscillator's fit for
// demo 1 trains on one sign quadrant with a small ridge: a richer sampling
// makes the regression recover the output rows exactly, which zeroes the
// short-horizon projected observability gramian and leaves nothing to
// normalize. The quadrant + ridge combination keeps the one-step prediction
// tight while the gramian stays informative (stable for zeta anywhere in
// 1e-9..1e-5).
struct Demo1Config {
  double lo1 = 0.05, hi1 = 0.5;    // training grid, x1 range
  double lo2 = -0.5, hi2 = -0.05;  // training grid, x2 range
  int grid1 = 4, grid2 = 5;
  int train_horizon = 30;
  double zeta = 1e-6;
  Vector heldout_x0 = (Vector(2) << 0.26, -0.33).finished();
  int heldout_horizon = 25;
};

struct Demo3Config {
  double lo = -0.5, hi = 0.5;
  int grid1 = 4, grid2 = 5;
  int train_horizon = 30;
  double zeta = 0.0;
  double mu = 0.01;
  Vector demo_x0 = (Vector(2) << 0.3, 0.3).finished();
  int demo_horizon = 50;
  int gramian_horizon = 20;  // demo-4 balancing horizon
};

Vector linspace(double lo, double hi, int count) {
  Vector v(count);
  for (int i = 0; i < count; ++i)
    v[i] = count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (count - 1);
  return v;
}

std::vector<Trajectory> grid_trajectories(const DiscreteSystem& sys, const Vector& g1,
                                          const Vector& g2, int horizon, const InputSignal& input) {
  std::vector<Trajectory> out;
  for (int i = 0; i < g1.size(); ++i) {
    for (int j = 0; j < g2.size(); ++j) {
      Vector x0(2);
      x0 << g1[i], g2[j];
      try {
        out.push_back(simulate(sys, x0, input, horizon));
      } catch (const Error&) {
        // Diverging initial conditions are dropped from the training set.
      }
    }
  }
  if (out.empty()) throw Error("demo: every training trajectory diverged");
  return out;
}

std::string table_csv(const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& columns) {
  std::ostringstream os;
  for (size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << "\n";
  const size_t rows = columns.empty() ? 0 : columns.front().size();
  for (size_t r = 0; r < rows; ++r) {
    for (size_t c = 0; c < columns.size(); ++c)
      os << (c ? "," : "") << format_double(columns[c][r]);
    os << "\n";
  }
  return os.str();
}

class DemoBuilder {
 public:
  DemoBuilder(int example, const DemoOptions& options) : options_(options) {
    report_.example = example;
    report_.seed = options.seed;
    fs::create_directories(options.out_dir);
  }

  double threshold(const std::string& name) const {
    auto it = options_.threshold_overrides.find(name);
    if (it != options_.threshold_overrides.end()) return it->second;
    return demo_default_thresholds().at(name);
  }

  void check_le(const std::string& name, const std::string& kind, double measured) {
    const double thr = threshold(name);
    report_.checks.push_back({name, kind, "<=", measured, thr, measured <= thr});
  }

  void check_ge(const std::string& name, const std::string& kind, double measured) {
    const double thr = threshold(name);
    report_.checks.push_back({name, kind, ">=", measured, thr, measured >= thr});
  }

  void check_bool(const std::string& name, const std::string& kind, bool ok, double measured) {
    report_.checks.push_back({name, kind, "bool", measured, 0.0, ok});
  }

  void value(const std::string& name, double measured) {
    report_.checks.push_back({name, "report", "none", measured, 0.0, true});
  }

  void config(const std::string& key, const std::string& val) { report_.config[key] = val; }

  // Artifacts land in out_dir; the report records the bare filename so the
  // report bytes do not depend on where the run was rooted.
  std::string artifact_path(const std::string& label, const std::string& filename) {
    report_.artifacts[label] = filename;
    return (fs::path(options_.out_dir) / filename).string();
  }

  const DemoOptions& options() const { return options_; }
  DemoReport take() { return std::move(report_); }

 private:
  DemoOptions options_;
  DemoReport report_;
};

std::string vec_str(const Vector& v) {
  std::ostringstream os;
  for (int i = 0; i < v.size(); ++i) os << (i ? "," : "") << format_double(v[i]);
  return os.str();
}

DemoReport demo_example1(const DemoOptions& options) {
  DemoBuilder b(1, options);
  Demo1Config cfg;
  if (options.x0) cfg.heldout_x0 = *options.x0;

  const DiscreteSystem sys = DiscreteSystem::example1();
  const Example1Basis basis = example1_dictionary(sys);

  const auto trajs = grid_trajectories(sys, linspace(cfg.lo1, cfg.hi1, cfg.grid1),
                                       linspace(cfg.lo2, cfg.hi2, cfg.grid2), cfg.train_horizon,
                                       InputSignal::zero(0));
  const SnapshotPair snaps = build_snapshots(trajs, basis.dictionary);
  const KoopmanModel model =
      fit_koopman(snaps, basis.dictionary, basis.output_selector, basis.state_projector, cfg.zeta);

  b.config("training_grid", std::to_string(cfg.grid1) + "x" + std::to_string(cfg.grid2) + " over [" +
                                format_double(cfg.lo1) + "," + format_double(cfg.hi1) + "]x[" +
                                format_double(cfg.lo2) + "," + format_double(cfg.hi2) + "]");
  b.config("train_horizon", std::to_string(cfg.train_horizon));
  b.config("zeta", format_double(cfg.zeta));
  b.config("heldout_x0", vec_str(cfg.heldout_x0));
  b.config("snapshots", std::to_string(snaps.count()));

  // One-step output prediction on a held-out trajectory.
  const Trajectory heldout = simulate(sys, cfg.heldout_x0, InputSignal::zero(0), cfg.heldout_horizon);
  const PredictionReport pr = prediction_error(model, heldout, PredictionMode::OneStep);
  b.check_le("example1.one_step_eps", "pattern", pr.total_error);

  // Short-horizon observability gramian, projected onto the state block.
  const Gramian lifted = observability_gramian(model, Horizon::finite(1));
  const Gramian projected = normalize(project(lifted, basis.state_projector));
  const Matrix& X = projected.matrix;
  const bool signs_ok = X(0, 0) > 0.0 && X(0, 1) < 0.0 && X(1, 0) < 0.0 && X(1, 1) > 0.0;
  b.check_bool("example1.proj_obs_sign_pattern", "pattern", signs_ok, X(0, 1));
  b.check_bool("example1.proj_obs_diag_order", "pattern", X(0, 0) > X(1, 1),
               X(1, 1) / X(0, 0));
  b.value("example1.fit_residual", model.fit_residual);

  save_model_json(b.artifact_path("model", "example1_model.json"), model);
  save_gramian_json(b.artifact_path("proj_obs_gramian", "example1_proj_obs_gramian.json"), projected);
  save_trajectory_csv(b.artifact_path("heldout_trajectory", "example1_heldout.csv"), heldout);
  {
    const LiftedPrediction pred = predict_one_step(model, heldout);
    std::vector<std::vector<double>> cols(5);
    for (int t = 0; t <= heldout.horizon(); ++t) {
      cols[0].push_back(t);
      cols[1].push_back(heldout.outputs(0, t));
      cols[2].push_back(heldout.outputs(1, t));
      cols[3].push_back(pred.outputs(0, t));
      cols[4].push_back(pred.outputs(1, t));
    }
    write_text_file(b.artifact_path("prediction", "example1_prediction.csv"),
                    table_csv({"t", "y1_true", "y2_true", "y1_pred", "y2_pred"}, cols));
  }
  return b.take();
}

DemoReport demo_example2(const DemoOptions& options) {
  DemoBuilder b(2, options);

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> rho_target(0.3, 0.9);

  const int n = 4, p = 2, draws = 20;
  b.config("draws", std::to_string(draws));
  b.config("state_dim", std::to_string(n));

  const Dictionary identity = identity_dictionary(n);
  std::vector<int> all_rows(n);
  for (int i = 0; i < n; ++i) all_rows[i] = i;

  double max_diff = 0.0;
  std::vector<std::vector<double>> cols(3);
  for (int d = 0; d < draws; ++d) {
    Matrix A(n, n), C(p, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) A(i, j) = unit(rng);
    A *= rho_target(rng) / spectral_radius(A);
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < n; ++j) C(i, j) = unit(rng);

    // Identity-dictionary lifting of a linear system is exact, so the model
    // is assembled directly from (A, C).
    KoopmanModel model{A,
                       Matrix(n, 0),
                       identity,
                       std::nullopt,
                       Selector::general(C),
                       Selector::canonical(Selector::Kind::StateProjector, all_rows, n),
                       0.0,
                       0.0};
    const Gramian koopman_side = observability_gramian(model, Horizon::infinite());

    // Independent oracle: direct accumulation until the tail is negligible.
    const double rho = spectral_radius(A);
    const int T = static_cast<int>(std::ceil(std::log(1e-14) / (2.0 * std::log(rho)))) + 1;
    const Matrix classical =
        linear_observability_gramian(LinearizedSystem{A, C, Vector::Zero(n)}, Horizon::finite(T));

    const double diff = (koopman_side.matrix - classical).cwiseAbs().maxCoeff();
    max_diff = std::max(max_diff, diff);
    cols[0].push_back(d);
    cols[1].push_back(rho);
    cols[2].push_back(diff);
  }

  b.check_le("example2.linear_equivalence_maxdiff", "oracle", max_diff);
  write_text_file(b.artifact_path("per_draw", "example2_equivalence.csv"),
                  table_csv({"draw", "rho", "maxdiff"}, cols));
  return b.take();
}

struct Example3Fit {
  DiscreteSystem sys;
  Example1Basis basis;
  InputDictionary input_dict;
  KoopmanModel model;
  Trajectory demo_traj;
  Demo3Config cfg;
};

Example3Fit fit_example3(const DemoOptions& options) {
  Demo3Config cfg;
  if (options.x0) cfg.demo_x0 = *options.x0;

  DiscreteSystem sys = DiscreteSystem::example3();
  Example1Basis basis = example1_dictionary(sys);
  InputDictionary idict(InputDictionary::Kind::SinAugmented, 1);

  const InputSignal ramp = InputSignal::sin_ramp(1, cfg.mu);
  const auto trajs = grid_trajectories(sys, linspace(cfg.lo, cfg.hi, cfg.grid1),
                                       linspace(cfg.lo, cfg.hi, cfg.grid2), cfg.train_horizon, ramp);
  const SnapshotPair snaps = build_snapshots(trajs, basis.dictionary, idict);
  KoopmanModel model = fit_koopman_with_input(snaps, basis.dictionary, idict, basis.output_selector,
                                              basis.state_projector, cfg.zeta);
  Trajectory demo_traj = simulate(sys, cfg.demo_x0, ramp, cfg.demo_horizon);
  return Example3Fit{std::move(sys), std::move(basis), std::move(idict), std::move(model),
                     std::move(demo_traj), cfg};
}

void describe_example3(DemoBuilder& b, const Example3Fit& fit) {
  b.config("training_grid", std::to_string(fit.cfg.grid1) + "x" + std::to_string(fit.cfg.grid2) +
                                " over [" + format_double(fit.cfg.lo) + "," +
                                format_double(fit.cfg.hi) + "]^2");
  b.config("train_horizon", std::to_string(fit.cfg.train_horizon));
  b.config("zeta", format_double(fit.cfg.zeta));
  b.config("input", "u1[t] = sin(t) + " + format_double(fit.cfg.mu) + "*t");
  b.config("demo_x0", vec_str(fit.cfg.demo_x0));
  b.config("demo_horizon", std::to_string(fit.cfg.demo_horizon));
}

DemoReport demo_example3(const DemoOptions& options) {
  DemoBuilder b(3, options);
  Example3Fit fit = fit_example3(options);
  describe_example3(b, fit);

  // Prediction quality is scored on the state channels (the quantities the
  // demo trajectory exposes); the squared outputs are not representable in
  // the span of psi(x) and (u, sin u), so output-channel one-step errors
  // cannot be driven to zero by any operator.
  const PredictionReport with_control =
      prediction_error(fit.model, fit.demo_traj, PredictionMode::WithControl, ErrorChannels::State);
  const PredictionReport open_loop = prediction_error(
      fit.model, fit.demo_traj, PredictionMode::OpenLoopIgnoringInput, ErrorChannels::State);
  b.check_le("example3.with_control_eps", "pattern", with_control.total_error);
  b.check_ge("example3.open_loop_eps", "pattern", open_loop.total_error);

  // Reachability of the two state directions from the input, scored on the
  // single-term gramian K_u K_u^T as displayed alongside phi_c.
  const Gramian ctrl = controllability_gramian(fit.model, Horizon::finite(0));
  const Gramian proj = project(ctrl, fit.basis.state_projector);
  b.check_le("example3.ctrl_gram_ratio", "pattern", proj.matrix(1, 1) / proj.matrix(0, 0));

  const Matrix phi0 = phi_c(fit.model, 0);
  b.check_le("example3.phi_c_x2_row", "pattern", phi0.row(1).cwiseAbs().maxCoeff());
  b.check_le("example3.phi_c_x1_lead", "pattern", std::abs(phi0(0, 0) - 1.0));

  save_model_json(b.artifact_path("model", "example3_model.json"), fit.model);
  save_gramian_json(b.artifact_path("proj_ctrl_gramian", "example3_proj_ctrl_gramian.json"), proj);
  save_trajectory_csv(b.artifact_path("demo_trajectory", "example3_trajectory.csv"), fit.demo_traj);
  {
    const LiftedPrediction ctrl_pred = predict_one_step(fit.model, fit.demo_traj, true);
    const LiftedPrediction open_pred = predict_one_step(fit.model, fit.demo_traj, false);
    std::vector<std::vector<double>> cols(7);
    for (int t = 0; t <= fit.demo_traj.horizon(); ++t) {
      cols[0].push_back(t);
      cols[1].push_back(fit.demo_traj.states(0, t));
      cols[2].push_back(fit.demo_traj.states(1, t));
      cols[3].push_back(ctrl_pred.states(0, t));
      cols[4].push_back(ctrl_pred.states(1, t));
      cols[5].push_back(open_pred.states(0, t));
      cols[6].push_back(open_pred.states(1, t));
    }
    write_text_file(
        b.artifact_path("prediction", "example3_prediction.csv"),
        table_csv({"t", "x1_true", "x2_true", "x1_ctrl", "x2_ctrl", "x1_open", "x2_open"}, cols));
  }
  return b.take();
}

DemoReport demo_example4(const DemoOptions& options) {
  DemoBuilder b(4, options);
  Example3Fit fit = fit_example3(options);
  describe_example3(b, fit);
  b.config("gramian_horizon", std::to_string(fit.cfg.gramian_horizon));

  const Gramian X_c = controllability_gramian(fit.model, Horizon::finite(fit.cfg.gramian_horizon));
  const Gramian X_o = observability_gramian(fit.model, Horizon::finite(fit.cfg.gramian_horizon));
  const BalancedRealization bal = balance(fit.model, X_c, X_o);

  if (bal.order() < 10)
    throw Error("demo 4: balanced realization kept only " + std::to_string(bal.order()) +
                " directions; cannot evaluate the spectrum gap");
  b.check_ge("example4.hsv_gap_9_10", "pattern", bal.hsv[8] / bal.hsv[9]);

  // Reduced models against the full lifted model's free run.
  const InputSignal ramp = InputSignal::sin_ramp(1, fit.cfg.mu);
  const LiftedPrediction full =
      predict_free_run(fit.model, fit.cfg.demo_x0, ramp, fit.cfg.demo_horizon);

  const std::vector<int> orders = {2, 6, bal.order()};
  std::vector<double> errors;
  std::vector<Matrix> outputs;
  for (int r : orders) {
    const ReducedModel rm = truncate(bal, r);
    const Matrix y = simulate_reduced(rm, fit.cfg.demo_x0, fit.basis.dictionary, fit.input_dict,
                                      ramp, fit.cfg.demo_horizon);
    outputs.push_back(y);
    double total = 0.0;
    for (int c = 0; c < y.rows(); ++c) total += (y.row(c) - full.outputs.row(c)).norm();
    errors.push_back(total);
    if (r == 2) save_reduced_json(b.artifact_path("reduced_r2", "example4_reduced_r2.json"), rm);
  }

  b.value("example4.reduced_order2_error", errors[0]);
  b.value("example4.reduced_order6_error", errors[1]);
  b.check_bool("example4.reduced_error_monotone", "pattern",
               errors[0] >= errors[1] && errors[1] >= errors[2], errors[0] - errors[1]);
  b.check_le("example4.full_order_error", "oracle", errors[2]);

  save_balanced_json(b.artifact_path("balanced", "example4_balanced.json"), bal);
  {
    std::vector<std::vector<double>> cols(2);
    for (int i = 0; i < bal.order(); ++i) {
      cols[0].push_back(i + 1);
      cols[1].push_back(bal.hsv[i]);
    }
    write_text_file(b.artifact_path("hsv", "example4_hsv.csv"), table_csv({"index", "sigma"}, cols));
  }
  {
    std::vector<std::string> header = {"t", "y1_true", "y2_true", "y1_full", "y2_full"};
    for (int r : {2, 6}) {
      header.push_back("y1_r" + std::to_string(r));
      header.push_back("y2_r" + std::to_string(r));
    }
    std::vector<std::vector<double>> cols(header.size());
    for (int t = 0; t <= fit.cfg.demo_horizon; ++t) {
      size_t c = 0;
      cols[c++].push_back(t);
      cols[c++].push_back(fit.demo_traj.outputs(0, t));
      cols[c++].push_back(fit.demo_traj.outputs(1, t));
      cols[c++].push_back(full.outputs(0, t));
      cols[c++].push_back(full.outputs(1, t));
      for (size_t k = 0; k < 2; ++k) {
        cols[c++].push_back(outputs[k](0, t));
        cols[c++].push_back(outputs[k](1, t));
      }
    }
    write_text_file(b.artifact_path("reduced_outputs", "example4_outputs.csv"),
                    table_csv(header, cols));
  }
  return b.take();
}

}  // namespace

const std::map<std::string, double>& demo_default_thresholds() {
  static const std::map<std::string, double> kThresholds = {
      {"example1.one_step_eps", 1e-3},
      {"example2.linear_equivalence_maxdiff", 1e-10},
      {"example3.with_control_eps", 1e-4},
      {"example3.open_loop_eps", 0.5},
      {"example3.ctrl_gram_ratio", 1e-6},
      {"example3.phi_c_x2_row", 1e-6},
      {"example3.phi_c_x1_lead", 1e-3},
      {"example4.hsv_gap_9_10", 10.0},
      {"example4.full_order_error", 1e-8},
  };
  return kThresholds;
}

bool DemoReport::all_passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

const DemoCheck* DemoReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

DemoReport run_demo(int example, const DemoOptions& options) {
  switch (example) {
    case 1:
      return demo_example1(options);
    case 2:
      return demo_example2(options);
    case 3:
      return demo_example3(options);
    case 4:
      return demo_example4(options);
    default:
      throw Error("demo: example must be 1, 2, 3, or 4");
  }
}

std::string demo_report_to_json(const DemoReport& report) {
  nlohmann::json j;
  j["schema"] = "koopman-demo-report";
  j["example"] = report.example;
  j["seed"] = report.seed;
  j["all_passed"] = report.all_passed();
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : report.checks) {
    nlohmann::json jc;
    jc["name"] = c.name;
    jc["kind"] = c.kind;
    jc["comparison"] = c.comparison;
    jc["measured"] = c.measured;
    if (c.comparison == "<=" || c.comparison == ">=") jc["threshold"] = c.threshold;
    jc["passed"] = c.passed;
    checks.push_back(std::move(jc));
  }
  j["checks"] = std::move(checks);
  j["config"] = report.config;
  j["artifacts"] = report.artifacts;
  return j.dump(2) + "\n";
}

void save_demo_report(const std::string& path, const DemoReport& report) {
  write_text_file(path, demo_report_to_json(report));
}

}  // namespace koopman::cli
