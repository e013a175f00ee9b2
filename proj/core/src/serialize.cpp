/******************************************************************************
 * Copyright (c) 2026, the koopman-mor project developers.
 * SPDX-License-Identifier: Apache-2.0
 *****************************************************************************/

#include "koopman/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace koopman {

using nlohmann::json;

namespace {

json matrix_to_json(const Matrix& m) {
  json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  std::vector<double> data;
  data.reserve(static_cast<size_t>(m.size()));
  for (int i = 0; i < m.rows(); ++i)
    for (int c = 0; c < m.cols(); ++c) data.push_back(m(i, c));
  j["data"] = std::move(data);
  return j;
}

Matrix matrix_from_json(const json& j) {
  const int rows = j.at("rows").get<int>();
  const int cols = j.at("cols").get<int>();
  const auto data = j.at("data").get<std::vector<double>>();
  if (static_cast<int>(data.size()) != rows * cols)
    throw Error("matrix payload: data length does not match rows*cols");
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int c = 0; c < cols; ++c) m(i, c) = data[static_cast<size_t>(i) * cols + c];
  return m;
}

json vector_to_json(const Vector& v) {
  return json(std::vector<double>(v.begin(), v.end()));
}

Vector vector_from_json(const json& j) {
  const auto data = j.get<std::vector<double>>();
  Vector v(static_cast<Eigen::Index>(data.size()));
  for (size_t i = 0; i < data.size(); ++i) v[static_cast<Eigen::Index>(i)] = data[i];
  return v;
}

json parse(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(std::string(what) + ": malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

// Convert field-access failures (missing keys, wrong value types) into the
// library's own error type.
template <typename Fn>
auto guarded(const char* what, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw Error(std::string(what) + ": " + e.what());
  }
}

json selector_to_json(const Selector& s) {
  json j;
  switch (s.kind()) {
    case Selector::Kind::OutputSelector:
      j["kind"] = "output_selector";
      break;
    case Selector::Kind::StateProjector:
      j["kind"] = "state_projector";
      break;
    case Selector::Kind::General:
      j["kind"] = "general";
      break;
  }
  if (s.kind() != Selector::Kind::General) j["rows"] = s.rows();
  j["matrix"] = matrix_to_json(s.matrix());
  return j;
}

Selector selector_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const Matrix m = matrix_from_json(j.at("matrix"));
  if (kind == "general") return Selector::general(m);
  const auto rows = j.at("rows").get<std::vector<int>>();
  const auto k = (kind == "output_selector") ? Selector::Kind::OutputSelector
                                             : Selector::Kind::StateProjector;
  return Selector::canonical(k, rows, static_cast<int>(m.cols()));
}

json horizon_to_json(const Horizon& h) {
  if (h.is_infinite) return json("infinite");
  return json(h.steps);
}

Horizon horizon_from_json(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "infinite") return Horizon::infinite();
    throw Error("horizon: expected a step count or \"infinite\"");
  }
  return Horizon::finite(j.get<int>());
}

json dictionary_spec_to_json_obj(const DictionarySpec& spec) {
  json j;
  j["kind"] = spec.kind;
  j["n"] = spec.state_dim;
  if (spec.kind == "monomial") {
    j["max_degree"] = spec.max_degree;
    j["include_constant"] = spec.include_constant;
  }
  if (!spec.params.empty()) j["params"] = spec.params;
  return j;
}

DictionarySpec dictionary_spec_from_json_obj(const json& j) {
  DictionarySpec spec;
  spec.kind = j.at("kind").get<std::string>();
  spec.state_dim = j.value("n", 2);
  spec.max_degree = j.value("max_degree", 0);
  spec.include_constant = j.value("include_constant", false);
  if (j.contains("params")) spec.params = j.at("params").get<std::map<std::string, double>>();
  return spec;
}

json input_dictionary_to_json_obj(const InputDictionary& idict) {
  json j;
  j["kind"] = idict.kind() == InputDictionary::Kind::Identity ? "identity" : "sin_augmented";
  j["m"] = idict.input_dim();
  return j;
}

InputDictionary input_dictionary_from_json_obj(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const int m = j.value("m", 1);
  if (kind == "identity") return InputDictionary(InputDictionary::Kind::Identity, m);
  if (kind == "sin_augmented") return InputDictionary(InputDictionary::Kind::SinAugmented, m);
  throw Error("input dictionary: unknown kind '" + kind + "'");
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string trajectory_to_csv(const Trajectory& traj) {
  const int n = traj.state_dim();
  const int m = traj.input_dim();
  const int p = traj.output_dim();
  const int T = traj.horizon();

  std::ostringstream os;
  os << "t";
  for (int i = 0; i < n; ++i) os << ",x" << (i + 1);
  for (int i = 0; i < m; ++i) os << ",u" << (i + 1);
  for (int i = 0; i < p; ++i) os << ",y" << (i + 1);
  os << "\n";
  for (int t = 0; t <= T; ++t) {
    os << t;
    for (int i = 0; i < n; ++i) os << "," << format_double(traj.states(i, t));
    for (int i = 0; i < m; ++i) os << "," << format_double(t < T ? traj.inputs(i, t) : 0.0);
    for (int i = 0; i < p; ++i) os << "," << format_double(traj.outputs(i, t));
    os << "\n";
  }
  return os.str();
}

Trajectory trajectory_from_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) throw Error("trajectory CSV: empty file");

  int n = 0, m = 0, p = 0;
  {
    std::istringstream hs(line);
    std::string col;
    int idx = 0;
    while (std::getline(hs, col, ',')) {
      if (idx == 0) {
        if (col != "t") throw Error("trajectory CSV: header must start with 't'");
      } else if (col.size() >= 2 && col[0] == 'x') {
        ++n;
      } else if (col.size() >= 2 && col[0] == 'u') {
        ++m;
      } else if (col.size() >= 2 && col[0] == 'y') {
        ++p;
      } else {
        throw Error("trajectory CSV: unknown header column '" + col + "'");
      }
      ++idx;
    }
    if (n < 1 || p < 1) throw Error("trajectory CSV: header needs x and y columns");
  }

  std::vector<std::vector<double>> rows;
  int line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ls, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw Error("trajectory CSV: line " + std::to_string(line_no) + ": bad number '" + cell + "'");
      }
    }
    if (static_cast<int>(row.size()) != 1 + n + m + p)
      throw Error("trajectory CSV: line " + std::to_string(line_no) + ": expected " +
                  std::to_string(1 + n + m + p) + " cells, got " + std::to_string(row.size()));
    rows.push_back(std::move(row));
  }
  if (rows.size() < 2) throw Error("trajectory CSV: need at least two rows");

  const int T = static_cast<int>(rows.size()) - 1;
  Trajectory traj;
  traj.states.resize(n, T + 1);
  traj.inputs.resize(m, T);
  traj.outputs.resize(p, T + 1);
  for (int t = 0; t <= T; ++t) {
    const auto& row = rows[static_cast<size_t>(t)];
    for (int i = 0; i < n; ++i) traj.states(i, t) = row[static_cast<size_t>(1 + i)];
    if (t < T)
      for (int i = 0; i < m; ++i) traj.inputs(i, t) = row[static_cast<size_t>(1 + n + i)];
    for (int i = 0; i < p; ++i) traj.outputs(i, t) = row[static_cast<size_t>(1 + n + m + i)];
  }
  return traj;
}

void save_trajectory_csv(const std::string& path, const Trajectory& traj) {
  write_text_file(path, trajectory_to_csv(traj));
}

Trajectory load_trajectory_csv(const std::string& path) {
  return trajectory_from_csv(read_text_file(path));
}

std::string dictionary_spec_to_json(const DictionarySpec& spec) {
  return dictionary_spec_to_json_obj(spec).dump(2) + "\n";
}

DictionarySpec dictionary_spec_from_json(const std::string& text) {
  return guarded("dictionary spec",
                 [&] { return dictionary_spec_from_json_obj(parse(text, "dictionary spec")); });
}

Dictionary make_dictionary(const DictionarySpec& spec) {
  if (spec.kind == "example1")
    return example1_dictionary(DiscreteSystem::example1(spec.params)).dictionary;
  if (spec.kind == "monomial")
    return monomial_dictionary(spec.state_dim, spec.max_degree, spec.include_constant);
  throw Error("make_dictionary: unknown kind '" + spec.kind + "'");
}

std::string input_dictionary_to_json(const InputDictionary& idict) {
  return input_dictionary_to_json_obj(idict).dump(2) + "\n";
}

InputDictionary input_dictionary_from_json(const std::string& text) {
  return guarded("input dictionary",
                 [&] { return input_dictionary_from_json_obj(parse(text, "input dictionary")); });
}

std::string model_to_json(const KoopmanModel& model) {
  json j;
  j["schema"] = "koopman-model";
  j["lifted_dim"] = model.lifted_dim();
  j["state_dim"] = model.state_dim();
  j["input_lifted_dim"] = model.input_lifted_dim();
  j["dictionary"] = dictionary_spec_to_json_obj(model.dictionary.spec());
  if (model.input_dictionary)
    j["input_dictionary"] = input_dictionary_to_json_obj(*model.input_dictionary);
  j["W_h"] = selector_to_json(model.output_selector);
  j["P_x"] = selector_to_json(model.state_projector);
  j["K_x"] = matrix_to_json(model.K_x);
  j["K_u"] = matrix_to_json(model.K_u);
  j["zeta"] = model.regularization;
  j["fit_residual"] = model.fit_residual;
  return j.dump(2) + "\n";
}

KoopmanModel model_from_json(const std::string& text) {
  return guarded("model", [&] {
  const json j = parse(text, "model");
  if (j.value("schema", "") != "koopman-model") throw Error("model: missing schema 'koopman-model'");

  Dictionary dict = make_dictionary(dictionary_spec_from_json_obj(j.at("dictionary")));
  std::optional<InputDictionary> idict;
  if (j.contains("input_dictionary") && !j.at("input_dictionary").is_null())
    idict = input_dictionary_from_json_obj(j.at("input_dictionary"));

  KoopmanModel model{
      matrix_from_json(j.at("K_x")),
      matrix_from_json(j.at("K_u")),
      std::move(dict),
      std::move(idict),
      selector_from_json(j.at("W_h")),
      selector_from_json(j.at("P_x")),
      j.value("zeta", 0.0),
      j.value("fit_residual", 0.0),
  };
  if (model.K_x.rows() != model.dictionary.lifted_dim())
    throw Error("model: K_x side does not match the dictionary's lifted dimension");
  return model;
  });
}

void save_model_json(const std::string& path, const KoopmanModel& model) {
  write_text_file(path, model_to_json(model));
}

KoopmanModel load_model_json(const std::string& path) {
  return model_from_json(read_text_file(path));
}

std::string gramian_to_json(const Gramian& g) {
  const PsdReport psd = psd_check(g);
  json j;
  j["schema"] = "koopman-gramian";
  j["kind"] = g.kind == GramianKind::Observability ? "observability" : "controllability";
  j["horizon"] = horizon_to_json(g.horizon);
  j["projection"] = g.projection;
  j["normalized"] = g.normalized;
  j["matrix"] = matrix_to_json(g.matrix);
  j["lambda_min"] = psd.lambda_min;
  j["lambda_max"] = psd.lambda_max;
  return j.dump(2) + "\n";
}

Gramian gramian_from_json(const std::string& text) {
  return guarded("gramian", [&] {
  const json j = parse(text, "gramian");
  if (j.value("schema", "") != "koopman-gramian") throw Error("gramian: missing schema 'koopman-gramian'");
  Gramian g;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "observability")
    g.kind = GramianKind::Observability;
  else if (kind == "controllability")
    g.kind = GramianKind::Controllability;
  else
    throw Error("gramian: unknown kind '" + kind + "'");
  g.horizon = horizon_from_json(j.at("horizon"));
  g.projection = j.value("projection", "");
  g.normalized = j.value("normalized", false);
  g.matrix = matrix_from_json(j.at("matrix"));
  return g;
  });
}

void save_gramian_json(const std::string& path, const Gramian& g) {
  write_text_file(path, gramian_to_json(g));
}

Gramian load_gramian_json(const std::string& path) {
  return gramian_from_json(read_text_file(path));
}

std::string balanced_to_json(const BalancedRealization& bal) {
  json j;
  j["schema"] = "koopman-balanced";
  j["hsv"] = vector_to_json(bal.hsv);
  j["hsv_discarded"] = vector_to_json(bal.hsv_discarded);
  j["T"] = matrix_to_json(bal.transform);
  j["T_inv"] = matrix_to_json(bal.inverse_transform);
  j["A"] = matrix_to_json(bal.A);
  j["B"] = matrix_to_json(bal.B);
  j["C"] = matrix_to_json(bal.C);
  j["regularization_used"] = bal.regularization_used;
  return j.dump(2) + "\n";
}

BalancedRealization balanced_from_json(const std::string& text) {
  return guarded("balanced model", [&] {
  const json j = parse(text, "balanced model");
  if (j.value("schema", "") != "koopman-balanced")
    throw Error("balanced model: missing schema 'koopman-balanced'");
  BalancedRealization bal;
  bal.hsv = vector_from_json(j.at("hsv"));
  bal.hsv_discarded = vector_from_json(j.at("hsv_discarded"));
  bal.transform = matrix_from_json(j.at("T"));
  bal.inverse_transform = matrix_from_json(j.at("T_inv"));
  bal.A = matrix_from_json(j.at("A"));
  bal.B = matrix_from_json(j.at("B"));
  bal.C = matrix_from_json(j.at("C"));
  bal.regularization_used = j.value("regularization_used", 0.0);
  return bal;
  });
}

void save_balanced_json(const std::string& path, const BalancedRealization& bal) {
  write_text_file(path, balanced_to_json(bal));
}

BalancedRealization load_balanced_json(const std::string& path) {
  return balanced_from_json(read_text_file(path));
}

std::string reduced_to_json(const ReducedModel& rm) {
  json j;
  j["schema"] = "koopman-reduced";
  j["order"] = rm.order;
  j["A"] = matrix_to_json(rm.A);
  j["B"] = matrix_to_json(rm.B);
  j["C"] = matrix_to_json(rm.C);
  j["lift_in"] = matrix_to_json(rm.lift_in);
  j["bound_upper"] = rm.bound_upper;
  j["bound_lower"] = rm.bound_lower;
  j["bound_advisory"] = rm.bound_advisory;
  return j.dump(2) + "\n";
}

ReducedModel reduced_from_json(const std::string& text) {
  return guarded("reduced model", [&] {
  const json j = parse(text, "reduced model");
  if (j.value("schema", "") != "koopman-reduced")
    throw Error("reduced model: missing schema 'koopman-reduced'");
  ReducedModel rm;
  rm.order = j.at("order").get<int>();
  rm.A = matrix_from_json(j.at("A"));
  rm.B = matrix_from_json(j.at("B"));
  rm.C = matrix_from_json(j.at("C"));
  rm.lift_in = matrix_from_json(j.at("lift_in"));
  rm.bound_upper = j.value("bound_upper", 0.0);
  rm.bound_lower = j.value("bound_lower", 0.0);
  rm.bound_advisory = j.value("bound_advisory", false);
  return rm;
  });
}

void save_reduced_json(const std::string& path, const ReducedModel& rm) {
  write_text_file(path, reduced_to_json(rm));
}

ReducedModel load_reduced_json(const std::string& path) {
  return reduced_from_json(read_text_file(path));
}

std::string simulation_config_to_json(const SimulationConfig& cfg) {
  json j;
  j["system"] = cfg.system;
  if (!cfg.params.empty()) j["params"] = cfg.params;
  j["x0"] = vector_to_json(cfg.x0);
  j["horizon"] = cfg.horizon;
  json input;
  input["kind"] = cfg.input_kind;
  if (cfg.input_kind == "sin_ramp") input["mu"] = cfg.mu;
  if (cfg.input_kind == "samples") input["values"] = matrix_to_json(cfg.input_samples);
  j["input"] = input;
  if (cfg.system == "linear") {
    j["A"] = matrix_to_json(cfg.A);
    j["B"] = matrix_to_json(cfg.B);
    j["C"] = matrix_to_json(cfg.C);
  }
  return j.dump(2) + "\n";
}

SimulationConfig simulation_config_from_json(const std::string& text) {
  return guarded("simulation config", [&] {
  const json j = parse(text, "simulation config");
  SimulationConfig cfg;
  cfg.system = j.at("system").get<std::string>();
  if (j.contains("params")) cfg.params = j.at("params").get<std::map<std::string, double>>();
  cfg.x0 = vector_from_json(j.at("x0"));
  cfg.horizon = j.value("horizon", 1);
  if (j.contains("input")) {
    const json& input = j.at("input");
    cfg.input_kind = input.value("kind", "zero");
    cfg.mu = input.value("mu", 0.01);
    if (input.contains("values")) cfg.input_samples = matrix_from_json(input.at("values"));
  }
  if (cfg.system == "linear") {
    cfg.A = matrix_from_json(j.at("A"));
    cfg.B = j.contains("B") ? matrix_from_json(j.at("B")) : Matrix(cfg.A.rows(), 0);
    cfg.C = matrix_from_json(j.at("C"));
  }
  return cfg;
  });
}

DiscreteSystem make_system(const SimulationConfig& cfg) {
  if (cfg.system == "example1") return DiscreteSystem::example1(cfg.params);
  if (cfg.system == "example3") return DiscreteSystem::example3(cfg.params);
  if (cfg.system == "linear") return DiscreteSystem::linear(cfg.A, cfg.B, cfg.C);
  throw Error("make_system: unknown system '" + cfg.system + "'");
}

InputSignal make_input_signal(const SimulationConfig& cfg, int input_dim) {
  if (input_dim == 0) return InputSignal::zero(0);
  if (cfg.input_kind == "zero") return InputSignal::zero(input_dim);
  if (cfg.input_kind == "sin_ramp") return InputSignal::sin_ramp(input_dim, cfg.mu);
  if (cfg.input_kind == "samples") {
    if (cfg.input_samples.rows() != input_dim)
      throw Error("make_input_signal: sample rows do not match the system's input dimension");
    return InputSignal::samples(cfg.input_samples);
  }
  throw Error("make_input_signal: unknown input kind '" + cfg.input_kind + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file: " + path);
  out << contents;
  if (!contents.empty() && contents.back() != '\n') out << '\n';
  if (!out) throw Error("write failed: " + path);
}

}  // namespace koopman
