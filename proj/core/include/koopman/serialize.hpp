/******************************************************************************
 * Copyright (c) 2026, the koopman-mor project developers.
 * SPDX-License-Identifier: Apache-2.0
 *****************************************************************************/

#pragma once

#include <map>
#include <optional>
#include <string>

#include "koopman/balance.hpp"
#include "koopman/dictionary.hpp"
#include "koopman/dynsys.hpp"
#include "koopman/edmd.hpp"
#include "koopman/gramians.hpp"

namespace koopman {

// Trajectory CSV: header `t,x1..xn,u1..um,y1..yp`, one row per step,
// values printed with 17 significant digits so doubles round-trip exactly.
// The final row has no applied input; its input cells are written as 0 and
// ignored on load.
std::string trajectory_to_csv(const Trajectory& traj);
Trajectory trajectory_from_csv(const std::string& text);
void save_trajectory_csv(const std::string& path, const Trajectory& traj);
Trajectory load_trajectory_csv(const std::string& path);

// Dictionary specs. {"kind":"example1","params":{...}} or
// {"kind":"monomial","n":2,"max_degree":d,"include_constant":true}.
std::string dictionary_spec_to_json(const DictionarySpec& spec);
DictionarySpec dictionary_spec_from_json(const std::string& text);
Dictionary make_dictionary(const DictionarySpec& spec);

// Input dictionary specs: {"kind":"identity"|"sin_augmented","m":1}.
std::string input_dictionary_to_json(const InputDictionary& idict);
InputDictionary input_dictionary_from_json(const std::string& text);

// Learned model with dimensions, dictionary specs, selector descriptions,
// row-major operator payloads, zeta, and fit residual.
std::string model_to_json(const KoopmanModel& model);
KoopmanModel model_from_json(const std::string& text);
void save_model_json(const std::string& path, const KoopmanModel& model);
KoopmanModel load_model_json(const std::string& path);

// Gramian with kind, horizon, projection descriptor, normalized flag,
// matrix payload, and its eigenvalue extremes.
std::string gramian_to_json(const Gramian& g);
Gramian gramian_from_json(const std::string& text);
void save_gramian_json(const std::string& path, const Gramian& g);
Gramian load_gramian_json(const std::string& path);

std::string balanced_to_json(const BalancedRealization& bal);
BalancedRealization balanced_from_json(const std::string& text);
void save_balanced_json(const std::string& path, const BalancedRealization& bal);
BalancedRealization load_balanced_json(const std::string& path);

std::string reduced_to_json(const ReducedModel& rm);
ReducedModel reduced_from_json(const std::string& text);
void save_reduced_json(const std::string& path, const ReducedModel& rm);
ReducedModel load_reduced_json(const std::string& path);

/// Simulation run description; see the `simulate` CLI command.
struct SimulationConfig {
  std::string system = "example1";  // example1 | example3 | linear
  std::map<std::string, double> params;
  Vector x0;
  int horizon = 1;
  std::string input_kind = "zero";  // zero | sin_ramp | samples
  double mu = 0.01;
  Matrix input_samples;  // m x T, samples kind only
  Matrix A, B, C;        // linear system only
};

std::string simulation_config_to_json(const SimulationConfig& cfg);
SimulationConfig simulation_config_from_json(const std::string& text);
DiscreteSystem make_system(const SimulationConfig& cfg);
InputSignal make_input_signal(const SimulationConfig& cfg, int input_dim);

// Whole-file helpers. Reads throw with the path on failure; writes are
// newline-terminated UTF-8.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& contents);

/// 17-significant-digit decimal formatting used by every CSV artifact.
std::string format_double(double v);

}  // namespace koopman
