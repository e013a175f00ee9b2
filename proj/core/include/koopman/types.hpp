/******************************************************************************
 * Copyright (c) 2026, the koopman-mor project developers.
 * SPDX-License-Identifier: Apache-2.0
 *****************************************************************************/

#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace koopman {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Error type thrown by every operation in this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A time horizon: either a finite number of steps or infinite.
struct Horizon {
  static Horizon finite(int steps) {
    if (steps < 0) throw Error("Horizon::finite: steps must be >= 0, got " + std::to_string(steps));
    return Horizon{false, steps};
  }
  static Horizon infinite() { return Horizon{true, -1}; }

  bool is_infinite = false;
  int steps = 0;
};

}  // namespace koopman
