/******************************************************************************
 * Copyright (c) 2026, the koopman-mor project developers.
 * SPDX-License-Identifier: Apache-2.0
 *****************************************************************************/

#pragma once

#include <map>
#include <string>
#include <vector>

#include "koopman/dynsys.hpp"
#include "koopman/polynomial.hpp"
#include "koopman/types.hpp"

namespace koopman {

/// How a dictionary was built; enough to reconstruct it exactly.
struct DictionarySpec {
  std::string kind;  // "example1" | "monomial"
  int state_dim = 0;
  int max_degree = 0;          // monomial only
  bool include_constant = false;  // monomial only
  std::map<std::string, double> params;  // example1 system coefficients
};

/// One scalar observable, tagged with a symbolic descriptor and carrying its
/// exact polynomial expansion for evaluation.
struct DictionaryEntry {
  enum class Tag { Monomial, ComposedOutput, Constant };

  Tag tag = Tag::Monomial;
  Polynomial poly;              // over the state variables
  std::vector<int> exponents;   // Monomial: exponent per state variable
  int compose_steps = 0;        // ComposedOutput: output of the k-step map
  int output_index = 0;         // ComposedOutput: which output component (0-based)

  std::string descriptor() const;
};

/// Ordered, state-inclusive observable dictionary psi(x). The first n
/// entries are always the coordinate functions x_1..x_n; descriptors are
/// unique. Immutable after construction.
class Dictionary {
 public:
  Dictionary(int state_dim, std::vector<DictionaryEntry> entries, DictionarySpec spec);

  int state_dim() const { return state_dim_; }
  int lifted_dim() const { return static_cast<int>(entries_.size()); }
  const std::vector<DictionaryEntry>& entries() const { return entries_; }
  const DictionarySpec& spec() const { return spec_; }

  /// Entrywise evaluation in dictionary order; the first n values equal x
  /// bitwise.
  Vector eval(const Vector& x) const;

  /// Lift every column of a state block.
  Matrix eval_columns(const Matrix& states) const;

  /// Index of the entry with the given descriptor, or -1.
  int find(const std::string& descriptor) const;

 private:
  int state_dim_;
  std::vector<DictionaryEntry> entries_;
  DictionarySpec spec_;
};

/// Row-selection or general projection matrix. Selector kinds restrict every
/// row to a canonical basis vector e_j.
class Selector {
 public:
  enum class Kind { OutputSelector, StateProjector, General };

  static Selector canonical(Kind kind, std::vector<int> rows, int dim);
  static Selector general(Matrix matrix);

  Kind kind() const { return kind_; }
  const Matrix& matrix() const { return matrix_; }
  const std::vector<int>& rows() const { return rows_; }
  std::string descriptor() const;

 private:
  Selector() = default;

  Kind kind_ = Kind::General;
  Matrix matrix_;
  std::vector<int> rows_;
};

/// All monomials of total degree 1..max_degree over n variables, coordinates
/// first, graded-lexicographic within each degree, optional trailing constant.
/// Throws when the entry count would exceed entry_limit.
Dictionary monomial_dictionary(int state_dim, int max_degree, bool include_constant,
                               int entry_limit = 2000);

/// Coordinates only: psi(x) = x.
Dictionary identity_dictionary(int state_dim);

struct Example1Basis {
  Dictionary dictionary;
  Selector output_selector;  // picks the two output entries x1^2, x2^2
  Selector state_projector;  // picks the two coordinate entries
};

/// The 12-entry dictionary used with the built-in two-state oscillator:
/// x1, x2, x1^2, x2^2, x1 x2^2, x1^2 x2, x1^2 x2^2, the two components of
/// h(f(x)), the two components of h(f(f(x))), and the constant 1. Composed
/// entries expand the system's unforced map; the system must be two-state
/// with two outputs.
Example1Basis example1_dictionary(const DiscreteSystem& sys = DiscreteSystem::example1());

/// Lifting of the input, psi_u(u).
class InputDictionary {
 public:
  enum class Kind { Identity, SinAugmented };

  InputDictionary(Kind kind, int input_dim);

  Kind kind() const { return kind_; }
  int input_dim() const { return input_dim_; }
  /// Identity: m. SinAugmented: 2m, (u_1..u_m, sin u_1..sin u_m).
  int lifted_dim() const;
  Vector eval(const Vector& u) const;
  std::vector<std::string> descriptors() const;

 private:
  Kind kind_;
  int input_dim_;
};

}  // namespace koopman
