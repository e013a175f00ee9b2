/******************************************************************************
 * Copyright (c) 2026, the koopman-mor project developers.
 * SPDX-License-Identifier: Apache-2.0
 *****************************************************************************/

#pragma once

#include <string>
#include <vector>

#include "koopman/types.hpp"

namespace koopman {

/// One term of a multivariate polynomial: coeff * prod_i v_i^exponents[i].
struct MonomialTerm {
  double coeff = 0.0;
  std::vector<int> exponents;
};

/// Multivariate polynomial with real coefficients over a fixed variable count.
///
/// Terms are kept combined and sorted (graded lexicographic), so equal
/// polynomials built along different routes evaluate identically and print
/// identically. Exactly-zero coefficients are dropped; there is no epsilon
/// pruning.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(int num_vars) : num_vars_(num_vars) {}

  static Polynomial constant(int num_vars, double value);
  static Polynomial variable(int num_vars, int index);
  static Polynomial monomial(int num_vars, double coeff, std::vector<int> exponents);

  int num_vars() const { return num_vars_; }
  const std::vector<MonomialTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int total_degree() const;

  double eval(const Eigen::Ref<const Vector>& values) const;

  Polynomial derivative(int var) const;

  /// Substitute substitutions[i] for variable i. All substitutions must share
  /// a common variable count, which becomes the result's variable count.
  Polynomial compose(const std::vector<Polynomial>& substitutions) const;

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Polynomial& other);
  Polynomial& operator*=(double scalar);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Polynomial& b) { return a *= b; }
  friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
  friend Polynomial operator*(double s, Polynomial a) { return a *= s; }

  bool operator==(const Polynomial& other) const;

  std::string to_string() const;

 private:
  void add_term(double coeff, const std::vector<int>& exponents);
  void normalize();

  int num_vars_ = 0;
  std::vector<MonomialTerm> terms_;
};

using PolynomialVector = std::vector<Polynomial>;

/// Exact value of x^e for integer e >= 0 by repeated multiplication, so that
/// x^1 == x bitwise.
double int_pow(double x, int e);

}  // namespace koopman
