/******************************************************************************
 * Copyright (c) 2026, the koopman-mor project developers.
 * SPDX-License-Identifier: Apache-2.0
 *****************************************************************************/

#include "koopman/polynomial.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace koopman {

namespace {

// Graded lexicographic order on exponent vectors.
bool grlex_less(const std::vector<int>& a, const std::vector<int>& b) {
  const int da = std::accumulate(a.begin(), a.end(), 0);
  const int db = std::accumulate(b.begin(), b.end(), 0);
  if (da != db) return da < db;
  // Within a degree, x1-heavy terms first.
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

double int_pow(double x, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

Polynomial Polynomial::constant(int num_vars, double value) {
  Polynomial p(num_vars);
  p.add_term(value, std::vector<int>(num_vars, 0));
  p.normalize();
  return p;
}

Polynomial Polynomial::variable(int num_vars, int index) {
  if (index < 0 || index >= num_vars)
    throw Error("Polynomial::variable: index out of range");
  std::vector<int> e(num_vars, 0);
  e[index] = 1;
  return monomial(num_vars, 1.0, std::move(e));
}

Polynomial Polynomial::monomial(int num_vars, double coeff, std::vector<int> exponents) {
  if (static_cast<int>(exponents.size()) != num_vars)
    throw Error("Polynomial::monomial: exponent count does not match variable count");
  Polynomial p(num_vars);
  p.add_term(coeff, exponents);
  p.normalize();
  return p;
}

int Polynomial::total_degree() const {
  int d = 0;
  for (const auto& t : terms_)
    d = std::max(d, std::accumulate(t.exponents.begin(), t.exponents.end(), 0));
  return d;
}

double Polynomial::eval(const Eigen::Ref<const Vector>& values) const {
  if (values.size() != num_vars_)
    throw Error("Polynomial::eval: expected " + std::to_string(num_vars_) +
                " values, got " + std::to_string(values.size()));
  double sum = 0.0;
  for (const auto& t : terms_) {
    double v = t.coeff;
    for (int i = 0; i < num_vars_; ++i) v *= int_pow(values[i], t.exponents[i]);
    sum += v;
  }
  return sum;
}

Polynomial Polynomial::derivative(int var) const {
  if (var < 0 || var >= num_vars_) throw Error("Polynomial::derivative: variable index out of range");
  Polynomial out(num_vars_);
  for (const auto& t : terms_) {
    if (t.exponents[var] == 0) continue;
    auto e = t.exponents;
    const double c = t.coeff * e[var];
    e[var] -= 1;
    out.add_term(c, e);
  }
  out.normalize();
  return out;
}

Polynomial Polynomial::compose(const std::vector<Polynomial>& substitutions) const {
  if (static_cast<int>(substitutions.size()) != num_vars_)
    throw Error("Polynomial::compose: expected one substitution per variable");
  const int out_vars = substitutions.empty() ? 0 : substitutions.front().num_vars();
  for (const auto& s : substitutions)
    if (s.num_vars() != out_vars) throw Error("Polynomial::compose: inconsistent substitution variable counts");

  Polynomial result(out_vars);
  for (const auto& t : terms_) {
    Polynomial term = Polynomial::constant(out_vars, t.coeff);
    for (int i = 0; i < num_vars_; ++i)
      for (int k = 0; k < t.exponents[i]; ++k) term *= substitutions[i];
    result += term;
  }
  return result;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  if (num_vars_ != other.num_vars_) throw Error("Polynomial: variable count mismatch in +");
  for (const auto& t : other.terms_) add_term(t.coeff, t.exponents);
  normalize();
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  if (num_vars_ != other.num_vars_) throw Error("Polynomial: variable count mismatch in -");
  for (const auto& t : other.terms_) add_term(-t.coeff, t.exponents);
  normalize();
  return *this;
}

Polynomial& Polynomial::operator*=(const Polynomial& other) {
  if (num_vars_ != other.num_vars_) throw Error("Polynomial: variable count mismatch in *");
  std::vector<MonomialTerm> product;
  product.reserve(terms_.size() * other.terms_.size());
  for (const auto& a : terms_) {
    for (const auto& b : other.terms_) {
      MonomialTerm t;
      t.coeff = a.coeff * b.coeff;
      t.exponents.resize(num_vars_);
      for (int i = 0; i < num_vars_; ++i) t.exponents[i] = a.exponents[i] + b.exponents[i];
      product.push_back(std::move(t));
    }
  }
  terms_ = std::move(product);
  normalize();
  return *this;
}

Polynomial& Polynomial::operator*=(double scalar) {
  for (auto& t : terms_) t.coeff *= scalar;
  normalize();
  return *this;
}

bool Polynomial::operator==(const Polynomial& other) const {
  if (num_vars_ != other.num_vars_ || terms_.size() != other.terms_.size()) return false;
  for (size_t i = 0; i < terms_.size(); ++i)
    if (terms_[i].coeff != other.terms_[i].coeff || terms_[i].exponents != other.terms_[i].exponents)
      return false;
  return true;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    if (!first) os << " + ";
    first = false;
    os << t.coeff;
    for (int i = 0; i < num_vars_; ++i) {
      if (t.exponents[i] == 0) continue;
      os << "*x" << (i + 1);
      if (t.exponents[i] > 1) os << "^" << t.exponents[i];
    }
  }
  return os.str();
}

void Polynomial::add_term(double coeff, const std::vector<int>& exponents) {
  MonomialTerm t;
  t.coeff = coeff;
  t.exponents = exponents;
  terms_.push_back(std::move(t));
}

void Polynomial::normalize() {
  std::map<std::vector<int>, double> combined;
  for (const auto& t : terms_) combined[t.exponents] += t.coeff;
  terms_.clear();
  for (const auto& [e, c] : combined) {
    if (c == 0.0) continue;
    MonomialTerm t;
    t.coeff = c;
    t.exponents = e;
    terms_.push_back(std::move(t));
  }
  std::sort(terms_.begin(), terms_.end(),
            [](const MonomialTerm& a, const MonomialTerm& b) { return grlex_less(a.exponents, b.exponents); });
}

}  // namespace koopman
