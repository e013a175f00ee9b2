/******************************************************************************
 * Copyright (c) 2026, the koopman-mor project developers.
 * SPDX-License-Identifier: Apache-2.0
 *****************************************************************************/

#include "koopman/dictionary.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace koopman {

std::string DictionaryEntry::descriptor() const {
  switch (tag) {
    case Tag::Constant:
      return "1";
    case Tag::Monomial: {
      std::ostringstream os;
      bool first = true;
      for (size_t i = 0; i < exponents.size(); ++i) {
        if (exponents[i] == 0) continue;
        if (!first) os << "*";
        first = false;
        os << "x" << (i + 1);
        if (exponents[i] > 1) os << "^" << exponents[i];
      }
      return first ? "1" : os.str();
    }
    case Tag::ComposedOutput: {
      std::ostringstream os;
      os << "h" << (output_index + 1) << "(f^" << compose_steps << "(x))";
      return os.str();
    }
  }
  throw Error("DictionaryEntry::descriptor: unreachable");
}

Dictionary::Dictionary(int state_dim, std::vector<DictionaryEntry> entries, DictionarySpec spec)
    : state_dim_(state_dim), entries_(std::move(entries)), spec_(std::move(spec)) {
  if (state_dim_ < 1) throw Error("Dictionary: state_dim must be positive");
  if (static_cast<int>(entries_.size()) < state_dim_)
    throw Error("Dictionary: must contain at least the coordinate functions");

  // State inclusivity: entry i must be the coordinate monomial x_{i+1}.
  for (int i = 0; i < state_dim_; ++i) {
    const auto& e = entries_[i];
    std::vector<int> want(state_dim_, 0);
    want[i] = 1;
    if (e.tag != DictionaryEntry::Tag::Monomial || e.exponents != want)
      throw Error("Dictionary: entries 0.." + std::to_string(state_dim_ - 1) +
                  " must be the coordinate functions in order (state inclusivity)");
  }

  std::set<std::string> seen;
  for (const auto& e : entries_) {
    if (e.poly.num_vars() != state_dim_)
      throw Error("Dictionary: entry polynomial variable count mismatch");
    if (!seen.insert(e.descriptor()).second)
      throw Error("Dictionary: duplicate entry descriptor '" + e.descriptor() + "'");
  }
}

Vector Dictionary::eval(const Vector& x) const {
  if (x.size() != state_dim_) throw Error("Dictionary::eval: state dimension mismatch");
  if (!x.allFinite()) throw Error("Dictionary::eval: non-finite state");
  Vector v(lifted_dim());
  for (int i = 0; i < lifted_dim(); ++i) v[i] = entries_[i].poly.eval(x);
  if (!v.allFinite()) throw Error("Dictionary::eval: non-finite entry value");
  return v;
}

Matrix Dictionary::eval_columns(const Matrix& states) const {
  Matrix out(lifted_dim(), states.cols());
  for (int j = 0; j < states.cols(); ++j) out.col(j) = eval(states.col(j));
  return out;
}

int Dictionary::find(const std::string& descriptor) const {
  for (int i = 0; i < lifted_dim(); ++i)
    if (entries_[i].descriptor() == descriptor) return i;
  return -1;
}

Selector Selector::canonical(Kind kind, std::vector<int> rows, int dim) {
  if (kind == Kind::General) throw Error("Selector::canonical: kind must be a selector kind");
  Selector s;
  s.kind_ = kind;
  s.rows_ = std::move(rows);
  s.matrix_ = Matrix::Zero(static_cast<Eigen::Index>(s.rows_.size()), dim);
  for (size_t i = 0; i < s.rows_.size(); ++i) {
    if (s.rows_[i] < 0 || s.rows_[i] >= dim) throw Error("Selector::canonical: row index out of range");
    s.matrix_(static_cast<Eigen::Index>(i), s.rows_[i]) = 1.0;
  }
  return s;
}

Selector Selector::general(Matrix matrix) {
  Selector s;
  s.kind_ = Kind::General;
  s.matrix_ = std::move(matrix);
  return s;
}

std::string Selector::descriptor() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::OutputSelector:
      os << "output_selector";
      break;
    case Kind::StateProjector:
      os << "state_projector";
      break;
    case Kind::General:
      os << "general";
      break;
  }
  os << "(" << matrix_.rows() << "x" << matrix_.cols() << ")";
  return os.str();
}

namespace {

// All exponent vectors of the given total degree, x1-heavy first.
void enumerate_degree(int nvars, int degree, std::vector<int>& current,
                      std::vector<std::vector<int>>& out) {
  if (static_cast<int>(current.size()) == nvars - 1) {
    current.push_back(degree);
    out.push_back(current);
    current.pop_back();
    return;
  }
  for (int e = degree; e >= 0; --e) {
    current.push_back(e);
    enumerate_degree(nvars, degree - e, current, out);
    current.pop_back();
  }
}

DictionaryEntry monomial_entry(int nvars, std::vector<int> exponents) {
  DictionaryEntry e;
  e.tag = DictionaryEntry::Tag::Monomial;
  e.poly = Polynomial::monomial(nvars, 1.0, exponents);
  e.exponents = std::move(exponents);
  return e;
}

}  // namespace

Dictionary monomial_dictionary(int state_dim, int max_degree, bool include_constant,
                               int entry_limit) {
  if (max_degree < 1) throw Error("monomial_dictionary: max_degree must be >= 1");

  std::vector<DictionaryEntry> entries;
  for (int d = 1; d <= max_degree; ++d) {
    std::vector<std::vector<int>> exps;
    std::vector<int> cur;
    enumerate_degree(state_dim, d, cur, exps);
    for (auto& e : exps) {
      entries.push_back(monomial_entry(state_dim, std::move(e)));
      if (static_cast<int>(entries.size()) > entry_limit)
        throw Error("monomial_dictionary: entry count exceeds limit of " + std::to_string(entry_limit));
    }
  }
  if (include_constant) {
    DictionaryEntry c;
    c.tag = DictionaryEntry::Tag::Constant;
    c.poly = Polynomial::constant(state_dim, 1.0);
    entries.push_back(std::move(c));
  }

  DictionarySpec spec;
  spec.kind = "monomial";
  spec.state_dim = state_dim;
  spec.max_degree = max_degree;
  spec.include_constant = include_constant;
  return Dictionary(state_dim, std::move(entries), std::move(spec));
}

Dictionary identity_dictionary(int state_dim) {
  return monomial_dictionary(state_dim, 1, false);
}

Example1Basis example1_dictionary(const DiscreteSystem& sys) {
  if (sys.state_dim() != 2 || sys.output_dim() != 2)
    throw Error("example1_dictionary: requires a two-state, two-output system");

  const PolynomialVector f = sys.unforced_step_map();
  const PolynomialVector& h = sys.output_map();

  // h(f(x)) and h(f(f(x))) expanded as polynomials over the state.
  PolynomialVector ff;  // f(f(x))
  for (const auto& fi : f) ff.push_back(fi.compose(f));

  std::vector<DictionaryEntry> entries;
  entries.push_back(monomial_entry(2, {1, 0}));
  entries.push_back(monomial_entry(2, {0, 1}));
  entries.push_back(monomial_entry(2, {2, 0}));
  entries.push_back(monomial_entry(2, {0, 2}));
  entries.push_back(monomial_entry(2, {1, 2}));
  entries.push_back(monomial_entry(2, {2, 1}));
  entries.push_back(monomial_entry(2, {2, 2}));
  for (int step = 1; step <= 2; ++step) {
    const PolynomialVector& map = (step == 1) ? f : ff;
    for (int j = 0; j < 2; ++j) {
      DictionaryEntry e;
      e.tag = DictionaryEntry::Tag::ComposedOutput;
      e.compose_steps = step;
      e.output_index = j;
      e.poly = h[j].compose(map);
      entries.push_back(std::move(e));
    }
  }
  DictionaryEntry cst;
  cst.tag = DictionaryEntry::Tag::Constant;
  cst.poly = Polynomial::constant(2, 1.0);
  entries.push_back(std::move(cst));

  DictionarySpec spec;
  spec.kind = "example1";
  spec.state_dim = 2;
  spec.params = sys.params();

  Example1Basis basis{
      Dictionary(2, std::move(entries), std::move(spec)),
      Selector::canonical(Selector::Kind::OutputSelector, {2, 3}, 12),
      Selector::canonical(Selector::Kind::StateProjector, {0, 1}, 12),
  };
  return basis;
}

InputDictionary::InputDictionary(Kind kind, int input_dim) : kind_(kind), input_dim_(input_dim) {
  if (input_dim_ < 1) throw Error("InputDictionary: input_dim must be >= 1");
}

int InputDictionary::lifted_dim() const {
  return kind_ == Kind::Identity ? input_dim_ : 2 * input_dim_;
}

Vector InputDictionary::eval(const Vector& u) const {
  if (u.size() != input_dim_) throw Error("InputDictionary::eval: input dimension mismatch");
  if (!u.allFinite()) throw Error("InputDictionary::eval: non-finite input");
  if (kind_ == Kind::Identity) return u;
  Vector v(2 * input_dim_);
  v.head(input_dim_) = u;
  for (int i = 0; i < input_dim_; ++i) v[input_dim_ + i] = std::sin(u[i]);
  return v;
}

std::vector<std::string> InputDictionary::descriptors() const {
  std::vector<std::string> d;
  for (int i = 0; i < input_dim_; ++i) d.push_back("u" + std::to_string(i + 1));
  if (kind_ == Kind::SinAugmented)
    for (int i = 0; i < input_dim_; ++i) d.push_back("sin(u" + std::to_string(i + 1) + ")");
  return d;
}

}  // namespace koopman
