#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gridopt/core/error.hpp"

namespace gridopt {

// Dense handle of a decision variable inside one ModelGraph.
struct VarId {
  std::int32_t index = -1;

  constexpr auto operator<=>(const VarId&) const = default;
  constexpr bool valid() const { return index >= 0; }
};

struct Term {
  VarId var;
  double coef = 0.0;

  bool operator==(const Term&) const = default;
};

inline void check_finite(double value, const char* what) {
  if (!std::isfinite(value)) {
    fail(ErrorKind::NonFiniteCoefficient, std::string(what) + " is not finite");
  }
}

// An affine function sum(coef * var) + constant. Values are immutable; every
// operation returns a new, normalized expression (terms sorted by variable id,
// no duplicate ids, no zero coefficients).
class LinearExpression {
 public:
  LinearExpression() = default;
  explicit LinearExpression(double constant) : constant_(constant) {
    check_finite(constant, "expression constant");
  }
  LinearExpression(VarId var, double coef = 1.0) {
    check_finite(coef, "coefficient");
    if (coef != 0.0) terms_.push_back({var, coef});
  }
  LinearExpression(std::vector<Term> terms, double constant)
      : terms_(std::move(terms)), constant_(constant) {
    check_finite(constant, "expression constant");
    for (const auto& t : terms_) check_finite(t.coef, "coefficient");
    normalize();
  }

  std::span<const Term> terms() const { return terms_; }
  double constant() const { return constant_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  double coefficient(VarId var) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), var,
                               [](const Term& t, VarId v) { return t.var < v; });
    return (it != terms_.end() && it->var == var) ? it->coef : 0.0;
  }

  template <typename Values>
  double evaluate(const Values& values) const {
    double sum = constant_;
    for (const auto& t : terms_) sum += t.coef * values[static_cast<std::size_t>(t.var.index)];
    return sum;
  }

  LinearExpression scaled(double k) const {
    check_finite(k, "coefficient");
    if (k == 0.0) return {};
    LinearExpression out = *this;
    for (auto& t : out.terms_) t.coef *= k;
    out.constant_ *= k;
    return out;
  }

  friend LinearExpression operator+(const LinearExpression& a, const LinearExpression& b);
  friend LinearExpression operator-(const LinearExpression& a, const LinearExpression& b) {
    return a + b.scaled(-1.0);
  }
  friend LinearExpression operator*(double k, const LinearExpression& e) { return e.scaled(k); }
  friend LinearExpression operator*(const LinearExpression& e, double k) { return e.scaled(k); }
  friend LinearExpression operator+(const LinearExpression& a, double c) {
    LinearExpression out = a;
    check_finite(c, "expression constant");
    out.constant_ += c;
    return out;
  }
  friend LinearExpression operator-(const LinearExpression& a, double c) { return a + (-c); }

  bool operator==(const LinearExpression&) const = default;

 private:
  void normalize() {
    std::stable_sort(terms_.begin(), terms_.end(),
                     [](const Term& a, const Term& b) { return a.var < b.var; });
    std::vector<Term> merged;
    merged.reserve(terms_.size());
    for (const auto& t : terms_) {
      if (!merged.empty() && merged.back().var == t.var) {
        merged.back().coef += t.coef;
      } else {
        merged.push_back(t);
      }
    }
    std::erase_if(merged, [](const Term& t) { return t.coef == 0.0; });
    terms_ = std::move(merged);
  }

  std::vector<Term> terms_;
  double constant_ = 0.0;
};

// Mutable accumulator for building large sums without quadratic copying.
class ExpressionBuilder {
 public:
  ExpressionBuilder& add(VarId var, double coef) {
    check_finite(coef, "coefficient");
    if (coef != 0.0) terms_.push_back({var, coef});
    return *this;
  }
  ExpressionBuilder& add(const LinearExpression& e, double k = 1.0) {
    check_finite(k, "coefficient");
    if (k == 0.0) return *this;
    for (const auto& t : e.terms()) terms_.push_back({t.var, t.coef * k});
    constant_ += k * e.constant();
    return *this;
  }
  ExpressionBuilder& add_constant(double c) {
    check_finite(c, "expression constant");
    constant_ += c;
    return *this;
  }

  LinearExpression build() const { return LinearExpression(terms_, constant_); }

 private:
  std::vector<Term> terms_;
  double constant_ = 0.0;
};

inline LinearExpression operator+(const LinearExpression& a, const LinearExpression& b) {
  std::vector<Term> terms;
  terms.reserve(a.terms_.size() + b.terms_.size());
  terms.insert(terms.end(), a.terms_.begin(), a.terms_.end());
  terms.insert(terms.end(), b.terms_.begin(), b.terms_.end());
  return LinearExpression(std::move(terms), a.constant_ + b.constant_);
}

// sum_i k_i * e_i, normalized. A zero coefficient drops its operand entirely.
inline LinearExpression linear_combine(
    std::span<const std::pair<double, LinearExpression>> parts) {
  ExpressionBuilder builder;
  for (const auto& [k, e] : parts) builder.add(e, k);
  return builder.build();
}

inline LinearExpression linear_combine(
    std::initializer_list<std::pair<double, LinearExpression>> parts) {
  return linear_combine(std::span<const std::pair<double, LinearExpression>>(parts.begin(), parts.size()));
}

}  // namespace gridopt
