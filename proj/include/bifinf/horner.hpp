#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "bifinf/poly.hpp"

namespace bifinf {

namespace detail {

// base^e for e >= 1, by repeated squaring.
template <class T>
T ipow(const T& base, unsigned e) {
  T result = base;
  unsigned bit = 1u << 31;
  while (!(e & bit)) bit >>= 1;
  for (bit >>= 1; bit; bit >>= 1) {
    result = result * result;
    if (e & bit) result = result * base;
  }
  return result;
}

}  // namespace detail

/// Recursive Horner scheme over the variables in declared order: the
/// polynomial is treated as a polynomial in x1 whose coefficients are
/// polynomials in x2..xn, and so on. The evaluation order is fixed by the
/// term set alone, so results are reproducible bit for bit.
///
/// The plan is generic in the scalar type T used for the point, which lets the
/// same code evaluate at doubles, at exact rationals, and at Laurent series.
template <class Coef>
class HornerPlan {
 public:
  HornerPlan() = default;

  template <class Convert>
  HornerPlan(const Polynomial& p, Convert&& convert) : num_vars_(p.num_vars()) {
    std::vector<const Exponents*> order;
    order.reserve(p.term_count());
    for (const auto& [e, c] : p.terms()) order.push_back(&e);
    // Lexicographically descending groups each variable's exponents into
    // contiguous, decreasing runs.
    std::sort(order.begin(), order.end(), [](const Exponents* a, const Exponents* b) { return *b < *a; });
    exps_.reserve(order.size() * num_vars_);
    coefs_.reserve(order.size());
    for (const Exponents* e : order) {
      exps_.insert(exps_.end(), e->begin(), e->end());
      coefs_.push_back(convert(p.terms().at(*e)));
    }
  }

  std::size_t num_vars() const noexcept { return num_vars_; }
  bool empty() const noexcept { return coefs_.empty(); }

  template <class T, class Lift>
  T evaluate(std::span<const T> point, const Lift& lift) const {
    if (point.size() != num_vars_) throw std::invalid_argument("evaluation point has wrong dimension");
    if (coefs_.empty()) return lift(Coef{});
    return eval_range(0, coefs_.size(), 0, point, lift);
  }

  /// Same recursion with |coefficient| and |x_i|: the magnitude sum used to
  /// scale residuals. Only meaningful for Coef = double.
  double magnitude(std::span<const double> point) const {
    std::vector<double> abs_point(point.begin(), point.end());
    for (double& v : abs_point) v = std::fabs(v);
    return evaluate<double>(abs_point, [](double c) { return std::fabs(c); });
  }

 private:
  template <class T, class Lift>
  T eval_range(std::size_t begin, std::size_t end, std::size_t var, std::span<const T> point,
               const Lift& lift) const {
    if (var == num_vars_) return lift(coefs_[begin]);
    std::optional<T> acc;
    std::uint32_t prev = 0;
    std::size_t i = begin;
    while (i < end) {
      const std::uint32_t e = exps_[i * num_vars_ + var];
      std::size_t j = i + 1;
      while (j < end && exps_[j * num_vars_ + var] == e) ++j;
      T inner = eval_range(i, j, var + 1, point, lift);
      if (!acc) {
        acc.emplace(std::move(inner));
      } else {
        *acc = *acc * detail::ipow(point[var], prev - e) + inner;
      }
      prev = e;
      i = j;
    }
    if (prev > 0) *acc = *acc * detail::ipow(point[var], prev);
    return std::move(*acc);
  }

  std::size_t num_vars_ = 0;
  std::vector<std::uint32_t> exps_;
  std::vector<Coef> coefs_;
};

/// Floating-point evaluator for a fixed polynomial.
class CompiledPoly {
 public:
  CompiledPoly() = default;
  explicit CompiledPoly(const Polynomial& p)
      : plan_(p, [](const Rational& c) { return c.get_d(); }) {}

  double operator()(std::span<const double> x) const {
    return plan_.evaluate<double>(x, [](double c) { return c; });
  }
  double magnitude(std::span<const double> x) const { return plan_.magnitude(x); }
  std::size_t num_vars() const noexcept { return plan_.num_vars(); }

 private:
  HornerPlan<double> plan_;
};

}  // namespace bifinf
