#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "bifinf/horner.hpp"
#include "bifinf/poly.hpp"

namespace bifinf {

namespace detail {
inline Rational scaled(const Rational& c, long k) { return c * k; }
inline double scaled(double c, long k) { return c * static_cast<double>(k); }
inline Polynomial scaled(const Polynomial& c, long k) { return c * Rational(k); }
}  // namespace detail

/// Finite Laurent polynomial sum c_k t^k with coefficients in C, stored
/// sparsely with no zero coefficient.
template <class C>
class Laurent {
 public:
  using TermMap = std::map<int, C>;

  Laurent() = default;

  static Laurent monomial(int k, C c) {
    Laurent out;
    out.add(k, std::move(c));
    return out;
  }
  static Laurent constant(C c) { return monomial(0, std::move(c)); }

  const TermMap& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::optional<int> min_exponent() const {
    if (terms_.empty()) return std::nullopt;
    return terms_.begin()->first;
  }
  std::optional<int> max_exponent() const {
    if (terms_.empty()) return std::nullopt;
    return terms_.rbegin()->first;
  }
  /// Coefficient of t^k, or nullptr when it is zero.
  const C* find(int k) const {
    auto it = terms_.find(k);
    return it == terms_.end() ? nullptr : &it->second;
  }

  void add(int k, C c) {
    if (coeff_is_zero(c)) return;
    auto it = terms_.find(k);
    if (it == terms_.end()) {
      terms_.emplace(k, std::move(c));
      return;
    }
    it->second = it->second + c;
    if (coeff_is_zero(it->second)) terms_.erase(it);
  }

  Laurent& operator+=(const Laurent& o) {
    for (const auto& [k, c] : o.terms_) add(k, c);
    return *this;
  }
  Laurent& operator-=(const Laurent& o) {
    for (const auto& [k, c] : o.terms_) add(k, -c);
    return *this;
  }
  friend Laurent operator+(Laurent a, const Laurent& b) { return a += b; }
  friend Laurent operator-(Laurent a, const Laurent& b) { return a -= b; }
  friend Laurent operator*(const Laurent& a, const Laurent& b) {
    Laurent out;
    for (const auto& [ka, ca] : a.terms_) {
      for (const auto& [kb, cb] : b.terms_) out.add(ka + kb, ca * cb);
    }
    return out;
  }
  friend bool operator==(const Laurent& a, const Laurent& b) { return a.terms_ == b.terms_; }

  /// d/dt.
  Laurent derivative() const {
    Laurent out;
    for (const auto& [k, c] : terms_) {
      if (k != 0) out.add(k - 1, detail::scaled(c, k));
    }
    return out;
  }

  /// Terms with exponent >= k_min.
  Laurent truncated_below(int k_min) const {
    Laurent out;
    for (auto it = terms_.lower_bound(k_min); it != terms_.end(); ++it) out.terms_.emplace(*it);
    return out;
  }

 private:
  TermMap terms_;
};

using LaurentScalar = Laurent<Rational>;

/// Substitutes the Laurent components into f with the Horner scheme. lift maps
/// a rational coefficient of f into the coefficient ring of the series.
template <class C, class Lift>
Laurent<C> compose(const Polynomial& f, std::span<const Laurent<C>> components, const Lift& lift) {
  if (components.size() != f.num_vars()) throw std::invalid_argument("arc dimension differs from variable count");
  HornerPlan<Rational> plan(f, [](const Rational& c) { return c; });
  return plan.evaluate<Laurent<C>>(components, [&lift](const Rational& c) { return Laurent<C>::constant(lift(c)); });
}

/// Vector-valued Laurent polynomial xi(t) = sum a_k t^k with rational a_k,
/// restricted to a declared exponent window [k_min, k_max].
class RationalArc {
 public:
  using Coeffs = std::map<int, std::vector<Rational>>;
  using Window = std::pair<int, int>;

  /// Drops zero coefficient vectors; throws if a nonzero a_k lies outside the
  /// declared window or has the wrong length.
  RationalArc(std::size_t num_vars, Coeffs coeffs, Window declared_window);

  static RationalArc from_components(std::span<const LaurentScalar> components, Window declared_window);

  std::size_t num_vars() const noexcept { return num_vars_; }
  const Coeffs& coeffs() const noexcept { return coeffs_; }
  Window declared_window() const noexcept { return window_; }

  LaurentScalar component(std::size_t j) const;
  std::vector<LaurentScalar> components() const;

  /// The arc t -> xi(lambda * t), i.e. a_k -> lambda^k a_k.
  RationalArc reparametrized(const Rational& lambda) const;

 private:
  std::size_t num_vars_;
  Coeffs coeffs_;
  Window window_;
};

/// Exact Laurent expansion of f(xi(t)).
LaurentScalar compose_arc(const Polynomial& f, const RationalArc& xi);

}  // namespace bifinf
