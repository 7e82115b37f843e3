#include "bifinf/laurent.hpp"

#include <algorithm>
#include <string>

namespace bifinf {

RationalArc::RationalArc(std::size_t num_vars, Coeffs coeffs, Window declared_window)
    : num_vars_(num_vars), window_(declared_window) {
  if (num_vars == 0) throw std::invalid_argument("arc needs at least one coordinate");
  if (window_.first > window_.second) throw std::invalid_argument("arc window is empty");
  for (auto& [k, a] : coeffs) {
    if (a.size() != num_vars) throw std::invalid_argument("arc coefficient vector has wrong length");
    const bool zero = std::all_of(a.begin(), a.end(), [](const Rational& v) { return sgn(v) == 0; });
    if (zero) continue;
    if (k < window_.first || k > window_.second) {
      throw std::out_of_range("arc exponent " + std::to_string(k) + " lies outside the declared window [" +
                              std::to_string(window_.first) + ", " + std::to_string(window_.second) + "]");
    }
    coeffs_.emplace(k, std::move(a));
  }
}

RationalArc RationalArc::from_components(std::span<const LaurentScalar> components, Window declared_window) {
  const std::size_t n = components.size();
  Coeffs coeffs;
  for (std::size_t j = 0; j < n; ++j) {
    for (const auto& [k, c] : components[j].terms()) {
      auto [it, inserted] = coeffs.try_emplace(k, std::vector<Rational>(n));
      it->second[j] = c;
    }
  }
  return RationalArc(n, std::move(coeffs), declared_window);
}

LaurentScalar RationalArc::component(std::size_t j) const {
  if (j >= num_vars_) throw std::out_of_range("arc component index out of range");
  LaurentScalar out;
  for (const auto& [k, a] : coeffs_) out.add(k, a[j]);
  return out;
}

std::vector<LaurentScalar> RationalArc::components() const {
  std::vector<LaurentScalar> out;
  out.reserve(num_vars_);
  for (std::size_t j = 0; j < num_vars_; ++j) out.push_back(component(j));
  return out;
}

RationalArc RationalArc::reparametrized(const Rational& lambda) const {
  if (sgn(lambda) == 0) throw std::invalid_argument("reparametrization factor must be nonzero");
  Coeffs out;
  for (const auto& [k, a] : coeffs_) {
    Rational scale(1);
    const unsigned e = static_cast<unsigned>(k < 0 ? -k : k);
    for (unsigned i = 0; i < e; ++i) scale *= lambda;
    if (k < 0) scale = 1 / scale;
    std::vector<Rational> v = a;
    for (auto& x : v) x *= scale;
    out.emplace(k, std::move(v));
  }
  return RationalArc(num_vars_, std::move(out), window_);
}

LaurentScalar compose_arc(const Polynomial& f, const RationalArc& xi) {
  if (xi.num_vars() != f.num_vars()) throw std::invalid_argument("arc dimension differs from variable count");
  const auto comps = xi.components();
  return compose<Rational>(f, std::span<const LaurentScalar>(comps), [](const Rational& c) { return c; });
}

}  // namespace bifinf
