#include "bifinf/poly.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "bifinf/horner.hpp"

namespace bifinf {

unsigned total_degree(const Exponents& e) {
  return std::accumulate(e.begin(), e.end(), 0u);
}

bool GrlexLess::operator()(const Exponents& a, const Exponents& b) const {
  const unsigned da = total_degree(a);
  const unsigned db = total_degree(b);
  if (da != db) return da < db;
  return a < b;
}

Polynomial::Polynomial(std::size_t num_vars) : num_vars_(num_vars) {
  if (num_vars == 0) throw std::invalid_argument("polynomial ring needs at least one variable");
}

Polynomial Polynomial::constant(std::size_t num_vars, const Rational& c) {
  Polynomial p(num_vars);
  p.add_term(Exponents(num_vars, 0), c);
  return p;
}

Polynomial Polynomial::variable(std::size_t num_vars, std::size_t index) {
  if (index >= num_vars) throw std::out_of_range("variable index out of range");
  Exponents e(num_vars, 0);
  e[index] = 1;
  return monomial(std::move(e), Rational(1));
}

Polynomial Polynomial::monomial(Exponents exponents, const Rational& c) {
  Polynomial p(exponents.size());
  p.add_term(exponents, c);
  return p;
}

bool Polynomial::is_constant() const noexcept {
  return terms_.empty() || (terms_.size() == 1 && total_degree(terms_.begin()->first) == 0);
}

std::optional<unsigned> Polynomial::degree() const {
  if (terms_.empty()) return std::nullopt;
  // grlex order puts a top-degree term last
  return total_degree(terms_.rbegin()->first);
}

std::optional<unsigned> Polynomial::degree_in(std::size_t index) const {
  if (index >= num_vars_) throw std::out_of_range("variable index out of range");
  if (terms_.empty()) return std::nullopt;
  unsigned d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e[index]);
  return d;
}

Rational Polynomial::coefficient(const Exponents& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Rational(0) : it->second;
}

void Polynomial::add_term(const Exponents& e, const Rational& c) {
  if (e.size() != num_vars_) throw std::invalid_argument("exponent vector length differs from variable count");
  if (sgn(c) == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

void Polynomial::require_same_ring(const Polynomial& other) const {
  if (other.num_vars_ != num_vars_) throw std::invalid_argument("polynomials live in rings with different variable counts");
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  require_same_ring(other);
  for (const auto& [e, c] : other.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  require_same_ring(other);
  for (const auto& [e, c] : other.terms_) add_term(e, -c);
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  a.require_same_ring(b);
  Polynomial out(a.num_vars_);
  Exponents e(a.num_vars_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

Polynomial& Polynomial::operator*=(const Polynomial& other) {
  *this = *this * other;
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (sgn(c) == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

Polynomial operator-(Polynomial a) {
  for (auto& [e, v] : a.terms_) v = -v;
  return a;
}

bool operator==(const Polynomial& a, const Polynomial& b) {
  return a.num_vars_ == b.num_vars_ && a.terms_ == b.terms_;
}

Polynomial Polynomial::pow(unsigned exponent) const {
  if (exponent == 0) return constant(num_vars_, Rational(1));
  return detail::ipow(*this, exponent);
}

std::string Polynomial::to_string(std::span<const std::string> names) const {
  if (names.size() != num_vars_) throw std::invalid_argument("variable name count differs from variable count");
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    const bool negative = sgn(c) < 0;
    if (first) {
      if (negative) out << '-';
    } else {
      out << (negative ? " - " : " + ");
    }
    first = false;
    const Rational mag = abs(c);
    const bool is_const = total_degree(e) == 0;
    bool need_star = false;
    if (is_const || mag != 1) {
      out << mag.get_str();
      need_star = true;
    }
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (need_star) out << '*';
      out << names[i];
      if (e[i] > 1) out << '^' << e[i];
      need_star = true;
    }
  }
  return out.str();
}

Polynomial partial(const Polynomial& f, std::size_t index) {
  if (index >= f.num_vars()) throw std::out_of_range("partial derivative index out of range");
  Polynomial out(f.num_vars());
  for (const auto& [e, c] : f.terms()) {
    if (e[index] == 0) continue;
    Exponents d = e;
    --d[index];
    out.add_term(d, c * e[index]);
  }
  return out;
}

std::vector<Polynomial> gradient(const Polynomial& f) {
  std::vector<Polynomial> g;
  g.reserve(f.num_vars());
  for (std::size_t i = 0; i < f.num_vars(); ++i) g.push_back(partial(f, i));
  return g;
}

Rational eval(const Polynomial& f, std::span<const Rational> point) {
  if (point.size() != f.num_vars()) throw std::invalid_argument("evaluation point has wrong dimension");
  HornerPlan<Rational> plan(f, [](const Rational& c) { return c; });
  return plan.evaluate<Rational>(point, [](const Rational& c) { return c; });
}

double eval(const Polynomial& f, std::span<const double> point) {
  if (point.size() != f.num_vars()) throw std::invalid_argument("evaluation point has wrong dimension");
  return CompiledPoly(f)(point);
}

Polynomial substitute(const Polynomial& f, std::span<const Polynomial> images) {
  if (images.size() != f.num_vars()) throw std::invalid_argument("substitution needs one image per variable");
  const std::size_t m = images.front().num_vars();
  for (const auto& img : images) {
    if (img.num_vars() != m) throw std::invalid_argument("substitution images live in different rings");
  }
  HornerPlan<Rational> plan(f, [](const Rational& c) { return c; });
  return plan.evaluate<Polynomial>(images, [m](const Rational& c) { return Polynomial::constant(m, c); });
}

Polynomial translate(const Polynomial& f, std::span<const Rational> shift) {
  const std::size_t n = f.num_vars();
  if (shift.size() != n) throw std::invalid_argument("shift has wrong dimension");
  std::vector<Polynomial> images;
  images.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    images.push_back(Polynomial::variable(n, i) - Polynomial::constant(n, shift[i]));
  }
  return substitute(f, images);
}

std::vector<std::string> default_variable_names(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("x" + std::to_string(i + 1));
  return names;
}

}  // namespace bifinf
