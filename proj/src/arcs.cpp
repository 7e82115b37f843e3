#include "bifinf/arcs.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace bifinf {

namespace {

mpz_class ipow(long base, unsigned long e) {
  mpz_class out;
  mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(base), e);
  return out;
}

void require_range(int n, int d) {
  if (n < 2) throw std::out_of_range("arc space needs n >= 2");
  if (d < 2) throw std::out_of_range("arc space needs degree d >= 2");
}

}  // namespace

// Bisection on log(lambda); the left side is increasing in lambda.
double normalizing_lambda(const std::map<int, double>& sums) {
  auto excess = [&sums](double u) {
    double total = 0.0;
    for (const auto& [k, s] : sums) total += s * std::exp(2.0 * k * u);
    return total - 1.0;
  };
  double lo = -1.0;
  double hi = 1.0;
  while (excess(lo) > 0.0 && lo > -700.0) lo *= 2.0;
  while (excess(hi) < 0.0 && hi < 700.0) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (excess(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::exp(0.5 * (lo + hi));
}

ArcWindow arc_window(int n, int d) {
  require_range(n, d);
  const mpz_class top = ipow(d, static_cast<unsigned long>(n - 1));
  const mpz_class bottom = -(d - 1) * top;
  if (!top.fits_sint_p() || !bottom.fits_sint_p()) throw std::out_of_range("arc window exceeds the int range");
  return ArcWindow{n, d, static_cast<int>(bottom.get_si()), static_cast<int>(top.get_si())};
}

ArcDimensions dims(int n, int d) {
  require_range(n, d);
  const auto un = static_cast<unsigned long>(n);
  const mpz_class dn = ipow(d, un);
  ArcDimensions out;
  out.arc = n * (1 + dn);
  mpz_class tail = dn + 2;
  mpz_pow_ui(tail.get_mpz_t(), tail.get_mpz_t(), un - 1);
  out.av = n * (2 + d * ipow(d + 1, un) * tail);
  return out;
}

WindowViolation::WindowViolation(int exponent, const ArcWindow& window)
    : std::out_of_range("arc exponent " + std::to_string(exponent) + " lies outside the window (" +
                        std::to_string(window.k_min) + ", " + std::to_string(window.k_max) + ") for n=" +
                        std::to_string(window.n) + ", d=" + std::to_string(window.d)),
      exponent_(exponent),
      window_(window) {}

ArcWindow membership_window(const Polynomial& f) {
  const auto deg = f.degree();
  const int d = std::max(2, deg ? static_cast<int>(*deg) : 0);
  return arc_window(static_cast<int>(f.num_vars()), d);
}

ArcMembershipReport evaluate_arc_conditions(const Polynomial& f, const RationalArc& xi) {
  if (xi.num_vars() != f.num_vars()) throw std::invalid_argument("arc dimension differs from variable count");
  const std::size_t n = f.num_vars();
  const auto comps = xi.components();
  const std::span<const LaurentScalar> cs(comps);
  const auto lift = [](const Rational& c) { return c; };

  ArcMembershipReport rep;

  std::map<int, double> positive_sums;
  rep.sphere_sum = 0;
  for (const auto& [k, a] : xi.coeffs()) {
    if (k <= 0) continue;
    rep.escapes = true;
    Rational s(0);
    for (const auto& v : a) s += v * v;
    rep.sphere_sum += s;
    positive_sums[k] = s.get_d();
  }
  rep.sphere_exact = rep.sphere_sum == 1;
  rep.normalized = rep.escapes;
  if (rep.escapes) rep.lambda_estimate = normalizing_lambda(positive_sums);

  const LaurentScalar fx = compose<Rational>(f, cs, lift);
  for (const auto& [k, c] : fx.terms()) {
    if (k >= 1) rep.witnesses_b.push_back({-1, -1, k, c});
  }
  rep.cond_b = rep.witnesses_b.empty();
  if (rep.cond_b) {
    const Rational* c0 = fx.find(0);
    rep.b0 = c0 ? *c0 : Rational(0);
  }

  for (std::size_t i = 0; i < n; ++i) {
    const LaurentScalar gi = compose<Rational>(partial(f, i), cs, lift);
    for (const auto& [k, c] : gi.terms()) {
      if (k >= 0) rep.witnesses_c.push_back({static_cast<int>(i), -1, k, c});
    }
    for (std::size_t j = 0; j < n; ++j) {
      const LaurentScalar dij = comps[j] * gi;
      for (const auto& [k, c] : dij.terms()) {
        if (k >= 0) rep.witnesses_d.push_back({static_cast<int>(i), static_cast<int>(j), k, c});
      }
    }
  }
  rep.cond_c = rep.witnesses_c.empty();
  rep.cond_d = rep.witnesses_d.empty();
  return rep;
}

ArcMembershipReport check_membership(const Polynomial& f, const RationalArc& xi) {
  if (xi.num_vars() != f.num_vars()) throw std::invalid_argument("arc dimension differs from variable count");
  const ArcWindow w = membership_window(f);
  for (const auto& [k, a] : xi.coeffs()) {
    if (!w.contains(k)) throw WindowViolation(k, w);
  }
  return evaluate_arc_conditions(f, xi);
}

RationalArc truncate(const RationalArc& xi, const ArcWindow& window) {
  RationalArc::Coeffs kept;
  for (const auto& [k, a] : xi.coeffs()) {
    if (k >= window.k_min) kept.emplace(k, a);
  }
  const auto [lo, hi] = xi.declared_window();
  const int new_lo = std::max(lo, window.k_min);
  return RationalArc(xi.num_vars(), std::move(kept), {std::min(new_lo, hi), hi});
}

std::string arc_unknown_name(int k, std::size_t coordinate) {
  std::string ks = k < 0 ? "m" + std::to_string(-k) : std::to_string(k);
  return "a_" + ks + "_" + std::to_string(coordinate + 1);
}

std::vector<std::string> ConstraintSystem::unknown_names() const {
  std::vector<std::string> names;
  names.reserve(unknowns.size());
  for (const auto& u : unknowns) names.push_back(u.name);
  return names;
}

std::size_t ConstraintSystem::unknown_index(int k, std::size_t coordinate) const {
  if (!window.contains(k) || coordinate >= static_cast<std::size_t>(window.n)) {
    throw std::out_of_range("unknown outside the arc window");
  }
  return static_cast<std::size_t>(k - window.k_min) * static_cast<std::size_t>(window.n) + coordinate;
}

std::string ConstraintSystem::to_text() const {
  const auto names = unknown_names();
  std::ostringstream out;
  for (const auto& eq : equations) out << eq.equation.to_string(names) << '\n';
  out << sphere.to_string(names) << '\n';
  return out.str();
}

ConstraintSystem emit_constraints(const Polynomial& f) {
  const auto deg = f.degree();
  if (!deg || *deg < 2) throw std::invalid_argument("constraint system needs deg f >= 2");
  const std::size_t n = f.num_vars();
  const ArcWindow w = arc_window(static_cast<int>(n), static_cast<int>(*deg));
  const std::size_t m = n * w.length();

  ConstraintSystem sys{w, {}, {}, Polynomial(m)};
  for (int k = w.k_min; k <= w.k_max; ++k) {
    for (std::size_t j = 0; j < n; ++j) sys.unknowns.push_back({k, j, arc_unknown_name(k, j)});
  }

  using Series = Laurent<Polynomial>;
  std::vector<Series> comps(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (int k = w.k_min; k <= w.k_max; ++k) comps[j].add(k, Polynomial::variable(m, sys.unknown_index(k, j)));
  }
  const std::span<const Series> cs(comps);
  const auto lift = [m](const Rational& c) { return Polynomial::constant(m, c); };

  const Series fx = compose<Polynomial>(f, cs, lift);
  for (const auto& [k, c] : fx.terms()) {
    if (k >= 1) sys.equations.push_back({'b', -1, -1, k, c});
  }
  std::vector<Series> grads;
  for (std::size_t i = 0; i < n; ++i) grads.push_back(compose<Polynomial>(partial(f, i), cs, lift));
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& [k, c] : grads[i].terms()) {
      if (k >= 0) sys.equations.push_back({'c', static_cast<int>(i), -1, k, c});
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Series dij = comps[j] * grads[i];
      for (const auto& [k, c] : dij.terms()) {
        if (k >= 0) sys.equations.push_back({'d', static_cast<int>(i), static_cast<int>(j), k, c});
      }
    }
  }

  for (int k = 1; k <= w.k_max; ++k) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto v = Polynomial::variable(m, sys.unknown_index(k, j));
      sys.sphere += v * v;
    }
  }
  sys.sphere -= Polynomial::constant(m, Rational(1));
  return sys;
}

}  // namespace bifinf
