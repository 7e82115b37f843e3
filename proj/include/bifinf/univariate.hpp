#pragma once

#include <vector>

#include "bifinf/poly.hpp"

// Exact real-root isolation for univariate rational polynomials; used by the
// planar slice solver.
namespace bifinf::univariate {

/// Coefficients in ascending powers, trailing zeros removed (zero = empty).
using Poly = std::vector<Rational>;

void trim(Poly& p);
int degree(const Poly& p);
Poly derivative(const Poly& p);
/// Quotient and remainder of a by b (b nonzero).
std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
/// Monic gcd.
Poly gcd(Poly a, Poly b);
/// p / gcd(p, p').
Poly squarefree(const Poly& p);
/// Positive rescaling to a primitive integer polynomial; signs are preserved.
Poly primitive(const Poly& p);
Rational eval(const Poly& p, const Rational& x);
int sign_at(const Poly& p, const Rational& x);

std::vector<Poly> sturm_sequence(const Poly& p);
/// Number of distinct real roots in (lo, hi] of the sequence's first member.
int count_roots(const std::vector<Poly>& sturm, const Rational& lo, const Rational& hi);

/// Interval (lo, hi] holding exactly one root; lo == hi marks an exact root.
struct RootInterval {
  Rational lo;
  Rational hi;
};

/// Disjoint isolating intervals for every real root of p (p nonzero), sorted.
std::vector<RootInterval> isolate_real_roots(const Poly& p);

/// Shrinks an isolating interval of a squarefree p to width <= width.
RootInterval refine(const Poly& squarefree_p, RootInterval iv, const Rational& width);

/// Converts the univariate polynomial in variable `var` of a polynomial that
/// depends on no other variable.
Poly from_polynomial(const Polynomial& p, std::size_t var);

}  // namespace bifinf::univariate
