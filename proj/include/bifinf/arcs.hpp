#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bifinf/laurent.hpp"
#include "bifinf/poly.hpp"

namespace bifinf {

/// Exponent window of Arc(f): -(d-1) d^(n-1) <= k <= d^(n-1).
struct ArcWindow {
  int n = 0;
  int d = 0;
  int k_min = 0;
  int k_max = 0;

  std::size_t length() const { return static_cast<std::size_t>(k_max - k_min + 1); }
  bool contains(int k) const { return k >= k_min && k <= k_max; }
};

ArcWindow arc_window(int n, int d);

/// dim Arc(f) = n(1 + d^n) and the dimension n(2 + d(d+1)^n (d^n+2)^(n-1)) of
/// the larger arc space it replaces.
struct ArcDimensions {
  mpz_class arc;
  mpz_class av;
};

ArcDimensions dims(int n, int d);

/// A nonzero coefficient that violates one of the vanishing conditions.
/// partial < 0 means f itself; multiplier >= 0 means x_multiplier * df/dx_partial.
struct ConditionWitness {
  int partial = -1;
  int multiplier = -1;
  int power = 0;
  Rational coefficient;
};

struct ArcMembershipReport {
  bool escapes = false;
  /// The sphere normalization can be met after reparametrizing t -> lambda t; equals `escapes`.
  bool normalized = false;
  /// sum_{k>0} |a_k|^2 of the arc as given, and whether it is exactly 1.
  Rational sphere_sum;
  bool sphere_exact = false;
  std::optional<double> lambda_estimate;

  bool cond_b = false;
  bool cond_c = false;
  bool cond_d = false;
  std::vector<ConditionWitness> witnesses_b;
  std::vector<ConditionWitness> witnesses_c;
  std::vector<ConditionWitness> witnesses_d;
  std::optional<Rational> b0;

  bool member() const { return normalized && cond_b && cond_c && cond_d; }
};

class WindowViolation : public std::out_of_range {
 public:
  WindowViolation(int exponent, const ArcWindow& window);
  int exponent() const noexcept { return exponent_; }
  const ArcWindow& window() const noexcept { return window_; }

 private:
  int exponent_;
  ArcWindow window_;
};

/// The unique lambda > 0 with sum_k s_k lambda^(2k) = 1, where s_k >= 0 is
/// the squared norm of the positive-power coefficient a_k and some s_k > 0.
double normalizing_lambda(const std::map<int, double>& positive_sums);

/// Window used for membership checks: arc_window(n, max(deg f, 2)).
ArcWindow membership_window(const Polynomial& f);

/// Normalization and vanishing conditions on an arbitrary arc, without the window check.
ArcMembershipReport evaluate_arc_conditions(const Polynomial& f, const RationalArc& xi);

/// Window-checked membership test for Arc_inf(f).
ArcMembershipReport check_membership(const Polynomial& f, const RationalArc& xi);

/// Drops the coefficients a_k with k < window.k_min.
RationalArc truncate(const RationalArc& xi, const ArcWindow& window);

struct ArcUnknown {
  int k = 0;
  std::size_t coordinate = 0;
  std::string name;
};

struct ConstraintEquation {
  char condition = 'b';  // 'b', 'c' or 'd'
  int partial = -1;
  int multiplier = -1;
  int power = 0;
  Polynomial equation;
};

/// Polynomial equations in the arc coefficients a_{k,j} whose real solutions,
/// together with the sphere equation, form Arc_inf(f).
struct ConstraintSystem {
  ArcWindow window;
  std::vector<ArcUnknown> unknowns;
  std::vector<ConstraintEquation> equations;
  Polynomial sphere;

  std::vector<std::string> unknown_names() const;
  std::size_t unknown_index(int k, std::size_t coordinate) const;
  /// One equation per line, sphere equation last; every line means "= 0".
  std::string to_text() const;
};

/// Name of the unknown a_{k,j} (1-based j), e.g. a_3_1 or a_m6_2.
std::string arc_unknown_name(int k, std::size_t coordinate);

ConstraintSystem emit_constraints(const Polynomial& f);

}  // namespace bifinf
