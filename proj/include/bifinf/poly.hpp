#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bifinf {

using Rational = mpq_class;
using Exponents = std::vector<std::uint32_t>;

unsigned total_degree(const Exponents& e);

/// Graded lexicographic order on exponent vectors: total degree first, then
/// lexicographic in the declared variable order.
struct GrlexLess {
  bool operator()(const Exponents& a, const Exponents& b) const;
};

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms are kept in graded lexicographic order and no stored coefficient is
/// zero. Values are immutable once built by the arithmetic operators, so they
/// can be shared freely between threads.
class Polynomial {
 public:
  using TermMap = std::map<Exponents, Rational, GrlexLess>;

  explicit Polynomial(std::size_t num_vars);

  static Polynomial constant(std::size_t num_vars, const Rational& c);
  static Polynomial variable(std::size_t num_vars, std::size_t index);
  static Polynomial monomial(Exponents exponents, const Rational& c);

  std::size_t num_vars() const noexcept { return num_vars_; }
  const TermMap& terms() const noexcept { return terms_; }
  std::size_t term_count() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const noexcept;

  /// Total degree. std::nullopt stands for the degree -infinity of the zero
  /// polynomial.
  std::optional<unsigned> degree() const;
  /// Degree in a single variable; std::nullopt for the zero polynomial.
  std::optional<unsigned> degree_in(std::size_t index) const;

  Rational coefficient(const Exponents& e) const;
  /// Adds c * x^e to the polynomial, dropping the term if it cancels.
  void add_term(const Exponents& e, const Rational& c);

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Polynomial& other);
  Polynomial& operator*=(const Rational& c);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }
  friend Polynomial operator-(Polynomial a);
  friend bool operator==(const Polynomial& a, const Polynomial& b);

  Polynomial pow(unsigned exponent) const;

  /// Prints in ascending graded lexicographic order using the given variable
  /// names, e.g. "y + 2*x*y^2 - x^3". The output parses back with parse().
  std::string to_string(std::span<const std::string> names) const;

 private:
  void require_same_ring(const Polynomial& other) const;

  std::size_t num_vars_;
  TermMap terms_;
};

Polynomial partial(const Polynomial& f, std::size_t index);
std::vector<Polynomial> gradient(const Polynomial& f);

Rational eval(const Polynomial& f, std::span<const Rational> point);
double eval(const Polynomial& f, std::span<const double> point);

/// Replaces x_i by images[i]; all images must share one ring.
Polynomial substitute(const Polynomial& f, std::span<const Polynomial> images);
/// Returns g(x) = f(x - shift).
Polynomial translate(const Polynomial& f, std::span<const Rational> shift);

enum class ParseErrorKind { syntax, unknown_variable, non_integer_exponent };

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorKind kind, std::size_t position, const std::string& what);
  ParseErrorKind kind() const noexcept { return kind_; }
  /// Zero-based byte offset into the input text.
  std::size_t position() const noexcept { return position_; }

 private:
  ParseErrorKind kind_;
  std::size_t position_;
};

/// Parses
///   expr   := ['+'|'-'] term (('+'|'-') term)*
///   term   := factor ('*' factor)*      ('*' optional between a number and a variable)
///   factor := rational | var | '(' expr ')' | factor '^' uint
///   rational := int ('/' uint)?
Polynomial parse(std::string_view text, std::span<const std::string> var_names);

/// Identifiers appearing in text, sorted naturally (x < y < z, x2 < x10).
std::vector<std::string> infer_variables(std::string_view text);

/// Default names x1..xn.
std::vector<std::string> default_variable_names(std::size_t n);

inline bool coeff_is_zero(const Rational& c) { return sgn(c) == 0; }
inline bool coeff_is_zero(double c) { return c == 0.0; }
inline bool coeff_is_zero(const Polynomial& c) { return c.is_zero(); }

}  // namespace bifinf
