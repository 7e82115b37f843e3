#include <algorithm>
#include <cctype>
#include <limits>
#include <set>

#include "bifinf/poly.hpp"

namespace bifinf {

ParseError::ParseError(ParseErrorKind kind, std::size_t position, const std::string& what)
    : std::runtime_error(what + " at position " + std::to_string(position)), kind_(kind), position_(position) {}

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

class Parser {
 public:
  Parser(std::string_view text, std::span<const std::string> names) : text_(text), names_(names) {
    if (names.empty()) throw std::invalid_argument("at least one variable name is required");
  }

  Polynomial run() {
    skip_ws();
    if (at_end()) throw ParseError(ParseErrorKind::syntax, pos_, "empty expression");
    Polynomial p = expr();
    skip_ws();
    if (!at_end()) throw ParseError(ParseErrorKind::syntax, pos_, std::string("unexpected character '") + peek() + "'");
    return p;
  }

 private:
  std::size_t n() const { return names_.size(); }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  Polynomial expr() {
    skip_ws();
    bool negate = false;
    if (peek() == '+' || peek() == '-') {
      negate = peek() == '-';
      ++pos_;
    }
    Polynomial acc = term();
    if (negate) acc = -acc;
    for (;;) {
      skip_ws();
      const char c = peek();
      if (c != '+' && c != '-') break;
      ++pos_;
      Polynomial t = term();
      if (c == '+') {
        acc += t;
      } else {
        acc -= t;
      }
    }
    return acc;
  }

  Polynomial term() {
    bool numeric = false;
    Polynomial acc = factor(numeric);
    for (;;) {
      skip_ws();
      if (peek() == '*') {
        ++pos_;
        bool ignored = false;
        acc *= factor(ignored);
      } else if (numeric && is_ident_start(peek())) {
        // "2x" means 2*x; only a number may be followed directly by a variable
        bool ignored = false;
        acc *= factor(ignored);
        numeric = false;
      } else if (is_ident_start(peek()) || is_digit(peek()) || peek() == '(') {
        throw ParseError(ParseErrorKind::syntax, pos_, "missing operator");
      } else {
        break;
      }
    }
    return acc;
  }

  Polynomial factor(bool& numeric) {
    Polynomial base = primary(numeric);
    for (;;) {
      skip_ws();
      if (peek() != '^') break;
      ++pos_;
      skip_ws();
      const std::size_t at = pos_;
      if (!is_digit(peek())) {
        throw ParseError(ParseErrorKind::non_integer_exponent, at, "exponent must be a non-negative integer");
      }
      const mpz_class e = digits();
      if (peek() == '.' || peek() == '/') {
        throw ParseError(ParseErrorKind::non_integer_exponent, at, "exponent must be a non-negative integer");
      }
      if (e > std::numeric_limits<std::uint16_t>::max()) {
        throw ParseError(ParseErrorKind::syntax, at, "exponent too large");
      }
      base = base.pow(static_cast<unsigned>(e.get_ui()));
    }
    return base;
  }

  Polynomial primary(bool& numeric) {
    skip_ws();
    const std::size_t at = pos_;
    const char c = peek();
    if (c == '(') {
      ++pos_;
      Polynomial inner = expr();
      skip_ws();
      if (peek() != ')') throw ParseError(ParseErrorKind::syntax, pos_, "expected ')'");
      ++pos_;
      numeric = false;
      return inner;
    }
    if (is_digit(c)) {
      Rational value(digits());
      skip_ws();
      if (peek() == '/') {
        ++pos_;
        skip_ws();
        if (!is_digit(peek())) throw ParseError(ParseErrorKind::syntax, pos_, "expected denominator");
        const std::size_t den_at = pos_;
        mpz_class den = digits();
        if (den == 0) throw ParseError(ParseErrorKind::syntax, den_at, "zero denominator");
        value /= Rational(den);
      }
      if (peek() == '.') throw ParseError(ParseErrorKind::syntax, pos_, "decimal numbers are not supported; write a fraction");
      numeric = true;
      return Polynomial::constant(n(), value);
    }
    if (is_ident_start(c)) {
      std::size_t end = pos_;
      while (end < text_.size() && is_ident_char(text_[end])) ++end;
      const std::string name(text_.substr(pos_, end - pos_));
      auto it = std::find(names_.begin(), names_.end(), name);
      if (it == names_.end()) throw ParseError(ParseErrorKind::unknown_variable, at, "unknown variable '" + name + "'");
      pos_ = end;
      numeric = false;
      return Polynomial::variable(n(), static_cast<std::size_t>(it - names_.begin()));
    }
    if (at_end()) throw ParseError(ParseErrorKind::syntax, at, "unexpected end of input");
    throw ParseError(ParseErrorKind::syntax, at, std::string("unexpected character '") + c + "'");
  }

  mpz_class digits() {
    const std::size_t start = pos_;
    while (!at_end() && is_digit(text_[pos_])) ++pos_;
    return mpz_class(std::string(text_.substr(start, pos_ - start)), 10);
  }

  std::string_view text_;
  std::span<const std::string> names_;
  std::size_t pos_ = 0;
};

// Natural order: compare the alphabetic stem, then the numeric suffix.
bool natural_less(const std::string& a, const std::string& b) {
  auto split = [](const std::string& s) {
    std::size_t cut = s.size();
    while (cut > 0 && is_digit(s[cut - 1])) --cut;
    return std::make_pair(s.substr(0, cut), s.substr(cut));
  };
  auto [sa, na] = split(a);
  auto [sb, nb] = split(b);
  if (sa != sb) return sa < sb;
  if (na.size() != nb.size()) return na.size() < nb.size();
  return na < nb;
}

}  // namespace

Polynomial parse(std::string_view text, std::span<const std::string> var_names) {
  return Parser(text, var_names).run();
}

std::vector<std::string> infer_variables(std::string_view text) {
  std::set<std::string> seen;
  std::size_t i = 0;
  while (i < text.size()) {
    if (is_ident_start(text[i])) {
      std::size_t end = i;
      while (end < text.size() && is_ident_char(text[end])) ++end;
      seen.emplace(text.substr(i, end - i));
      i = end;
    } else {
      ++i;
    }
  }
  std::vector<std::string> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end(), natural_less);
  return out;
}

}  // namespace bifinf
