#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bifinf/laurent.hpp"
#include "bifinf/poly.hpp"

namespace bifinf {

/// Runs the command line (arguments without the program name). Exit codes:
/// 0 success, 1 user error, 2 when every analyzed center was degenerate.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Malformed arc-spec or point text; position is a byte offset.
class SpecError : public std::invalid_argument {
 public:
  SpecError(std::size_t position, const std::string& what);
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Arc text such as "x: 1/2 t^-1; y: -1 t^1": per-variable lists of
/// `<rational> t^<int>` terms separated by ';'. A bare rational is a t^0 term
/// and a bare t has coefficient 1. Unlisted variables are zero.
RationalArc::Coeffs parse_arc_spec(std::string_view text, std::span<const std::string> names);

/// Exact rational from "3", "-2/7" or a decimal such as "0.125".
Rational parse_rational(std::string_view text);

/// Comma-separated point with n entries.
std::vector<Rational> parse_point(std::string_view text, std::size_t n);

/// Semicolon-separated list of points.
std::vector<std::vector<Rational>> parse_points(std::string_view text, std::size_t n);

}  // namespace bifinf
