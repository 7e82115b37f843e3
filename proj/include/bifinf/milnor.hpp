#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bifinf/horner.hpp"
#include "bifinf/poly.hpp"

namespace bifinf {

/// How the Milnor set M_a(f) = {x : rank D(f, rho_a)(x) < p + 1} is cut out.
struct MilnorMode {
  enum class Kind { pivot, minors };
  Kind kind = Kind::pivot;
  std::size_t pivot = 0;

  /// The n - 1 equations m_j = f_i (x_j - a_j) - f_j (x_i - a_i), j != i,
  /// valid on the chart where the partial f_i does not vanish. p = 1 only.
  static MilnorMode pivot_on(std::size_t index) { return {Kind::pivot, index}; }
  /// All (p+1)x(p+1) minors of the matrix stacking Df(x) over (x - a).
  static MilnorMode minors() { return {Kind::minors, 0}; }
};

struct MilnorSystem {
  std::vector<Polynomial> source;
  std::vector<Rational> center;
  MilnorMode mode;
  std::vector<Polynomial> equations;

  std::size_t num_vars() const { return center.size(); }
  /// True when some equation is identically zero, i.e. the system does not
  /// cut out a curve (e.g. a radially symmetric f seen from its center).
  bool degenerate() const;
};

MilnorSystem milnor_equations(std::span<const Polynomial> f, std::span<const Rational> center, MilnorMode mode);

/// argmax_i deg(df/dx_i), ties broken by the lowest index.
std::size_t default_pivot(const Polynomial& f);

/// nu(A) = inf_{|phi| = 1} |A^T phi|, the smallest singular value of a p x n
/// matrix with p <= n.
double rabier_nu(const Eigen::MatrixXd& jacobian);

/// Floating evaluation of the Jacobian Df(x) of a polynomial map.
class JacobianEvaluator {
 public:
  explicit JacobianEvaluator(std::span<const Polynomial> f);
  Eigen::MatrixXd operator()(std::span<const double> x) const;
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<CompiledPoly> partials_;  // row-major
};

/// |x| * nu(Df(x)), the quantity whose vanishing along a sequence escaping to
/// infinity defines the asymptotic critical values K_inf(f).
double malgrange_quantity(std::span<const Polynomial> f, std::span<const double> x);

struct CenterScreenResult {
  bool pass = false;
  std::string diagnostic;
};

/// Decides whether a candidate center looks generic for f.
using CenterScreen = std::function<CenterScreenResult(const Polynomial& f, std::span<const Rational> center)>;

struct CenterPick {
  std::vector<Rational> center;
  int attempts = 0;
  std::vector<std::string> rejected;
};

class CenterSelectionError : public std::runtime_error {
 public:
  CenterSelectionError(const std::string& what, std::vector<std::string> diagnostics)
      : std::runtime_error(what), diagnostics_(std::move(diagnostics)) {}
  const std::vector<std::string>& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::vector<std::string> diagnostics_;
};

/// Uniform draw of a center with entries p/q, p in [-100, 100], q in [1, 100].
std::vector<Rational> draw_center(std::mt19937_64& rng, std::size_t n);

/// Draws centers from a generator seeded with `seed` until one passes the
/// screen. Deterministic in seed.
CenterPick pick_generic_center(const Polynomial& f, std::uint64_t seed, const CenterScreen& screen,
                               int max_attempts = 16);

}  // namespace bifinf
