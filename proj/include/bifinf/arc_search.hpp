#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "bifinf/arcs.hpp"
#include "bifinf/poly.hpp"

namespace bifinf {

struct ArcSearchConfig {
  std::uint64_t seed = 1;
  int starts = 64;
  int max_iterations = 400;
  /// Acceptance threshold on the sum of squared condition violations.
  double tol = 1e-8;
  /// 0 means std::thread::hardware_concurrency().
  unsigned threads = 0;
};

/// A numerically found approximate element of Arc_inf(f), normalized so that
/// sum_{k>0} |a_k|^2 = 1.
struct ArcSearchHit {
  int start = 0;
  ArcWindow window;
  std::map<int, std::vector<double>> coefficients;
  double b0_estimate = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

/// Multistart Levenberg-Marquardt on the coefficient equations of Arc_inf(f)
/// over the full window. Hits are ordered by start index and are identical for
/// identical (f, config) regardless of the thread count. The list is a sample
/// of Arc_inf(f), never a certificate that other limit values are absent.
std::vector<ArcSearchHit> search_arcs(const Polynomial& f, const ArcSearchConfig& config);

/// Sum of squared violations of the vanishing conditions for a floating arc; the objective
/// minimized by search_arcs, evaluated independently of its Jacobian code.
double arc_violation(const Polynomial& f, const std::map<int, std::vector<double>>& coefficients);

}  // namespace bifinf
