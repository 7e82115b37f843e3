#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bifinf/milnor.hpp"
#include "bifinf/poly.hpp"

namespace bifinf {

/// How the single Milnor equation is solved on a circle when n = 2.
enum class PlanarMethod {
  /// Exact real-root isolation of the rationally parametrized circle.
  exact,
  /// Sign-change scan on a uniform angular grid refined by bisection.
  angle_scan,
};

struct TracerConfig {
  std::uint64_t seed = 1;
  /// Bound on the relative residual |m_j(x)| / sum |c_alpha x^alpha| of a slice point.
  double tol = 1e-8;
  /// Slice points closer than merge_dist * R are merged.
  double merge_dist = 1e-6;
  double conv_tol = 1e-3;
  double cluster_tol = 1e-3;
  double div_threshold = 1e6;
  double alpha_min = 0.25;
  double r0 = 10.0;
  double factor = 2.0;
  int count = 10;
  PlanarMethod planar = PlanarMethod::exact;
  int grid_nodes = 4096;
  int starts = 512;
  int newton_iterations = 80;
  /// Largest distance between unit direction vectors matched across radii.
  double max_match_dist = 0.5;
  /// 0 means std::thread::hardware_concurrency().
  unsigned threads = 0;

  /// r0 * factor^k, k = 0 .. count-1.
  std::vector<double> radii() const;
  /// Throws std::invalid_argument unless every tolerance is positive, factor > 1 and count >= 4.
  void validate() const;
};

struct SlicePoint {
  std::vector<double> x;
  double residual = 0.0;
};

/// Points of M_a(f) on the sphere |x - a| = R. `seeds` are extra Newton
/// starting points (used for n >= 3 only).
std::vector<SlicePoint> slice_solve(const MilnorSystem& sys, double R, const TracerConfig& config,
                                    std::span<const std::vector<double>> seeds = {});

/// Relative residual of the Milnor equations at x, the largest
/// |m_j(x)| / sum |c_alpha x^alpha| over the equations.
double milnor_residual(const MilnorSystem& sys, std::span<const double> x);

struct BranchSample {
  double R = 0.0;
  std::vector<double> x;
  double f = 0.0;
  double malgrange = 0.0;
  double residual = 0.0;
};

enum class BranchStatus { convergent, divergent, lost };
const char* to_string(BranchStatus s);

/// Least-squares fit f(R) ~ t0 + c R^(-alpha) on the last half of a branch.
/// `constant` marks a branch whose f-values agree to rounding; alpha is then
/// meaningless and left at 0.
struct BranchFit {
  double t0 = 0.0;
  double c = 0.0;
  double alpha = 0.0;
  double rms = 0.0;
  bool constant = false;
};

struct BranchTrace {
  int branch_id = 0;
  std::vector<BranchSample> samples;
  BranchStatus status = BranchStatus::lost;
  /// True when the branch had no match before the final radius.
  bool ended_early = false;
  std::optional<BranchFit> fit;
};

/// Follows slice points across the radii by greedy mutual-nearest matching of
/// the directions (x - a)/|x - a|. Needs at least 4 increasing radii.
std::vector<BranchTrace> trace_branches(const MilnorSystem& sys, std::span<const double> radii,
                                        const TracerConfig& config);

struct LimitValue {
  double value = 0.0;
  double uncertainty = 0.0;
  std::vector<int> branch_ids;
};

struct LimitEstimate {
  std::vector<LimitValue> limit_values;
  int convergent_count = 0;
  int divergent_count = 0;
  int lost_count = 0;
};

/// Fits and classifies every trace (status and fit are written back) and
/// clusters the convergent limits.
LimitEstimate estimate_limits(std::vector<BranchTrace>& traces, const TracerConfig& config);

/// Single-linkage clustering of values with gaps <= tol.
std::vector<LimitValue> cluster_values(std::vector<std::pair<double, int>> values, double tol);

struct MalgrangeMonitor {
  int branch_id = 0;
  double first = 0.0;
  double last = 0.0;
  double min = 0.0;
  /// last < 0.1 * first.
  bool pass = false;
  /// min < first / 2.
  bool dips = false;
};

enum class AnalysisStatus { ok, degenerate, low_degree };
const char* to_string(AnalysisStatus s);

struct AnalysisReport {
  AnalysisStatus status = AnalysisStatus::ok;
  std::string note;
  std::vector<Rational> center;
  std::size_t pivot = 0;
  std::vector<Polynomial> equations;
  std::vector<double> radii;
  std::vector<BranchTrace> branches;
  LimitEstimate limits;
  /// d^(n-1) - 1, saturated at the largest unsigned 64-bit value.
  std::uint64_t bound_cap = 0;
  bool bound_respected = true;
  std::vector<MalgrangeMonitor> monitors;
  bool monitor_pass = true;
  /// True for n = 2, where the slice solver finds every real point exactly;
  /// n >= 3 uses best-effort multistart Newton.
  bool certified = false;
  TracerConfig config;
};

AnalysisReport s_a_estimate(const Polynomial& f, std::span<const Rational> center, const TracerConfig& config);

struct SInfinityReport {
  std::vector<AnalysisReport> per_center;
  /// Limit values found (within cluster_tol) at every non-degenerate center.
  std::vector<LimitValue> intersection;
  /// False when every center was degenerate.
  bool any_usable = false;
  bool certified = false;
};

SInfinityReport s_infinity_estimate(const Polynomial& f, std::span<const std::vector<Rational>> centers,
                                    const TracerConfig& config);

/// Center screen: rejects degenerate systems and centers where some sampled
/// slice point off Sing f has a rank-deficient equation Jacobian.
CenterScreen sampling_screen(const TracerConfig& config);

}  // namespace bifinf
