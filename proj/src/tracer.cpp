#include "bifinf/tracer.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>

#include "bifinf/horner.hpp"
#include "bifinf/univariate.hpp"

namespace bifinf {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

template <class Body>
void parallel_for(std::size_t count, unsigned requested, const Body& body) {
  unsigned threads = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  const auto worker = [&]() {
    for (std::size_t i = next++; i < count; i = next++) body(i);
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
}

std::vector<double> to_doubles(std::span<const Rational> v) {
  std::vector<double> out;
  for (const auto& c : v) out.push_back(c.get_d());
  return out;
}

double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

std::vector<double> direction(std::span<const double> x, std::span<const double> center) {
  std::vector<double> d(x.size());
  double norm = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    d[i] = x[i] - center[i];
    norm += d[i] * d[i];
  }
  norm = std::sqrt(norm);
  for (auto& v : d) v /= norm;
  return d;
}

// Floating view of a Milnor system: equations, their gradients, f and grad f.
struct Compiled {
  std::vector<CompiledPoly> eqs;
  std::vector<std::vector<CompiledPoly>> eq_grads;
  std::vector<CompiledPoly> fgrad;
  std::vector<double> center;
  std::size_t pivot = 0;
  bool pivot_mode = true;

  explicit Compiled(const MilnorSystem& sys) : center(to_doubles(sys.center)) {
    pivot_mode = sys.mode.kind == MilnorMode::Kind::pivot;
    pivot = sys.mode.pivot;
    for (const auto& e : sys.equations) {
      eqs.emplace_back(e);
      std::vector<CompiledPoly> g;
      for (std::size_t j = 0; j < sys.num_vars(); ++j) g.emplace_back(partial(e, j));
      eq_grads.push_back(std::move(g));
    }
    for (std::size_t j = 0; j < sys.num_vars(); ++j) fgrad.emplace_back(partial(sys.source.front(), j));
  }

  double residual(std::span<const double> x) const {
    double worst = 0.0;
    for (const auto& e : eqs) {
      const double v = std::abs(e(x));
      const double mag = e.magnitude(x);
      worst = std::max(worst, mag > 0.0 ? v / mag : v);
    }
    return worst;
  }

  std::vector<double> grad_f(std::span<const double> x) const {
    std::vector<double> g;
    for (const auto& p : fgrad) g.push_back(p(x));
    return g;
  }

  // Pivot-chart points with a vanishing pivot partial must also make every
  // 2x2 minor of [grad f; x - a] vanish.
  bool chart_ok(std::span<const double> x, double tol) const {
    if (!pivot_mode) return true;
    const auto g = grad_f(x);
    double gn = 0.0;
    for (double v : g) gn += v * v;
    gn = std::sqrt(gn);
    if (gn == 0.0) return true;
    if (std::abs(g[pivot]) > 1e-6 * gn) return true;
    std::vector<double> d(x.size());
    double dn = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      d[i] = x[i] - center[i];
      dn += d[i] * d[i];
    }
    dn = std::sqrt(dn);
    for (std::size_t j = 0; j < x.size(); ++j) {
      for (std::size_t k = j + 1; k < x.size(); ++k) {
        if (std::abs(g[j] * d[k] - g[k] * d[j]) > tol * gn * dn) return false;
      }
    }
    return true;
  }
};

// Keeps the first of any points within merge_dist * R and orders the rest
// lexicographically so results do not depend on discovery order.
std::vector<SlicePoint> dedupe(std::vector<SlicePoint> pts, double R, const TracerConfig& config) {
  std::vector<SlicePoint> kept;
  for (auto& p : pts) {
    const bool dup = std::any_of(kept.begin(), kept.end(), [&](const SlicePoint& q) {
      return distance(p.x, q.x) <= config.merge_dist * R;
    });
    if (!dup) kept.push_back(std::move(p));
  }
  std::sort(kept.begin(), kept.end(), [](const SlicePoint& a, const SlicePoint& b) { return a.x < b.x; });
  return kept;
}

std::vector<double> circle_point(std::span<const double> c, double R, double theta) {
  return {c[0] + R * std::cos(theta), c[1] + R * std::sin(theta)};
}

std::vector<std::vector<double>> planar_angle_scan(const MilnorSystem& sys, const Compiled& cs, double R,
                                                   const TracerConfig& config) {
  const auto& m = cs.eqs.front();
  const int N = config.grid_nodes;
  const auto g = [&](double th) { return m(circle_point(cs.center, R, th)); };
  std::vector<double> values(static_cast<std::size_t>(N));
  for (int k = 0; k < N; ++k) values[static_cast<std::size_t>(k)] = g(2.0 * kPi * k / N);
  std::vector<std::vector<double>> out;
  for (int k = 0; k < N; ++k) {
    const double th0 = 2.0 * kPi * k / N;
    const double v0 = values[static_cast<std::size_t>(k)];
    const double v1 = values[static_cast<std::size_t>((k + 1) % N)];
    if (v0 == 0.0) {
      out.push_back(circle_point(cs.center, R, th0));
      continue;
    }
    if (v1 == 0.0 || (v0 > 0.0) == (v1 > 0.0)) continue;
    double lo = th0;
    double hi = 2.0 * kPi * (k + 1) / N;
    for (int it = 0; it < 200 && hi - lo > 1e-17 * (1.0 + std::abs(lo)); ++it) {
      const double mid = 0.5 * (lo + hi);
      const double vm = g(mid);
      if (vm == 0.0) {
        lo = hi = mid;
        break;
      }
      if ((vm > 0.0) == (v0 > 0.0)) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    out.push_back(circle_point(cs.center, R, 0.5 * (lo + hi)));
  }
  (void)sys;
  return out;
}

univariate::Poly multiply(const univariate::Poly& a, const univariate::Poly& b) {
  if (a.empty() || b.empty()) return {};
  univariate::Poly out(a.size() + b.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  univariate::trim(out);
  return out;
}

// The circle |x - a| = R as x = a1 + R(1-s^2)/(1+s^2), y = a2 + 2Rs/(1+s^2)
// turns m = 0 into P(s) = (1+s^2)^D m(x(s), y(s)) = 0 with rational
// coefficients; s = infinity is the point (a1 - R, a2).
std::vector<std::vector<double>> planar_exact(const MilnorSystem& sys, const Compiled& cs, double R) {
  const Polynomial& m = sys.equations.front();
  if (m.is_zero()) return {};
  const unsigned D = *m.degree();
  const Rational Rq(R);
  const Rational& a1 = sys.center[0];
  const Rational& a2 = sys.center[1];
  const univariate::Poly X{a1 + Rq, Rational(0), a1 - Rq};
  const univariate::Poly Y{a2, 2 * Rq, a2};
  const univariate::Poly W{Rational(1), Rational(0), Rational(1)};
  const auto powers = [&](const univariate::Poly& base) {
    std::vector<univariate::Poly> p{{Rational(1)}};
    for (unsigned k = 1; k <= D; ++k) p.push_back(multiply(p.back(), base));
    return p;
  };
  const auto Xp = powers(X);
  const auto Yp = powers(Y);
  const auto Wp = powers(W);

  univariate::Poly P;
  for (const auto& [e, c] : m.terms()) {
    univariate::Poly term = multiply(multiply(Xp[e[0]], Yp[e[1]]), Wp[D - e[0] - e[1]]);
    if (P.size() < term.size()) P.resize(term.size(), Rational(0));
    for (std::size_t k = 0; k < term.size(); ++k) P[k] += c * term[k];
  }
  univariate::trim(P);

  std::vector<std::vector<double>> out;
  const std::vector<Rational> at_infinity{a1 - Rq, a2};
  if (eval(m, std::span<const Rational>(at_infinity)) == 0) out.push_back(to_doubles(at_infinity));
  if (P.empty()) return out;

  const auto sf = univariate::squarefree(P);
  const Rational width(1, mpz_class(1) << 62);
  for (auto iv : univariate::isolate_real_roots(P)) {
    iv = univariate::refine(sf, iv, width);
    const double s = Rational((iv.lo + iv.hi) / 2).get_d();
    const double w = 1.0 + s * s;
    out.push_back({cs.center[0] + R * (1.0 - s * s) / w, cs.center[1] + 2.0 * R * s / w});
  }
  return out;
}

void project_to_sphere(std::vector<double>& x, std::span<const double> c, double R) {
  double norm = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) norm += (x[i] - c[i]) * (x[i] - c[i]);
  norm = std::sqrt(norm);
  if (norm == 0.0) {
    x[0] += R;
    return;
  }
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = c[i] + (x[i] - c[i]) * (R / norm);
}

double scaled_merit(const Compiled& cs, std::span<const double> x) {
  double s = 0.0;
  for (const auto& e : cs.eqs) {
    const double mag = e.magnitude(x);
    const double v = mag > 0.0 ? e(x) / mag : e(x);
    s += v * v;
  }
  return s;
}

// Damped Newton on {m_j = 0, |x - a|^2 = R^2} with rows scaled by the
// monomial magnitude and iterates projected back onto the sphere.
std::optional<std::vector<double>> newton_on_sphere(const Compiled& cs, std::vector<double> x, double R,
                                                    const TracerConfig& config) {
  const std::size_t n = x.size();
  const std::size_t neq = cs.eqs.size();
  project_to_sphere(x, cs.center, R);
  double merit = scaled_merit(cs, x);
  for (int it = 0; it < config.newton_iterations; ++it) {
    if (cs.residual(x) < 1e-3 * config.tol) break;
    Eigen::MatrixXd J(static_cast<Eigen::Index>(neq + 1), static_cast<Eigen::Index>(n));
    Eigen::VectorXd F(static_cast<Eigen::Index>(neq + 1));
    for (std::size_t r = 0; r < neq; ++r) {
      double mag = cs.eqs[r].magnitude(x);
      if (mag == 0.0) mag = 1.0;
      F(static_cast<Eigen::Index>(r)) = cs.eqs[r](x) / mag;
      for (std::size_t j = 0; j < n; ++j) {
        J(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = cs.eq_grads[r][j](x) / mag;
      }
    }
    F(static_cast<Eigen::Index>(neq)) = 0.0;
    for (std::size_t j = 0; j < n; ++j) J(static_cast<Eigen::Index>(neq), static_cast<Eigen::Index>(j)) = (x[j] - cs.center[j]) / R;
    Eigen::VectorXd step = J.colPivHouseholderQr().solve(-F);
    if (!step.allFinite()) return std::nullopt;
    const double len = step.norm();
    if (len > 0.5 * R) step *= 0.5 * R / len;
    bool accepted = false;
    for (double t = 1.0; t > 1e-6; t *= 0.5) {
      std::vector<double> trial(x);
      for (std::size_t j = 0; j < n; ++j) trial[j] += t * step(static_cast<Eigen::Index>(j));
      project_to_sphere(trial, cs.center, R);
      const double tm = scaled_merit(cs, trial);
      if (std::isfinite(tm) && tm < merit) {
        x = std::move(trial);
        merit = tm;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  if (!(cs.residual(x) < config.tol)) return std::nullopt;
  return x;
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double normal(std::mt19937_64& rng) {
  const double u1 = 1.0 - uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

std::vector<std::vector<double>> multistart(const Compiled& cs, double R, const TracerConfig& config,
                                            std::span<const std::vector<double>> seeds) {
  const std::size_t n = cs.center.size();
  const std::size_t total = static_cast<std::size_t>(config.starts) + seeds.size();
  std::vector<std::optional<std::vector<double>>> found(total);
  const auto rbits = std::bit_cast<std::uint64_t>(R);
  parallel_for(total, config.threads, [&](std::size_t s) {
    std::vector<double> x0(n);
    if (s < seeds.size()) {
      x0 = seeds[s];
    } else {
      std::seed_seq seq{static_cast<std::uint32_t>(config.seed), static_cast<std::uint32_t>(config.seed >> 32),
                        static_cast<std::uint32_t>(rbits), static_cast<std::uint32_t>(rbits >> 32),
                        static_cast<std::uint32_t>(s)};
      std::mt19937_64 rng(seq);
      for (std::size_t j = 0; j < n; ++j) x0[j] = cs.center[j] + R * normal(rng);
    }
    found[s] = newton_on_sphere(cs, std::move(x0), R, config);
  });
  std::vector<std::vector<double>> out;
  for (auto& p : found) {
    if (p) out.push_back(std::move(*p));
  }
  return out;
}

std::uint64_t cardinality_cap(unsigned d, std::size_t n) {
  if (d == 0) return 0;
  std::uint64_t p = 1;
  for (std::size_t k = 1; k < n; ++k) {
    if (p > std::numeric_limits<std::uint64_t>::max() / d) return std::numeric_limits<std::uint64_t>::max();
    p *= d;
  }
  return p - 1;
}

BranchFit fit_branch(std::span<const BranchSample> tail) {
  BranchFit best;
  const double Rl = tail.back().R;
  const auto sse_for = [&](double alpha, double& t0, double& c) {
    // Linear least squares in (t0, c') for f = t0 + c' (R/R_last)^(-alpha).
    double s1 = 0, su = 0, suu = 0, sf = 0, suf = 0;
    for (const auto& s : tail) {
      const double u = std::pow(s.R / Rl, -alpha);
      s1 += 1;
      su += u;
      suu += u * u;
      sf += s.f;
      suf += u * s.f;
    }
    const double det = s1 * suu - su * su;
    if (std::abs(det) < 1e-300) return std::numeric_limits<double>::infinity();
    t0 = (suu * sf - su * suf) / det;
    c = (s1 * suf - su * sf) / det;
    double sse = 0.0;
    for (const auto& s : tail) {
      const double r = s.f - t0 - c * std::pow(s.R / Rl, -alpha);
      sse += r * r;
    }
    return sse;
  };
  double best_alpha = 1.0;
  double best_sse = std::numeric_limits<double>::infinity();
  double t0 = 0, c = 0;
  for (double a = -6.0; a <= 6.0 + 1e-9; a += 0.05) {
    if (std::abs(a) < 0.025) continue;
    const double e = sse_for(a, t0, c);
    if (e < best_sse) {
      best_sse = e;
      best_alpha = a;
    }
  }
  // Golden-section refinement inside the neighbouring grid cells.
  double lo = best_alpha - 0.05;
  double hi = best_alpha + 0.05;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 60; ++it) {
    const double m1 = hi - g * (hi - lo);
    const double m2 = lo + g * (hi - lo);
    if (sse_for(m1, t0, c) < sse_for(m2, t0, c)) {
      hi = m2;
    } else {
      lo = m1;
    }
  }
  const double alpha = 0.5 * (lo + hi);
  double sse = sse_for(alpha, t0, c);
  if (!(sse <= best_sse)) {
    sse = sse_for(best_alpha, t0, c);
    best.alpha = best_alpha;
  } else {
    best.alpha = alpha;
  }
  best.t0 = t0;
  best.c = c * std::pow(Rl, best.alpha);
  best.rms = std::sqrt(sse / static_cast<double>(tail.size()));
  return best;
}

bool abs_increasing(std::span<const BranchSample> tail) {
  for (std::size_t k = 1; k < tail.size(); ++k) {
    if (!(std::abs(tail[k].f) > std::abs(tail[k - 1].f))) return false;
  }
  return true;
}

}  // namespace

std::vector<double> TracerConfig::radii() const {
  std::vector<double> r;
  double R = r0;
  for (int k = 0; k < count; ++k, R *= factor) r.push_back(R);
  return r;
}

void TracerConfig::validate() const {
  const auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(name) + " must be positive");
  };
  positive(tol, "tol");
  positive(merge_dist, "merge_dist");
  positive(conv_tol, "conv_tol");
  positive(cluster_tol, "cluster_tol");
  positive(div_threshold, "div_threshold");
  positive(alpha_min, "alpha_min");
  positive(r0, "r0");
  positive(max_match_dist, "max_match_dist");
  if (!(factor > 1.0) || !std::isfinite(factor)) throw std::invalid_argument("radius factor must exceed 1");
  if (count < 4) throw std::invalid_argument("the radius schedule needs at least 4 values");
  if (grid_nodes < 8) throw std::invalid_argument("grid_nodes must be at least 8");
  if (starts < 1) throw std::invalid_argument("starts must be at least 1");
  if (newton_iterations < 1) throw std::invalid_argument("newton_iterations must be at least 1");
}

const char* to_string(BranchStatus s) {
  switch (s) {
    case BranchStatus::convergent:
      return "convergent";
    case BranchStatus::divergent:
      return "divergent";
    case BranchStatus::lost:
      return "lost";
  }
  return "lost";
}

const char* to_string(AnalysisStatus s) {
  switch (s) {
    case AnalysisStatus::ok:
      return "ok";
    case AnalysisStatus::degenerate:
      return "degenerate";
    case AnalysisStatus::low_degree:
      return "low_degree";
  }
  return "ok";
}

double milnor_residual(const MilnorSystem& sys, std::span<const double> x) { return Compiled(sys).residual(x); }

std::vector<SlicePoint> slice_solve(const MilnorSystem& sys, double R, const TracerConfig& config,
                                    std::span<const std::vector<double>> seeds) {
  if (!(R > 0.0) || !std::isfinite(R)) throw std::invalid_argument("slice radius must be positive");
  const std::size_t n = sys.num_vars();
  if (n < 2) throw std::invalid_argument("slices need n >= 2");
  if (sys.equations.empty()) return {};
  const Compiled cs(sys);

  std::vector<std::vector<double>> raw;
  if (n == 2 && sys.equations.size() == 1) {
    raw = config.planar == PlanarMethod::exact ? planar_exact(sys, cs, R) : planar_angle_scan(sys, cs, R, config);
  } else {
    raw = multistart(cs, R, config, seeds);
  }

  std::vector<SlicePoint> pts;
  for (auto& x : raw) {
    const double res = cs.residual(x);
    if (!(res < config.tol) || !cs.chart_ok(x, std::sqrt(config.tol))) continue;
    pts.push_back({std::move(x), res});
  }
  return dedupe(std::move(pts), R, config);
}

std::vector<BranchTrace> trace_branches(const MilnorSystem& sys, std::span<const double> radii,
                                        const TracerConfig& config) {
  if (radii.size() < 4) throw std::invalid_argument("trace_branches needs at least 4 radii");
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (!(radii[k] > 0.0) || (k > 0 && !(radii[k] > radii[k - 1]))) {
      throw std::invalid_argument("radii must be positive and strictly increasing");
    }
  }
  const std::size_t n = sys.num_vars();
  const auto center = to_doubles(sys.center);

  std::vector<std::vector<SlicePoint>> slices(radii.size());
  if (n == 2) {
    parallel_for(radii.size(), config.threads, [&](std::size_t k) {
      TracerConfig inner = config;
      inner.threads = 1;
      slices[k] = slice_solve(sys, radii[k], inner);
    });
  } else {
    // Previous-radius points, pushed out radially, seed the next solve.
    for (std::size_t k = 0; k < radii.size(); ++k) {
      std::vector<std::vector<double>> seeds;
      if (k > 0) {
        for (const auto& p : slices[k - 1]) {
          std::vector<double> s(n);
          for (std::size_t j = 0; j < n; ++j) s[j] = center[j] + (p.x[j] - center[j]) * (radii[k] / radii[k - 1]);
          seeds.push_back(std::move(s));
        }
      }
      slices[k] = slice_solve(sys, radii[k], config, seeds);
    }
  }

  const JacobianEvaluator jac(std::span<const Polynomial>(sys.source));
  const CompiledPoly f(sys.source.front());
  const auto sample = [&](double R, const SlicePoint& p) {
    BranchSample s;
    s.R = R;
    s.x = p.x;
    s.f = f(p.x);
    const Eigen::Map<const Eigen::VectorXd> xv(p.x.data(), static_cast<Eigen::Index>(n));
    s.malgrange = xv.stableNorm() * rabier_nu(jac(p.x));
    s.residual = p.residual;
    return s;
  };

  std::vector<BranchTrace> traces;
  std::vector<std::size_t> active;  // indices into traces that reached the previous radius
  for (std::size_t k = 0; k < radii.size(); ++k) {
    const auto& pts = slices[k];
    std::vector<bool> used(pts.size(), false);
    std::vector<std::size_t> next_active;
    if (k > 0) {
      struct Pair {
        double dist;
        std::size_t branch;
        std::size_t point;
      };
      std::vector<Pair> pairs;
      for (std::size_t b = 0; b < active.size(); ++b) {
        const auto du = direction(traces[active[b]].samples.back().x, center);
        for (std::size_t p = 0; p < pts.size(); ++p) {
          const double d = distance(du, direction(pts[p].x, center));
          if (d <= config.max_match_dist) pairs.push_back({d, b, p});
        }
      }
      std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
        if (a.dist != b.dist) return a.dist < b.dist;
        if (a.branch != b.branch) return a.branch < b.branch;
        return a.point < b.point;
      });
      std::vector<bool> matched(active.size(), false);
      for (const auto& pr : pairs) {
        if (matched[pr.branch] || used[pr.point]) continue;
        matched[pr.branch] = used[pr.point] = true;
        traces[active[pr.branch]].samples.push_back(sample(radii[k], pts[pr.point]));
      }
      for (std::size_t b = 0; b < active.size(); ++b) {
        if (matched[b]) {
          next_active.push_back(active[b]);
        } else {
          traces[active[b]].ended_early = true;
        }
      }
    }
    for (std::size_t p = 0; p < pts.size(); ++p) {
      if (used[p]) continue;
      BranchTrace t;
      t.branch_id = static_cast<int>(traces.size());
      t.samples.push_back(sample(radii[k], pts[p]));
      next_active.push_back(traces.size());
      traces.push_back(std::move(t));
    }
    std::sort(next_active.begin(), next_active.end());
    active = std::move(next_active);
  }
  return traces;
}

std::vector<LimitValue> cluster_values(std::vector<std::pair<double, int>> values, double tol) {
  std::sort(values.begin(), values.end());
  std::vector<LimitValue> out;
  std::size_t i = 0;
  while (i < values.size()) {
    std::size_t j = i + 1;
    while (j < values.size() && values[j].first - values[j - 1].first <= tol) ++j;
    LimitValue lv;
    double sum = 0.0;
    for (std::size_t k = i; k < j; ++k) {
      sum += values[k].first;
      lv.branch_ids.push_back(values[k].second);
    }
    lv.value = sum / static_cast<double>(j - i);
    lv.uncertainty = 0.5 * (values[j - 1].first - values[i].first);
    std::sort(lv.branch_ids.begin(), lv.branch_ids.end());
    out.push_back(std::move(lv));
    i = j;
  }
  return out;
}

LimitEstimate estimate_limits(std::vector<BranchTrace>& traces, const TracerConfig& config) {
  LimitEstimate est;
  std::vector<std::pair<double, int>> limits;
  std::map<int, double> gaps;
  for (auto& t : traces) {
    t.status = BranchStatus::lost;
    t.fit.reset();
    if (t.ended_early || t.samples.size() < 4) {
      ++est.lost_count;
      continue;
    }
    const std::size_t half = std::max<std::size_t>(3, (t.samples.size() + 1) / 2);
    const std::span<const BranchSample> tail(t.samples.data() + (t.samples.size() - half), half);
    const double f_last = tail.back().f;

    double lo = tail.front().f, hi = tail.front().f;
    for (const auto& s : tail) {
      lo = std::min(lo, s.f);
      hi = std::max(hi, s.f);
    }
    BranchFit fit;
    if (hi - lo <= 1e-12 * std::max(1.0, std::abs(f_last))) {
      fit.t0 = f_last;
      fit.constant = true;
    } else {
      fit = fit_branch(tail);
    }
    t.fit = fit;

    const bool grows = abs_increasing(tail);
    if (grows && (std::abs(f_last) > config.div_threshold || (!fit.constant && fit.alpha < -config.alpha_min))) {
      t.status = BranchStatus::divergent;
      ++est.divergent_count;
    } else if ((fit.constant || fit.alpha > config.alpha_min) && std::abs(f_last - fit.t0) < config.conv_tol) {
      t.status = BranchStatus::convergent;
      ++est.convergent_count;
      limits.emplace_back(fit.t0, t.branch_id);
      gaps[t.branch_id] = std::abs(f_last - fit.t0);
    } else {
      ++est.lost_count;
    }
  }
  est.limit_values = cluster_values(std::move(limits), config.cluster_tol);
  for (auto& lv : est.limit_values) {
    for (int id : lv.branch_ids) lv.uncertainty = std::max(lv.uncertainty, gaps[id]);
  }
  return est;
}

AnalysisReport s_a_estimate(const Polynomial& f, std::span<const Rational> center, const TracerConfig& config) {
  config.validate();
  const std::size_t n = f.num_vars();
  if (n < 2) throw std::invalid_argument("analysis needs n >= 2 variables");
  if (center.size() != n) throw std::invalid_argument("center dimension differs from variable count");

  AnalysisReport rep;
  rep.config = config;
  rep.center.assign(center.begin(), center.end());
  rep.radii = config.radii();
  rep.certified = n == 2;
  const auto deg = f.degree();
  rep.bound_cap = cardinality_cap(deg.value_or(0), n);
  if (!deg || *deg < 2) {
    rep.status = AnalysisStatus::low_degree;
    rep.note = "deg f < 2: f has no asymptotic nonregular values; nothing was traced";
    return rep;
  }

  rep.pivot = default_pivot(f);
  const std::vector<Polynomial> source{f};
  const MilnorSystem sys = milnor_equations(source, center, MilnorMode::pivot_on(rep.pivot));
  rep.equations = sys.equations;
  if (sys.degenerate()) {
    rep.status = AnalysisStatus::degenerate;
    rep.note = "a Milnor equation vanishes identically at this center; choose another center";
    return rep;
  }

  rep.branches = trace_branches(sys, rep.radii, config);
  rep.limits = estimate_limits(rep.branches, config);
  rep.bound_respected = rep.limits.limit_values.size() <= rep.bound_cap;
  for (const auto& t : rep.branches) {
    if (t.status != BranchStatus::convergent) continue;
    MalgrangeMonitor m;
    m.branch_id = t.branch_id;
    m.first = t.samples.front().malgrange;
    m.last = t.samples.back().malgrange;
    m.min = m.first;
    for (const auto& s : t.samples) m.min = std::min(m.min, s.malgrange);
    m.pass = m.last < 0.1 * m.first;
    m.dips = m.min < 0.5 * m.first;
    rep.monitor_pass = rep.monitor_pass && m.pass;
    rep.monitors.push_back(m);
  }
  return rep;
}

SInfinityReport s_infinity_estimate(const Polynomial& f, std::span<const std::vector<Rational>> centers,
                                    const TracerConfig& config) {
  if (centers.size() < 2) throw std::invalid_argument("S_inf estimation needs at least 2 centers");
  SInfinityReport out;
  out.certified = f.num_vars() == 2;
  for (const auto& c : centers) out.per_center.push_back(s_a_estimate(f, c, config));

  std::vector<const AnalysisReport*> usable;
  for (const auto& r : out.per_center) {
    if (r.status != AnalysisStatus::degenerate) usable.push_back(&r);
  }
  out.any_usable = !usable.empty();
  if (usable.empty()) return out;

  for (const auto& lv : usable.front()->limits.limit_values) {
    double sum = lv.value;
    double unc = lv.uncertainty;
    bool everywhere = true;
    for (std::size_t k = 1; k < usable.size() && everywhere; ++k) {
      const LimitValue* hit = nullptr;
      for (const auto& other : usable[k]->limits.limit_values) {
        if (std::abs(other.value - lv.value) <= config.cluster_tol &&
            (!hit || std::abs(other.value - lv.value) < std::abs(hit->value - lv.value))) {
          hit = &other;
        }
      }
      if (!hit) {
        everywhere = false;
      } else {
        sum += hit->value;
        unc = std::max({unc, hit->uncertainty, std::abs(hit->value - lv.value)});
      }
    }
    if (everywhere) out.intersection.push_back({sum / static_cast<double>(usable.size()), unc, {}});
  }
  return out;
}

CenterScreen sampling_screen(const TracerConfig& config) {
  return [config](const Polynomial& f, std::span<const Rational> center) -> CenterScreenResult {
    const std::vector<Polynomial> source{f};
    const MilnorSystem sys = milnor_equations(source, center, MilnorMode::pivot_on(default_pivot(f)));
    if (sys.degenerate()) return {false, "a Milnor equation vanishes identically"};
    TracerConfig inner = config;
    inner.starts = std::min(config.starts, 64);
    const Compiled cs(sys);
    const std::size_t n = sys.num_vars();
    int checked = 0;
    for (double R : {config.r0, config.r0 * config.factor}) {
      for (const auto& p : slice_solve(sys, R, inner)) {
        const auto g = cs.grad_f(p.x);
        double gn = 0.0;
        for (double v : g) gn += v * v;
        if (gn == 0.0) continue;  // Sing f is excluded from the rank test
        Eigen::MatrixXd J(static_cast<Eigen::Index>(cs.eqs.size()), static_cast<Eigen::Index>(n));
        for (std::size_t r = 0; r < cs.eqs.size(); ++r) {
          for (std::size_t j = 0; j < n; ++j) {
            J(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = cs.eq_grads[r][j](p.x);
          }
          const double rn = J.row(static_cast<Eigen::Index>(r)).norm();
          if (rn == 0.0 || !std::isfinite(rn)) return {false, "rank-deficient Milnor Jacobian at R=" + std::to_string(R)};
          J.row(static_cast<Eigen::Index>(r)) /= rn;
        }
        if (rabier_nu(J) < 1e-6) return {false, "nearly rank-deficient Milnor Jacobian at R=" + std::to_string(R)};
        ++checked;
      }
    }
    return {true, std::to_string(checked) + " sampled points with full-rank Milnor Jacobian"};
  };
}

}  // namespace bifinf
