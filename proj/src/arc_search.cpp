#include "bifinf/arc_search.hpp"

#include <Eigen/Dense>

#include <atomic>
#include <cmath>
#include <optional>
#include <random>
#include <thread>

#include "bifinf/horner.hpp"
#include "bifinf/laurent.hpp"

namespace bifinf {

namespace {

using Series = Laurent<double>;

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Box-Muller on the raw engine output, so draws do not depend on the
// standard library's distribution implementation.
double normal(std::mt19937_64& rng) {
  const double u1 = 1.0 - uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

// Coefficients of a Laurent series in a dense window starting at `lo`.
struct Dense {
  int lo = 0;
  std::vector<double> c;
  double at(int k) const {
    const int i = k - lo;
    return (i < 0 || i >= static_cast<int>(c.size())) ? 0.0 : c[static_cast<std::size_t>(i)];
  }
};

Dense densify(const Series& s) {
  Dense d;
  if (s.is_zero()) return d;
  d.lo = *s.min_exponent();
  d.c.assign(static_cast<std::size_t>(*s.max_exponent() - d.lo + 1), 0.0);
  for (const auto& [k, v] : s.terms()) d.c[static_cast<std::size_t>(k - d.lo)] = v;
  return d;
}

struct RowBlock {
  char condition;
  int partial;     // -1 for f
  int multiplier;  // -1 unless condition 'd'
  int first_power;
  int last_power;
};

// Residuals and analytic Jacobian of the coefficient equations for a
// floating arc over the full window.
class ArcProblem {
 public:
  ArcProblem(const Polynomial& f, const ArcWindow& w) : n_(f.num_vars()), w_(w) {
    const auto convert = [](const Rational& c) { return c.get_d(); };
    f_ = HornerPlan<double>(f, convert);
    const int deg = static_cast<int>(f.degree().value_or(0));
    rows_.push_back({'b', -1, -1, 1, deg * w.k_max});
    for (std::size_t i = 0; i < n_; ++i) {
      const Polynomial gi = partial(f, i);
      grad_.emplace_back(gi, convert);
      for (std::size_t l = 0; l < n_; ++l) hess_.emplace_back(partial(gi, l), convert);
      if (gi.is_zero()) continue;
      const int dg = static_cast<int>(*gi.degree());
      rows_.push_back({'c', static_cast<int>(i), -1, 0, dg * w.k_max});
      for (std::size_t j = 0; j < n_; ++j) {
        rows_.push_back({'d', static_cast<int>(i), static_cast<int>(j), 0, w.k_max + dg * w.k_max});
      }
    }
    residual_count_ = 0;
    for (const auto& r : rows_) residual_count_ += static_cast<std::size_t>(std::max(0, r.last_power - r.first_power + 1));
  }

  std::size_t unknowns() const { return n_ * w_.length(); }
  std::size_t residuals() const { return residual_count_; }
  std::size_t index(int k, std::size_t j) const { return static_cast<std::size_t>(k - w_.k_min) * n_ + j; }

  std::vector<Series> components(const Eigen::VectorXd& a) const {
    std::vector<Series> x(n_);
    for (int k = w_.k_min; k <= w_.k_max; ++k) {
      for (std::size_t j = 0; j < n_; ++j) x[j].add(k, a(static_cast<Eigen::Index>(index(k, j))));
    }
    return x;
  }

  /// Residual vector (without the sphere row); fills the Jacobian if given.
  Eigen::VectorXd evaluate(const Eigen::VectorXd& a, Eigen::MatrixXd* jac) const {
    const auto x = components(a);
    const std::span<const Series> xs(x);
    const auto lift = [](double c) { return Series::constant(c); };
    const Dense F = densify(f_.evaluate<Series>(xs, lift));
    std::vector<Series> G(n_);
    std::vector<Dense> Gd(n_);
    std::vector<Dense> H(n_ * n_);
    for (std::size_t i = 0; i < n_; ++i) {
      G[i] = grad_[i].evaluate<Series>(xs, lift);
      Gd[i] = densify(G[i]);
      if (jac) {
        for (std::size_t l = 0; l < n_; ++l) H[i * n_ + l] = densify(hess_[i * n_ + l].evaluate<Series>(xs, lift));
      }
    }

    Eigen::VectorXd r(static_cast<Eigen::Index>(residual_count_));
    if (jac) jac->setZero(static_cast<Eigen::Index>(residual_count_), static_cast<Eigen::Index>(unknowns()));
    Eigen::Index row = 0;
    for (const auto& blk : rows_) {
      if (blk.condition == 'b') {
        for (int m = blk.first_power; m <= blk.last_power; ++m, ++row) {
          r(row) = F.at(m);
          if (!jac) continue;
          for (int k = w_.k_min; k <= w_.k_max; ++k) {
            for (std::size_t l = 0; l < n_; ++l) (*jac)(row, static_cast<Eigen::Index>(index(k, l))) = Gd[l].at(m - k);
          }
        }
      } else if (blk.condition == 'c') {
        const auto i = static_cast<std::size_t>(blk.partial);
        for (int m = blk.first_power; m <= blk.last_power; ++m, ++row) {
          r(row) = Gd[i].at(m);
          if (!jac) continue;
          for (int k = w_.k_min; k <= w_.k_max; ++k) {
            for (std::size_t l = 0; l < n_; ++l) {
              (*jac)(row, static_cast<Eigen::Index>(index(k, l))) = H[i * n_ + l].at(m - k);
            }
          }
        }
      } else {
        const auto i = static_cast<std::size_t>(blk.partial);
        const auto j = static_cast<std::size_t>(blk.multiplier);
        const Dense P = densify(x[j] * G[i]);
        std::vector<Dense> Q;
        if (jac) {
          for (std::size_t l = 0; l < n_; ++l) {
            Q.push_back(densify(x[j] * hess_[i * n_ + l].evaluate<Series>(xs, lift)));
          }
        }
        for (int m = blk.first_power; m <= blk.last_power; ++m, ++row) {
          r(row) = P.at(m);
          if (!jac) continue;
          for (int k = w_.k_min; k <= w_.k_max; ++k) {
            for (std::size_t l = 0; l < n_; ++l) {
              double v = Q[l].at(m - k);
              if (l == j) v += Gd[i].at(m - k);
              (*jac)(row, static_cast<Eigen::Index>(index(k, l))) = v;
            }
          }
        }
      }
    }
    return r;
  }

  const ArcWindow& window() const { return w_; }
  std::size_t n() const { return n_; }

  double b0(const Eigen::VectorXd& a) const {
    const auto x = components(a);
    const std::span<const Series> xs(x);
    const Series fx = f_.evaluate<Series>(xs, [](double c) { return Series::constant(c); });
    const double* c0 = fx.find(0);
    return c0 ? *c0 : 0.0;
  }

 private:
  std::size_t n_;
  ArcWindow w_;
  HornerPlan<double> f_;
  std::vector<HornerPlan<double>> grad_;
  std::vector<HornerPlan<double>> hess_;
  std::vector<RowBlock> rows_;
  std::size_t residual_count_ = 0;
};

// a_k -> lambda^k a_k so that the positive-power part has unit norm.
bool normalize(const ArcProblem& prob, Eigen::VectorXd& a) {
  const auto& w = prob.window();
  std::map<int, double> sums;
  for (int k = 1; k <= w.k_max; ++k) {
    double s = 0.0;
    for (std::size_t j = 0; j < prob.n(); ++j) {
      const double v = a(static_cast<Eigen::Index>(prob.index(k, j)));
      s += v * v;
    }
    if (s > 0.0) sums[k] = s;
  }
  if (sums.empty()) return false;
  const double lambda = normalizing_lambda(sums);
  if (!std::isfinite(lambda) || lambda <= 0.0) return false;
  for (int k = w.k_min; k <= w.k_max; ++k) {
    const double scale = std::pow(lambda, k);
    for (std::size_t j = 0; j < prob.n(); ++j) a(static_cast<Eigen::Index>(prob.index(k, j))) *= scale;
  }
  return true;
}

Eigen::VectorXd initial_arc(const ArcProblem& prob, std::uint64_t seed, int start) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(start)};
  std::mt19937_64 rng(seq);
  const auto& w = prob.window();
  // Cycle the top nonzero power through 1..k_max so low-order arcs get starts
  // of their own.
  const int top = 1 + start % w.k_max;
  Eigen::VectorXd a = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(prob.unknowns()));
  double pos_norm = 0.0;
  for (int k = w.k_min; k <= top; ++k) {
    const double scale = k > 0 ? 1.0 : std::pow(0.5, -k);
    for (std::size_t j = 0; j < prob.n(); ++j) {
      const double v = scale * normal(rng);
      a(static_cast<Eigen::Index>(prob.index(k, j))) = v;
      if (k > 0) pos_norm += v * v;
    }
  }
  pos_norm = std::sqrt(pos_norm);
  for (int k = 1; k <= top; ++k) {
    for (std::size_t j = 0; j < prob.n(); ++j) a(static_cast<Eigen::Index>(prob.index(k, j))) /= pos_norm;
  }
  return a;
}

struct StartResult {
  Eigen::VectorXd a;
  double residual = 0.0;
  int iterations = 0;
  bool escapes = false;
};

// Levenberg-Marquardt on [coefficient residuals; sphere residual].
StartResult run_start(const ArcProblem& prob, Eigen::VectorXd a, int max_iterations) {
  const auto& w = prob.window();
  const auto full = [&](const Eigen::VectorXd& v, Eigen::MatrixXd* jac) {
    Eigen::MatrixXd J;
    Eigen::VectorXd r = prob.evaluate(v, jac ? &J : nullptr);
    Eigen::VectorXd out(r.size() + 1);
    out.head(r.size()) = r;
    double s = -1.0;
    for (int k = 1; k <= w.k_max; ++k) {
      for (std::size_t j = 0; j < prob.n(); ++j) {
        const double c = v(static_cast<Eigen::Index>(prob.index(k, j)));
        s += c * c;
      }
    }
    out(r.size()) = s;
    if (jac) {
      jac->setZero(out.size(), v.size());
      jac->topRows(r.size()) = J;
      for (int k = 1; k <= w.k_max; ++k) {
        for (std::size_t j = 0; j < prob.n(); ++j) {
          const auto idx = static_cast<Eigen::Index>(prob.index(k, j));
          (*jac)(r.size(), idx) = 2.0 * v(idx);
        }
      }
    }
    return out;
  };

  double mu = 1e-3;
  Eigen::MatrixXd J;
  Eigen::VectorXd r = full(a, &J);
  double cost = r.squaredNorm();
  int it = 0;
  for (; it < max_iterations && cost > 1e-30; ++it) {
    const Eigen::MatrixXd A = J.transpose() * J;
    const Eigen::VectorXd g = J.transpose() * r;
    bool accepted = false;
    for (int attempt = 0; attempt < 12 && !accepted; ++attempt) {
      Eigen::MatrixXd damped = A;
      for (Eigen::Index d = 0; d < A.rows(); ++d) damped(d, d) += mu * std::max(A(d, d), 1e-12);
      const Eigen::VectorXd step = damped.ldlt().solve(-g);
      if (!step.allFinite()) {
        mu *= 10.0;
        continue;
      }
      const Eigen::VectorXd trial = a + step;
      const Eigen::VectorXd rt = full(trial, nullptr);
      const double ct = rt.squaredNorm();
      if (std::isfinite(ct) && ct < cost) {
        a = trial;
        cost = ct;
        mu = std::max(mu / 3.0, 1e-12);
        accepted = true;
        if (step.norm() < 1e-15 * (1.0 + a.norm())) it = max_iterations;
      } else {
        mu *= 4.0;
      }
    }
    if (!accepted) break;
    r = full(a, &J);
  }

  StartResult out;
  out.iterations = it;
  out.escapes = normalize(prob, a);
  out.residual = prob.evaluate(a, nullptr).squaredNorm();
  out.a = std::move(a);
  return out;
}

}  // namespace

double arc_violation(const Polynomial& f, const std::map<int, std::vector<double>>& coefficients) {
  const std::size_t n = f.num_vars();
  std::vector<Series> x(n);
  for (const auto& [k, a] : coefficients) {
    if (a.size() != n) throw std::invalid_argument("arc coefficient vector has wrong length");
    for (std::size_t j = 0; j < n; ++j) x[j].add(k, a[j]);
  }
  const std::span<const Series> xs(x);
  const auto lift = [](const Rational& c) { return c.get_d(); };
  double total = 0.0;
  const Series fx = compose<double>(f, xs, lift);
  for (const auto& [k, c] : fx.terms()) {
    if (k >= 1) total += c * c;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Series gi = compose<double>(partial(f, i), xs, lift);
    for (const auto& [k, c] : gi.terms()) {
      if (k >= 0) total += c * c;
    }
    for (std::size_t j = 0; j < n; ++j) {
      const Series dij = x[j] * gi;
      for (const auto& [k, c] : dij.terms()) {
        if (k >= 0) total += c * c;
      }
    }
  }
  return total;
}

std::vector<ArcSearchHit> search_arcs(const Polynomial& f, const ArcSearchConfig& config) {
  const auto deg = f.degree();
  if (!deg || *deg < 2) throw std::invalid_argument("arc search needs deg f >= 2");
  if (config.starts < 1) throw std::invalid_argument("arc search needs at least one start");
  const ArcWindow w = arc_window(static_cast<int>(f.num_vars()), static_cast<int>(*deg));
  const ArcProblem prob(f, w);

  std::vector<std::optional<StartResult>> results(static_cast<std::size_t>(config.starts));
  std::atomic<int> next{0};
  const auto worker = [&]() {
    for (int s = next++; s < config.starts; s = next++) {
      results[static_cast<std::size_t>(s)] = run_start(prob, initial_arc(prob, config.seed, s), config.max_iterations);
    }
  };
  unsigned threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(config.starts));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<ArcSearchHit> hits;
  for (int s = 0; s < config.starts; ++s) {
    const auto& res = *results[static_cast<std::size_t>(s)];
    if (!res.escapes || !(res.residual < config.tol)) continue;
    ArcSearchHit hit;
    hit.start = s;
    hit.window = w;
    hit.residual = res.residual;
    hit.iterations = res.iterations;
    hit.b0_estimate = prob.b0(res.a);
    for (int k = w.k_min; k <= w.k_max; ++k) {
      std::vector<double> v(f.num_vars());
      bool nonzero = false;
      for (std::size_t j = 0; j < v.size(); ++j) {
        v[j] = res.a(static_cast<Eigen::Index>(prob.index(k, j)));
        nonzero = nonzero || v[j] != 0.0;
      }
      if (nonzero) hit.coefficients.emplace(k, std::move(v));
    }
    hits.push_back(std::move(hit));
  }
  return hits;
}

}  // namespace bifinf
