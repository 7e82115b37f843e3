#include "bifinf/milnor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bifinf {

namespace {

// Determinant by cofactor expansion along the first row; matrices here are at
// most (p+1) x (p+1) with small p.
Polynomial determinant(const std::vector<std::vector<Polynomial>>& m) {
  const std::size_t k = m.size();
  if (k == 1) return m[0][0];
  Polynomial det(m[0][0].num_vars());
  for (std::size_t col = 0; col < k; ++col) {
    if (m[0][col].is_zero()) continue;
    std::vector<std::vector<Polynomial>> minor;
    minor.reserve(k - 1);
    for (std::size_t r = 1; r < k; ++r) {
      std::vector<Polynomial> row;
      row.reserve(k - 1);
      for (std::size_t c = 0; c < k; ++c) {
        if (c != col) row.push_back(m[r][c]);
      }
      minor.push_back(std::move(row));
    }
    Polynomial term = m[0][col] * determinant(minor);
    if (col % 2 == 0) {
      det += term;
    } else {
      det -= term;
    }
  }
  return det;
}

// All size-k subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<std::size_t>> combinations(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  for (;;) {
    out.push_back(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

}  // namespace

bool MilnorSystem::degenerate() const {
  if (mode.kind == MilnorMode::Kind::pivot) {
    return std::any_of(equations.begin(), equations.end(), [](const Polynomial& e) { return e.is_zero(); });
  }
  return std::all_of(equations.begin(), equations.end(), [](const Polynomial& e) { return e.is_zero(); });
}

MilnorSystem milnor_equations(std::span<const Polynomial> f, std::span<const Rational> center, MilnorMode mode) {
  if (f.empty()) throw std::invalid_argument("need at least one component");
  const std::size_t n = f.front().num_vars();
  const std::size_t p = f.size();
  for (const auto& fi : f) {
    if (fi.num_vars() != n) throw std::invalid_argument("components live in different rings");
  }
  if (center.size() != n) throw std::invalid_argument("center dimension differs from variable count");
  if (p >= n) throw std::invalid_argument("Milnor set needs p < n");

  MilnorSystem sys{std::vector<Polynomial>(f.begin(), f.end()), std::vector<Rational>(center.begin(), center.end()),
                   mode, {}};

  std::vector<Polynomial> shifted;
  shifted.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    shifted.push_back(Polynomial::variable(n, j) - Polynomial::constant(n, center[j]));
  }

  if (mode.kind == MilnorMode::Kind::pivot) {
    if (p != 1) throw std::invalid_argument("pivot mode is defined for scalar f only");
    const std::size_t i = mode.pivot;
    if (i >= n) throw std::out_of_range("pivot index out of range");
    const auto grad = gradient(f.front());
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      sys.equations.push_back(grad[i] * shifted[j] - grad[j] * shifted[i]);
    }
    return sys;
  }

  std::vector<std::vector<Polynomial>> rows;
  for (const auto& fi : f) rows.push_back(gradient(fi));
  rows.push_back(shifted);
  for (const auto& cols : combinations(n, p + 1)) {
    std::vector<std::vector<Polynomial>> m;
    for (const auto& row : rows) {
      std::vector<Polynomial> r;
      for (std::size_t c : cols) r.push_back(row[c]);
      m.push_back(std::move(r));
    }
    sys.equations.push_back(determinant(m));
  }
  return sys;
}

std::size_t default_pivot(const Polynomial& f) {
  std::size_t best = 0;
  long best_deg = -1;
  for (std::size_t i = 0; i < f.num_vars(); ++i) {
    const auto d = partial(f, i).degree();
    const long deg = d ? static_cast<long>(*d) : -1;
    if (deg > best_deg) {
      best_deg = deg;
      best = i;
    }
  }
  return best;
}

double rabier_nu(const Eigen::MatrixXd& jacobian) {
  if (jacobian.rows() < 1 || jacobian.rows() > jacobian.cols()) {
    throw std::invalid_argument("rabier_nu expects a p x n matrix with 1 <= p <= n");
  }
  if (!jacobian.allFinite()) throw std::domain_error("rabier_nu: non-finite matrix entry");
  if (jacobian.rows() == 1) return jacobian.row(0).stableNorm();
  const Eigen::MatrixXd gram = jacobian * jacobian.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, eig.eigenvalues()(0)));
}

JacobianEvaluator::JacobianEvaluator(std::span<const Polynomial> f) : rows_(f.size()), cols_(0) {
  if (f.empty()) throw std::invalid_argument("need at least one component");
  cols_ = f.front().num_vars();
  for (const auto& fi : f) {
    if (fi.num_vars() != cols_) throw std::invalid_argument("components live in different rings");
    for (std::size_t j = 0; j < cols_; ++j) partials_.emplace_back(partial(fi, j));
  }
}

Eigen::MatrixXd JacobianEvaluator::operator()(std::span<const double> x) const {
  if (x.size() != cols_) throw std::invalid_argument("point has wrong dimension");
  Eigen::MatrixXd J(rows_, cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) J(r, c) = partials_[r * cols_ + c](x);
  }
  return J;
}

double malgrange_quantity(std::span<const Polynomial> f, std::span<const double> x) {
  for (double v : x) {
    if (!std::isfinite(v)) throw std::domain_error("malgrange_quantity: non-finite point");
  }
  const JacobianEvaluator jac(f);
  const Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
  return xv.stableNorm() * rabier_nu(jac(x));
}

std::vector<Rational> draw_center(std::mt19937_64& rng, std::size_t n) {
  std::vector<Rational> a;
  a.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const long num = static_cast<long>(rng() % 201) - 100;
    const long den = static_cast<long>(rng() % 100) + 1;
    Rational v(num, den);
    v.canonicalize();
    a.push_back(v);
  }
  return a;
}

CenterPick pick_generic_center(const Polynomial& f, std::uint64_t seed, const CenterScreen& screen,
                               int max_attempts) {
  if (f.num_vars() < 2) throw std::invalid_argument("center selection needs n >= 2");
  std::mt19937_64 rng(seed);
  CenterPick pick;
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    auto candidate = draw_center(rng, f.num_vars());
    const auto verdict = screen(f, candidate);
    pick.attempts = attempt;
    if (verdict.pass) {
      pick.center = std::move(candidate);
      return pick;
    }
    std::string label = "(";
    for (std::size_t i = 0; i < candidate.size(); ++i) label += (i ? "," : "") + candidate[i].get_str();
    pick.rejected.push_back(label + "): " + verdict.diagnostic);
  }
  throw CenterSelectionError("no candidate center passed the degeneracy screen after " +
                                 std::to_string(max_attempts) + " attempts",
                             pick.rejected);
}

}  // namespace bifinf
