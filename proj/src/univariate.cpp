#include "bifinf/univariate.hpp"

#include <algorithm>
#include <stdexcept>

namespace bifinf::univariate {

void trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

int degree(const Poly& p) { return static_cast<int>(p.size()) - 1; }

Poly derivative(const Poly& p) {
  Poly d;
  for (std::size_t k = 1; k < p.size(); ++k) d.push_back(p[k] * static_cast<long>(k));
  trim(d);
  return d;
}

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
  if (b.empty()) throw std::domain_error("polynomial division by zero");
  Poly r = a;
  trim(r);
  Poly q(r.size() >= b.size() ? r.size() - b.size() + 1 : 0, Rational(0));
  const Rational lead = b.back();
  while (!r.empty() && r.size() >= b.size()) {
    const std::size_t shift = r.size() - b.size();
    const Rational c = r.back() / lead;
    q[shift] = c;
    for (std::size_t k = 0; k < b.size(); ++k) r[shift + k] -= c * b[k];
    r.pop_back();
    trim(r);
  }
  trim(q);
  return {q, r};
}

Poly primitive(const Poly& p) {
  if (p.empty()) return p;
  mpz_class den = 1;
  for (const auto& c : p) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
  mpz_class content = 0;
  for (const auto& c : p) {
    const mpz_class num = c.get_num() * (den / c.get_den());
    mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), num.get_mpz_t());
  }
  Poly out;
  out.reserve(p.size());
  for (const auto& c : p) {
    Rational v = c * Rational(den) / Rational(content);
    v.canonicalize();
    out.push_back(v);
  }
  return out;
}

Poly gcd(Poly a, Poly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = primitive(divmod(a, b).second);
    a = std::move(b);
    b = std::move(r);
  }
  if (a.empty()) return a;
  const Rational lead = a.back();
  for (auto& c : a) c /= lead;
  return a;
}

Poly squarefree(const Poly& p) {
  Poly q = p;
  trim(q);
  if (q.size() <= 1) return q;
  const Poly g = gcd(q, derivative(q));
  return primitive(divmod(q, g).first);
}

Rational eval(const Poly& p, const Rational& x) {
  Rational acc(0);
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

int sign_at(const Poly& p, const Rational& x) { return sgn(eval(p, x)); }

std::vector<Poly> sturm_sequence(const Poly& p) {
  std::vector<Poly> seq;
  Poly a = primitive(p);
  trim(a);
  if (a.empty()) return seq;
  seq.push_back(a);
  Poly b = primitive(derivative(a));
  while (!b.empty()) {
    seq.push_back(b);
    Poly r = divmod(seq[seq.size() - 2], b).second;
    for (auto& c : r) c = -c;
    b = primitive(r);
  }
  return seq;
}

namespace {

int variations(const std::vector<Poly>& seq, const Rational& x) {
  int count = 0;
  int last = 0;
  for (const auto& s : seq) {
    const int v = sign_at(s, x);
    if (v == 0) continue;
    if (last != 0 && v != last) ++count;
    last = v;
  }
  return count;
}

}  // namespace

int count_roots(const std::vector<Poly>& sturm, const Rational& lo, const Rational& hi) {
  return variations(sturm, lo) - variations(sturm, hi);
}

std::vector<RootInterval> isolate_real_roots(const Poly& p) {
  const Poly sf = squarefree(p);
  if (sf.size() <= 1) return {};
  const auto seq = sturm_sequence(sf);

  // Cauchy bound rounded up to a power of two keeps midpoints dyadic.
  Rational bound(0);
  for (std::size_t k = 0; k + 1 < sf.size(); ++k) {
    const Rational r = abs(sf[k] / sf.back());
    if (r > bound) bound = r;
  }
  bound += 1;
  Rational B(1);
  while (B < bound) B *= 2;

  std::vector<RootInterval> out;
  std::vector<RootInterval> stack{{-B, B}};
  while (!stack.empty()) {
    const RootInterval iv = stack.back();
    stack.pop_back();
    const int c = count_roots(seq, iv.lo, iv.hi);
    if (c == 0) continue;
    if (c == 1) {
      if (sign_at(sf, iv.hi) == 0) {
        out.push_back({iv.hi, iv.hi});
      } else {
        out.push_back(iv);
      }
      continue;
    }
    Rational mid = (iv.lo + iv.hi) / 2;
    mid.canonicalize();
    stack.push_back({mid, iv.hi});
    stack.push_back({iv.lo, mid});
  }
  std::sort(out.begin(), out.end(), [](const RootInterval& a, const RootInterval& b) { return a.hi < b.hi; });
  return out;
}

RootInterval refine(const Poly& p, RootInterval iv, const Rational& width) {
  if (iv.lo == iv.hi) return iv;
  const int s_hi = sign_at(p, iv.hi);
  if (s_hi == 0) return {iv.hi, iv.hi};
  while (iv.hi - iv.lo > width) {
    Rational mid = (iv.lo + iv.hi) / 2;
    mid.canonicalize();
    const int s = sign_at(p, mid);
    if (s == 0) return {mid, mid};
    if (s == s_hi) {
      iv.hi = mid;
    } else {
      iv.lo = mid;
    }
  }
  return iv;
}

Poly from_polynomial(const Polynomial& p, std::size_t var) {
  Poly out;
  for (const auto& [e, c] : p.terms()) {
    for (std::size_t j = 0; j < e.size(); ++j) {
      if (j != var && e[j] != 0) throw std::invalid_argument("polynomial is not univariate");
    }
    const std::size_t k = e[var];
    if (out.size() <= k) out.resize(k + 1, Rational(0));
    out[k] += c;
  }
  trim(out);
  return out;
}

}  // namespace bifinf::univariate
