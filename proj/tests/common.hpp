#pragma once

#include <random>
#include <string>
#include <vector>

#include "bifinf/poly.hpp"

namespace testing_support {

inline const std::vector<std::string> xy{"x", "y"};
inline const std::vector<std::string> xyz{"x", "y", "z"};

inline bifinf::Polynomial P(const std::string& s, const std::vector<std::string>& names = xy) {
  return bifinf::parse(s, names);
}

inline bifinf::Rational small_rational(std::mt19937_64& rng, long range = 9, long max_den = 5) {
  const long num = static_cast<long>(rng() % static_cast<unsigned long>(2 * range + 1)) - range;
  const long den = static_cast<long>(rng() % static_cast<unsigned long>(max_den)) + 1;
  bifinf::Rational q(num, den);
  q.canonicalize();
  return q;
}

inline bifinf::Polynomial random_poly(std::mt19937_64& rng, std::size_t n, unsigned max_deg, int terms) {
  bifinf::Polynomial p(n);
  for (int t = 0; t < terms; ++t) {
    bifinf::Exponents e(n, 0);
    unsigned budget = static_cast<unsigned>(rng() % (max_deg + 1));
    for (std::size_t i = 0; i < n && budget > 0; ++i) {
      const unsigned k = static_cast<unsigned>(rng() % (budget + 1));
      e[i] = k;
      budget -= k;
    }
    p.add_term(e, small_rational(rng));
  }
  return p;
}

}  // namespace testing_support
