#include <doctest.h>

#include <cmath>

#include "bifinf/arc_search.hpp"
#include "common.hpp"

using namespace bifinf;
using testing_support::P;

namespace {

ArcSearchConfig quick(std::uint64_t seed = 1) {
  ArcSearchConfig c;
  c.seed = seed;
  c.starts = 24;
  return c;
}

}  // namespace

TEST_CASE("search finds arcs with vanishing b0 for x + x^2 y") {
  const auto f = P("x + x^2*y");
  const auto hits = search_arcs(f, quick());
  REQUIRE_FALSE(hits.empty());
  for (const auto& h : hits) {
    CHECK(h.residual < 1e-8);
    CHECK(std::abs(h.b0_estimate) < 1e-4);
    CHECK(h.window.k_min == -6);
    CHECK(h.window.k_max == 3);
    // The reported residual is the violation of the stored coefficients.
    CHECK(arc_violation(f, h.coefficients) == doctest::Approx(h.residual).epsilon(1e-6).scale(1e-12));
    double sphere = 0;
    bool escapes = false;
    for (const auto& [k, a] : h.coefficients) {
      if (k <= 0) continue;
      for (double v : a) {
        sphere += v * v;
        escapes = escapes || v != 0;
      }
    }
    CHECK(escapes);
    CHECK(sphere > 0);
  }
}

TEST_CASE("no asymptotic critical arcs for a proper map") {
  CHECK(search_arcs(P("x^2 + y^2"), quick()).empty());
}

TEST_CASE("search is deterministic in the seed") {
  const auto f = P("x + x^2*y");
  const auto a = search_arcs(f, quick(5));
  auto one = quick(5);
  one.threads = 1;
  const auto b = search_arcs(f, one);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].start == b[i].start);
    CHECK(a[i].coefficients == b[i].coefficients);
    CHECK(a[i].residual == b[i].residual);
  }
}

TEST_CASE("arc_violation is zero on an exact member") {
  const std::map<int, std::vector<double>> w{{-1, {0.5, 0.0}}, {1, {0.0, -1.0}}};
  CHECK(arc_violation(P("x + x^2*y"), w) == doctest::Approx(0.0).scale(1e-15));
  const std::map<int, std::vector<double>> line{{1, {1.0, 0.0}}};
  CHECK(arc_violation(P("x + x^2*y"), line) > 0.5);
}

TEST_CASE("search preconditions") {
  CHECK_THROWS_AS(search_arcs(P("x + y"), quick()), std::invalid_argument);
  auto bad = quick();
  bad.starts = 0;
  CHECK_THROWS_AS(search_arcs(P("x + x^2*y"), bad), std::invalid_argument);
}
