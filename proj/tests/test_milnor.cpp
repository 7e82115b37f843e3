#include <doctest.h>

#include <Eigen/SVD>

#include <cmath>
#include <random>

#include "bifinf/milnor.hpp"
#include "bifinf/tracer.hpp"
#include "common.hpp"

using namespace bifinf;
using testing_support::P;

namespace {

std::vector<Rational> pt(std::initializer_list<Rational> v) { return std::vector<Rational>(v); }

MilnorSystem pivot_system(const Polynomial& f, const std::vector<Rational>& a, std::size_t pivot) {
  const std::vector<Polynomial> src{f};
  return milnor_equations(src, a, MilnorMode::pivot_on(pivot));
}

}  // namespace

TEST_CASE("pivot equations for x + x^2 y at the origin") {
  const auto sys = pivot_system(P("x + x^2*y"), pt({0, 0}), 0);
  REQUIRE(sys.equations.size() == 1);
  CHECK(sys.equations[0] == P("y + 2*x*y^2 - x^3"));
  CHECK(sys.equations[0].to_string(testing_support::xy) == "y + 2*x*y^2 - x^3");

  // Independent check: evaluate f_x (y - a2) - f_y (x - a1) pointwise by hand.
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    const Rational x = testing_support::small_rational(rng), y = testing_support::small_rational(rng);
    const Rational hand = (1 + 2 * x * y) * y - x * x * x;
    const std::vector<Rational> p{x, y};
    CHECK(eval(sys.equations[0], std::span<const Rational>(p)) == hand);
  }
}

TEST_CASE("pivot equations at a shifted center") {
  const auto sys = pivot_system(P("x + x^2*y"), pt({0, 1}), 0);
  CHECK(sys.equations[0] == P("(1 + 2*x*y)*(y - 1) - x^3"));
}

TEST_CASE("linear f in three variables gives the axis") {
  const auto f = P("x1", {"x1", "x2", "x3"});
  const auto sys = pivot_system(f, pt({0, 0, 0}), 0);
  REQUIRE(sys.equations.size() == 2);
  CHECK(sys.equations[0] == P("x2", {"x1", "x2", "x3"}));
  CHECK(sys.equations[1] == P("x3", {"x1", "x2", "x3"}));
  CHECK_FALSE(sys.degenerate());
}

TEST_CASE("minors mode counts and values") {
  const std::vector<std::string> names{"x1", "x2", "x3"};
  const auto f = P("x1^2*x2 + x3^3 - x1", names);
  const std::vector<Polynomial> src{f};
  const auto a = pt({1, Rational(-1, 2), 2});
  const auto sys = milnor_equations(src, a, MilnorMode::minors());
  CHECK(sys.equations.size() == 3);  // C(3, 2)

  const std::vector<Polynomial> two{f, P("x1 + x2*x3", names)};
  const auto sys2 = milnor_equations(two, a, MilnorMode::minors());
  REQUIRE(sys2.equations.size() == 1);  // C(3, 3)
  // Oracle: floating 3x3 determinant at a random point.
  const std::vector<double> x{0.3, -1.7, 0.9};
  Eigen::Matrix3d M;
  for (int c = 0; c < 3; ++c) {
    M(0, c) = eval(partial(two[0], static_cast<std::size_t>(c)), std::span<const double>(x));
    M(1, c) = eval(partial(two[1], static_cast<std::size_t>(c)), std::span<const double>(x));
    M(2, c) = x[static_cast<std::size_t>(c)] - a[static_cast<std::size_t>(c)].get_d();
  }
  CHECK(eval(sys2.equations[0], std::span<const double>(x)) == doctest::Approx(M.determinant()).epsilon(1e-12));
}

TEST_CASE("milnor_equations preconditions") {
  const auto f = P("x + x^2*y");
  const std::vector<Polynomial> two{f, P("y")};
  CHECK_THROWS_AS(milnor_equations(two, pt({0, 0}), MilnorMode::minors()), std::invalid_argument);
  CHECK_THROWS_AS(pivot_system(f, pt({0, 0}), 2), std::out_of_range);
  CHECK_THROWS_AS(pivot_system(f, pt({0}), 0), std::invalid_argument);
  const std::vector<std::string> names{"x1", "x2", "x3"};
  const std::vector<Polynomial> pair{P("x1", names), P("x2", names)};
  CHECK_THROWS_AS(milnor_equations(pair, pt({0, 0, 0}), MilnorMode::pivot_on(0)), std::invalid_argument);
}

TEST_CASE("radially symmetric f at its center is degenerate") {
  const auto sys = pivot_system(P("x^2 + y^2"), pt({0, 0}), 0);
  CHECK(sys.degenerate());
  CHECK_FALSE(pivot_system(P("x^2 + y^2"), pt({1, 0}), 0).degenerate());
}

TEST_CASE("default pivot is the variable with the largest partial degree") {
  CHECK(default_pivot(P("x + x^2*y")) == 0);  // deg f_x = 3 > deg f_y = 2
  CHECK(default_pivot(P("x + y^3")) == 1);
  CHECK(default_pivot(P("x^2 + y^2")) == 0);  // tie -> lowest index
}

TEST_CASE("rabier_nu examples") {
  Eigen::MatrixXd r1(1, 2);
  r1 << 1, 0;
  CHECK(rabier_nu(r1) == doctest::Approx(1.0));
  Eigen::MatrixXd r2(1, 2);
  r2 << 3, 4;
  CHECK(rabier_nu(r2) == doctest::Approx(5.0));
  Eigen::MatrixXd m(2, 3);
  m << 1, 0, 0, 0, 2, 0;
  CHECK(rabier_nu(m) == doctest::Approx(1.0));
}

TEST_CASE("rabier_nu errors") {
  Eigen::MatrixXd bad(1, 2);
  bad << std::nan(""), 1;
  CHECK_THROWS_AS(rabier_nu(bad), std::domain_error);
  CHECK_THROWS_AS(rabier_nu(Eigen::MatrixXd::Ones(3, 2)), std::invalid_argument);
}

TEST_CASE("rabier_nu against an SVD oracle and its invariants") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> N(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int p = 1 + static_cast<int>(rng() % 3);
    const int n = p + static_cast<int>(rng() % 3);
    Eigen::MatrixXd J(p, n);
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < n; ++j) J(i, j) = N(rng);
    const double nu = rabier_nu(J);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
    CHECK(nu == doctest::Approx(svd.singularValues()(p - 1)).epsilon(1e-9));
    const double c = N(rng);
    CHECK(rabier_nu(c * J) == doctest::Approx(std::abs(c) * nu).epsilon(1e-12));
    for (int i = 0; i < p; ++i) CHECK(nu <= J.row(i).norm() * (1 + 1e-12));
    if (p == 1) CHECK(std::abs(nu - J.row(0).norm()) <= 1e-14 * J.row(0).norm());
  }
}

TEST_CASE("malgrange quantity examples") {
  const std::vector<Polynomial> f{P("x + x^2*y")};
  const std::vector<double> a{0.1, -5.0};
  const double hand = std::hypot(0.1, -5.0) * 0.01;  // grad f = (0, 0.01)
  CHECK(malgrange_quantity(f, a) == doctest::Approx(hand).epsilon(1e-12));
  CHECK(malgrange_quantity(f, a) == doctest::Approx(0.05001).epsilon(1e-4));
  const std::vector<double> b{1.0, 1.0};
  CHECK(malgrange_quantity(f, b) == doctest::Approx(std::sqrt(20.0)));

  const std::vector<std::string> names{"x1", "x2", "x3"};
  const std::vector<Polynomial> lin{P("x1", names)};
  const std::vector<double> c{2.0, 3.0, 6.0};  // norm 7
  CHECK(malgrange_quantity(lin, c) == doctest::Approx(7.0));
  const std::vector<double> inf{INFINITY, 0.0, 0.0};
  CHECK_THROWS_AS(malgrange_quantity(lin, inf), std::domain_error);
}

TEST_CASE("draw_center respects the height bounds") {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 200; ++i) {
    for (const auto& q : draw_center(rng, 3)) {
      CHECK(abs(q.get_num()) <= 100);
      CHECK(q.get_den() >= 1);
      CHECK(q.get_den() <= 100);
    }
  }
}

TEST_CASE("pick_generic_center is deterministic and passes the screen") {
  const auto f = P("x + x^2*y");
  const auto screen = sampling_screen(TracerConfig{});
  const auto a = pick_generic_center(f, 1, screen);
  const auto b = pick_generic_center(f, 1, screen);
  CHECK(a.center == b.center);
  CHECK(screen(f, a.center).pass);
  CHECK(a.center.size() == 2);

  const std::vector<std::string> names{"x1", "x2", "x3"};
  const auto lin = P("x1", names);
  const auto c = pick_generic_center(lin, 7, screen);
  CHECK(c.center.size() == 3);
  CHECK(c.attempts == 1);
}

TEST_CASE("pick_generic_center reports exhausted retries") {
  const CenterScreen never = [](const Polynomial&, std::span<const Rational>) {
    return CenterScreenResult{false, "rejected for the test"};
  };
  try {
    (void)pick_generic_center(P("x + x^2*y"), 1, never, 4);
    FAIL("expected CenterSelectionError");
  } catch (const CenterSelectionError& e) {
    CHECK(e.diagnostics().size() == 4);
  }
  CHECK_THROWS_AS(pick_generic_center(P("x", {"x"}), 1, never), std::invalid_argument);
}

TEST_CASE("the screen rejects degenerate centers") {
  const auto screen = sampling_screen(TracerConfig{});
  CHECK_FALSE(screen(P("x^2 + y^2"), pt({0, 0})).pass);
}

TEST_CASE("pivot and minors vanish together off the pivot-partial zero set") {
  std::mt19937_64 rng(21);
  const auto f = P("y*(x^2*y^2 + 3*x*y + 3)");
  const auto grad = gradient(f);
  int on_set = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::vector<Rational> x{testing_support::small_rational(rng), testing_support::small_rational(rng)};
    std::vector<Rational> a{testing_support::small_rational(rng), testing_support::small_rational(rng)};
    if (trial % 2 == 0) {
      // Place x on M_a: a = x - mu grad f(x).
      const Rational mu = testing_support::small_rational(rng);
      for (std::size_t j = 0; j < 2; ++j) a[j] = x[j] - mu * eval(grad[j], std::span<const Rational>(x));
    }
    const std::size_t piv = default_pivot(f);
    if (eval(grad[piv], std::span<const Rational>(x)) == 0) continue;
    const std::vector<Polynomial> src{f};
    const auto ps = milnor_equations(src, a, MilnorMode::pivot_on(piv));
    const auto ms = milnor_equations(src, a, MilnorMode::minors());
    bool pv = true, mv = true;
    for (const auto& e : ps.equations) pv = pv && eval(e, std::span<const Rational>(x)) == 0;
    for (const auto& e : ms.equations) mv = mv && eval(e, std::span<const Rational>(x)) == 0;
    CHECK(pv == mv);
    on_set += pv ? 1 : 0;
  }
  CHECK(on_set >= 50);
}
