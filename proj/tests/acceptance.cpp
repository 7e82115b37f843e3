// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.
#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bifinf/arcs.hpp"
#include "bifinf/cli.hpp"
#include "bifinf/milnor.hpp"
#include "bifinf/poly.hpp"
#include "bifinf/tracer.hpp"

using namespace bifinf;
using Json = nlohmann::json;
using big = boost::multiprecision::cpp_int;

namespace {

const std::vector<std::string> kXY{"x", "y"};
const std::vector<std::string> kXYZ{"x", "y", "z"};
const char* kCubic = "x + x^2*y";
const char* kTwoCenter = "y*(x^2*y^2 + 3*x*y + 3)";
const char* kNq = "x - 3*x^3*y^2 + 2*x^4*y^3 + y*z";

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::pair<int, std::string> cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str()};
}

Rational small_rational(std::mt19937_64& rng, long range = 9, long den = 7) {
  Rational q(static_cast<long>(rng() % static_cast<unsigned long>(2 * range + 1)) - range,
             1 + static_cast<long>(rng() % static_cast<unsigned long>(den)));
  q.canonicalize();
  return q;
}

// Monitors collected from criteria 1 and 2 for criterion 6.
std::vector<MalgrangeMonitor> g_monitors;
int g_monitor_sources = 0;

Outcome ac1() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto [code, text] = cli({"analyze", kCubic, "--vars", "x,y", "--seed", "1"});
  const double dt = seconds_since(t0);
  if (code != 0) return {false, "analyze exited with " + std::to_string(code)};
  const Json j = Json::parse(text);
  const Json& r = j["result"];
  bool ok = r["mode"] == "multi_center" && r["s_infinity"]["per_center"].size() == 3;
  ok = ok && r["limit_values"].size() == 1 && std::abs(r["limit_values"][0]["value"].get<double>()) < 1e-3;
  for (const auto& c : r["s_infinity"]["per_center"]) {
    ok = ok && c["status"] == "ok" && c["limit_values"].size() == 1;
    for (const auto& lv : c["limit_values"]) ok = ok && std::abs(lv["value"].get<double>()) < 1e-3;
    ok = ok && c["divergent_count"].get<int>() > 0 && c["bound_cap"] == 2 && c["bound_respected"] == true;
    for (const auto& m : c["malgrange_monitor"]["branches"]) {
      g_monitors.push_back({m["branch_id"].get<int>(), m["first"].get<double>(), m["last"].get<double>(),
                            m["min"].get<double>(), m["pass"].get<bool>(), m["dips"].get<bool>()});
    }
    ++g_monitor_sources;
  }
  ok = ok && dt < 5.0;
  std::ostringstream d;
  d << "3 drawn centers, S_inf estimate = {";
  if (!r["limit_values"].empty()) d << r["limit_values"][0]["value"].get<double>();
  d << "}, bound_cap 2 respected, " << dt << " s (limit 5 s)";
  return {ok, d.str()};
}

Outcome ac2() {
  const auto f = parse(kTwoCenter, kXY);
  const TracerConfig c;
  const auto t0 = std::chrono::steady_clock::now();
  const auto r0 = s_a_estimate(f, std::vector<Rational>{0, 0}, c);
  const auto r1 = s_a_estimate(f, std::vector<Rational>{0, 1}, c);
  const double dt = seconds_since(t0);
  for (const auto* r : {&r0, &r1}) {
    g_monitors.insert(g_monitors.end(), r->monitors.begin(), r->monitors.end());
    ++g_monitor_sources;
  }
  const bool ok = r0.status == AnalysisStatus::ok && r0.limits.limit_values.empty() &&
                  r1.status == AnalysisStatus::ok && !r1.limits.limit_values.empty() && dt < 10.0;
  std::ostringstream d;
  d << "center (0,0): " << r0.limits.limit_values.size() << " values; center (0,1): "
    << r1.limits.limit_values.size() << " values";
  if (!r1.limits.limit_values.empty()) d << " (first " << r1.limits.limit_values[0].value << ")";
  d << "; " << dt << " s (limit 10 s)";
  return {ok, d.str()};
}

Outcome ac3() {
  const RationalArc xi(2, {{-1, {Rational(1, 2), 0}}, {1, {0, -1}}}, {-6, 3});
  const auto r = check_membership(parse(kCubic, kXY), xi);
  const bool ok = r.cond_b && r.cond_c && r.cond_d && r.b0 && *r.b0 == 0 && r.sphere_sum == 1;
  return {ok, "xi = ((1/2) t^-1, -t): b, c, d hold, b0 = " + (r.b0 ? r.b0->get_str() : std::string("undefined")) +
                  ", sphere sum = " + r.sphere_sum.get_str()};
}

Outcome ac4() {
  int checked = 0;
  for (int n = 2; n <= 5; ++n) {
    for (int d = 2; d <= 5; ++d) {
      big dn = 1, d1n = 1;
      for (int i = 0; i < n; ++i) {
        dn *= d;
        d1n *= d + 1;
      }
      big tail = 1;
      for (int i = 0; i < n - 1; ++i) tail *= dn + 2;
      const big arc = n * (1 + dn);
      const big av = n * (2 + d * d1n * tail);
      const auto got = dims(n, d);
      if (got.arc.get_str() != arc.str() || got.av.get_str() != av.str() || !(got.arc < got.av)) {
        return {false, "mismatch at n=" + std::to_string(n) + ", d=" + std::to_string(d)};
      }
      ++checked;
    }
  }
  return {true, std::to_string(checked) + " (n, d) pairs match the big-integer oracle; dim_arc < dim_av throughout"};
}

Outcome ac5() {
  const auto t0 = std::chrono::steady_clock::now();
  const int depth = 2 * (3 - 1) * 3;  // 2 (d-1) d^(n-1)
  // Branch y = -t of y + 2xy^2 - x^3 = 0: x = 1/(2t) + x^3/(2t^2), i.e. x ~ -1/(2y).
  LaurentScalar x = LaurentScalar::monomial(-1, Rational(1, 2));
  for (int it = 0; it < depth; ++it) {
    x = (LaurentScalar::monomial(-1, Rational(1, 2)) + x * x * x * LaurentScalar::monomial(-2, Rational(1, 2)))
            .truncated_below(-depth);
  }
  const std::vector<LaurentScalar> comps{x, LaurentScalar::monomial(1, -1)};
  const auto deep = RationalArc::from_components(comps, {-depth, 1});
  const auto f = parse(kCubic, kXY);
  const auto on_set = compose_arc(parse("y + 2*x*y^2 - x^3", kXY), deep);
  const bool solved = !on_set.max_exponent() || *on_set.max_exponent() <= -depth + 1;
  const auto full = evaluate_arc_conditions(f, deep);
  const auto cut = check_membership(f, truncate(deep, arc_window(2, 3)));
  const double dt = seconds_since(t0);
  const bool ok = solved && full.cond_b == cut.cond_b && full.cond_c == cut.cond_c && full.cond_d == cut.cond_d &&
                  full.b0 == cut.b0 && dt < 1.0;
  std::ostringstream d;
  d << "depth t^-" << depth << " vs window (-6, 3): flags (" << cut.cond_b << cut.cond_c << cut.cond_d
    << ") and b0 = " << (cut.b0 ? cut.b0->get_str() : "undefined") << " unchanged; " << dt << " s";
  return {ok, d.str()};
}

Outcome ac6() {
  int bad = 0;
  for (const auto& m : g_monitors) {
    if (!(m.last < 0.1 * m.first) || !(m.min < m.first / 2) || !m.pass) ++bad;
  }
  const bool ok = g_monitor_sources == 5 && !g_monitors.empty() && bad == 0;
  return {ok, std::to_string(g_monitors.size()) + " convergent branches over " + std::to_string(g_monitor_sources) +
                  " runs, " + std::to_string(bad) + " without a tenfold decrease of |x| nu(Df(x))"};
}

Outcome ac7() {
  std::mt19937_64 rng(2024);
  const std::vector<std::pair<const char*, const std::vector<std::string>*>> corpus{
      {kCubic, &kXY}, {kTwoCenter, &kXY}, {kNq, &kXYZ}};
  long mismatches = 0, on_set = 0, total = 0;
  for (const auto& [text, names] : corpus) {
    const auto f = parse(text, *names);
    const std::size_t n = names->size();
    const auto grad = gradient(f);
    const std::size_t piv = default_pivot(f);
    const std::vector<Polynomial> src{f};
    int done = 0;
    while (done < 1000) {
      std::vector<Rational> x(n), a(n);
      for (auto& v : x) v = small_rational(rng);
      std::vector<Rational> g(n);
      for (std::size_t j = 0; j < n; ++j) g[j] = eval(grad[j], std::span<const Rational>(x));
      if (g[piv] == 0) continue;
      if (done % 2 == 0) {
        const Rational mu = small_rational(rng);
        for (std::size_t j = 0; j < n; ++j) a[j] = x[j] - mu * g[j];
      } else {
        for (auto& v : a) v = small_rational(rng);
      }
      const auto ps = milnor_equations(src, a, MilnorMode::pivot_on(piv));
      const auto ms = milnor_equations(src, a, MilnorMode::minors());
      bool pv = true, mv = true;
      for (const auto& e : ps.equations) pv = pv && eval(e, std::span<const Rational>(x)) == 0;
      for (const auto& e : ms.equations) mv = mv && eval(e, std::span<const Rational>(x)) == 0;
      mismatches += pv != mv;
      on_set += pv;
      ++done;
      ++total;
    }
  }
  return {mismatches == 0 && on_set > 0, std::to_string(total) + " exact points over 3 polynomials (" +
                                             std::to_string(on_set) + " on the Milnor set), " +
                                             std::to_string(mismatches) + " mismatches"};
}

Outcome ac8() {
  std::mt19937_64 rng(77);
  const std::vector<Polynomial> polys{parse(kCubic, kXY), parse(kTwoCenter, kXY), parse("x^2 - y^3", kXY)};
  int mismatches = 0, members = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto& f = polys[static_cast<std::size_t>(trial) % polys.size()];
    const auto w = membership_window(f);
    RationalArc::Coeffs c;
    if (trial % 4 == 0) {
      // Leading term of the branch x ~ -1/(2y): x = u t^-1, y = -t/(2u).
      const Rational u = trial % 8 == 0 ? Rational(1, 2) : Rational(1, 3);
      c[-1] = {u, 0};
      c[1] = {0, Rational(-1) / (2 * u)};
    } else {
      for (int k = w.k_min; k <= w.k_max; ++k) {
        if (rng() % 3 != 0) continue;
        c[k] = {small_rational(rng), small_rational(rng)};
      }
      c[1 + static_cast<int>(rng() % static_cast<unsigned>(w.k_max))] = {small_rational(rng), 1};
    }
    const RationalArc xi(2, c, {w.k_min, w.k_max});
    Rational lambda = small_rational(rng);
    if (lambda == 0) lambda = Rational(-5, 3);
    const auto a = check_membership(f, xi);
    const auto b = evaluate_arc_conditions(f, xi.reparametrized(lambda));
    mismatches += a.cond_b != b.cond_b || a.cond_c != b.cond_c || a.cond_d != b.cond_d || a.b0 != b.b0;
    members += a.cond_b && a.cond_c && a.cond_d;
  }
  return {mismatches == 0, "100 arcs (" + std::to_string(members) + " satisfying b, c, d), " +
                               std::to_string(mismatches) + " changes under t -> lambda t"};
}

Outcome ac9() {
  const std::vector<std::vector<std::string>> commands{
      {"analyze", kCubic, "--vars", "x,y", "--seed", "7"},
      {"analyze", kTwoCenter, "--vars", "x,y", "--centers", "0,0;0,1"},
      {"trace", kCubic, "--vars", "x,y", "--center", "1/2,-3"},
      {"trace", kCubic, "--vars", "x,y", "--center", "0,0", "--format", "csv"},
      {"milnor", kCubic, "--vars", "x,y", "--center", "0,0"},
      {"arc-check", kCubic, "x: 1/2 t^-1; y: -1 t^1", "--vars", "x,y"},
      {"arc-search", kCubic, "--vars", "x,y", "--seed", "3", "--starts", "16"},
      {"dims", "3", "4"},
      {"constraints", kCubic, "--vars", "x,y"},
  };
  int differing = 0;
  for (const auto& args : commands) {
    const auto a = cli(args);
    const auto b = cli(args);
    if (a.first != 0 || a != b) ++differing;
  }
  return {differing == 0, std::to_string(commands.size()) + " commands run twice, " + std::to_string(differing) +
                              " with differing bytes or a failing exit code"};
}

Outcome ac10() {
  const auto f = parse(kNq, kXYZ);
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = s_a_estimate(f, std::vector<Rational>{0, 0, 0}, TracerConfig{});
  const double dt = seconds_since(t0);
  const bool ok = r.status == AnalysisStatus::ok && r.limits.limit_values.empty() && !r.certified;
  std::ostringstream d;
  d << "f_nq at a = 0: " << r.limits.limit_values.size() << " limit values, certified = " << std::boolalpha
    << r.certified << " (" << r.branches.size() << " traced branches, " << dt << " s)."
    << " Not reproduced here: exact computation of K_inf(f), completeness of the Arc_inf(f) enumeration,"
    << " and the real Malgrange classification of f_nq; the property checks above stand in for them";
  return {ok, d.str()};
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria{ac1, ac2, ac3, ac4, ac5, ac6, ac7, ac8, ac9, ac10};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << "AC" << (i + 1) << (o.pass ? " PASS: " : " FAIL: ") << o.detail << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
