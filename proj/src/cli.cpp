#include "bifinf/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include "bifinf/arc_search.hpp"
#include "bifinf/arcs.hpp"
#include "bifinf/milnor.hpp"
#include "bifinf/report.hpp"
#include "bifinf/tracer.hpp"

namespace bifinf {

SpecError::SpecError(std::size_t position, const std::string& what)
    : std::invalid_argument(what + " at position " + std::to_string(position)), position_(position) {}

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

std::string_view strip(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      parts.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return parts;
}

// Cursor over arc-spec text.
class ArcSpecReader {
 public:
  ArcSpecReader(std::string_view text, std::size_t offset) : text_(text), offset_(offset) {}

  void skip_ws() {
    while (pos_ < text_.size() && is_space(text_[pos_])) ++pos_;
  }
  bool done() {
    skip_ws();
    return pos_ >= text_.size();
  }
  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  std::size_t where() const { return offset_ + pos_; }
  [[noreturn]] void fail(const std::string& what) const { throw SpecError(where(), what); }

  std::string digits() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
    if (start == pos_) fail("expected digits");
    return std::string(text_.substr(start, pos_ - start));
  }

  // [sign] [rational] ['*'] [t ['^' int]]
  std::pair<int, Rational> term() {
    int sign = 1;
    while (peek() == '+' || peek() == '-') {
      if (text_[pos_] == '-') sign = -sign;
      ++pos_;
    }
    Rational coeff(1);
    bool have_coeff = false;
    if (is_digit(peek())) {
      const std::string num = digits();
      std::string den = "1";
      if (peek() == '/') {
        ++pos_;
        den = digits();
      }
      const mpz_class d(den, 10);
      if (d == 0) fail("zero denominator");
      coeff = Rational(mpz_class(num, 10), d);
      coeff.canonicalize();
      have_coeff = true;
    }
    if (peek() == '*') {
      if (!have_coeff) fail("'*' must follow a coefficient");
      ++pos_;
      if (peek() != 't') fail("expected 't' after '*'");
    }
    int k = 0;
    if (peek() == 't') {
      ++pos_;
      k = 1;
      if (peek() == '^') {
        ++pos_;
        int esign = 1;
        if (peek() == '-' || peek() == '+') {
          if (text_[pos_] == '-') esign = -1;
          ++pos_;
        }
        const std::string e = digits();
        if (e.size() > 9) fail("exponent too large");
        k = esign * std::stoi(e);
      }
    } else if (!have_coeff) {
      fail("expected a rational coefficient or 't'");
    }
    return {k, sign * coeff};
  }

 private:
  std::string_view text_;
  std::size_t offset_;
  std::size_t pos_ = 0;
};

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view s = strip(text);
  if (s.empty()) throw SpecError(0, "empty number");
  std::size_t i = 0;
  bool negative = false;
  if (s[0] == '+' || s[0] == '-') {
    negative = s[0] == '-';
    i = 1;
  }
  const std::string_view body = s.substr(i);
  const auto all_digits = [](std::string_view t) {
    return !t.empty() && std::all_of(t.begin(), t.end(), [](char c) { return is_digit(c); });
  };
  Rational out;
  if (const auto slash = body.find('/'); slash != std::string_view::npos) {
    const auto num = body.substr(0, slash);
    const auto den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) throw SpecError(0, "malformed rational '" + std::string(s) + "'");
    const mpz_class d(std::string(den), 10);
    if (d == 0) throw SpecError(i + slash + 1, "zero denominator");
    out = Rational(mpz_class(std::string(num), 10), d);
  } else if (const auto dot = body.find('.'); dot != std::string_view::npos) {
    const auto whole = body.substr(0, dot);
    const auto frac = body.substr(dot + 1);
    if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac)) ||
        (whole.empty() && frac.empty())) {
      throw SpecError(0, "malformed decimal '" + std::string(s) + "'");
    }
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    const std::string digits = std::string(whole.empty() ? "0" : whole) + std::string(frac);
    out = Rational(mpz_class(digits, 10), scale);
  } else {
    if (!all_digits(body)) throw SpecError(0, "malformed number '" + std::string(s) + "'");
    out = Rational(mpz_class(std::string(body), 10));
  }
  out.canonicalize();
  return negative ? Rational(-out) : out;
}

std::vector<Rational> parse_point(std::string_view text, std::size_t n) {
  std::vector<Rational> p;
  for (const auto part : split(text, ',')) p.push_back(parse_rational(part));
  if (p.size() != n) {
    throw std::invalid_argument("point '" + std::string(strip(text)) + "' has " + std::to_string(p.size()) +
                                " coordinates, expected " + std::to_string(n));
  }
  return p;
}

std::vector<std::vector<Rational>> parse_points(std::string_view text, std::size_t n) {
  std::vector<std::vector<Rational>> pts;
  for (const auto part : split(text, ';')) {
    if (strip(part).empty()) continue;
    pts.push_back(parse_point(part, n));
  }
  if (pts.empty()) throw std::invalid_argument("no points given");
  return pts;
}

RationalArc::Coeffs parse_arc_spec(std::string_view text, std::span<const std::string> names) {
  const std::size_t n = names.size();
  std::map<int, std::vector<Rational>> acc;
  std::size_t offset = 0;
  for (const auto entry : split(text, ';')) {
    const std::size_t entry_offset = offset;
    offset += entry.size() + 1;
    if (strip(entry).empty()) continue;
    const auto colon = entry.find(':');
    if (colon == std::string_view::npos) throw SpecError(entry_offset, "expected '<variable>: <terms>'");
    const std::string name(strip(entry.substr(0, colon)));
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw SpecError(entry_offset, "unknown variable '" + name + "'");
    const auto j = static_cast<std::size_t>(it - names.begin());
    ArcSpecReader reader(entry.substr(colon + 1), entry_offset + colon + 1);
    if (reader.done()) reader.fail("variable '" + name + "' has no terms");
    while (!reader.done()) {
      const auto [k, c] = reader.term();
      auto& vec = acc.try_emplace(k, std::vector<Rational>(n, Rational(0))).first->second;
      vec[j] += c;
    }
  }
  RationalArc::Coeffs out;
  for (auto& [k, v] : acc) {
    if (std::any_of(v.begin(), v.end(), [](const Rational& q) { return q != 0; })) out.emplace(k, std::move(v));
  }
  return out;
}

namespace {

struct Options {
  std::string poly;
  std::string vars;
  std::string center;
  std::string centers;
  int num_centers = 3;
  std::uint64_t seed = 1;
  std::string radii;
  double tol = 1e-8;
  double merge_dist = 1e-6;
  double conv_tol = 1e-3;
  double cluster_tol = 1e-3;
  double div_threshold = 1e6;
  double alpha_min = 0.25;
  std::string planar = "exact";
  int grid_nodes = 4096;
  int starts = 0;
  int iterations = 0;
  unsigned threads = 0;
  std::string out;
  std::string format = "json";
  std::string arc;
  std::string pivot;
  bool minors = false;
  int n = 0;
  int d = 0;
};

struct Loaded {
  std::vector<std::string> names;
  Polynomial f;
};

Loaded load(const Options& o) {
  std::vector<std::string> names;
  if (!o.vars.empty()) {
    for (const auto v : split(o.vars, ',')) {
      const auto s = strip(v);
      if (s.empty()) throw std::invalid_argument("empty variable name in --vars");
      names.emplace_back(s);
    }
  } else {
    names = infer_variables(o.poly);
    if (names.empty()) throw std::invalid_argument("cannot infer variables from a constant polynomial; pass --vars");
  }
  Polynomial f = parse(o.poly, names);
  return {std::move(names), std::move(f)};
}

Json envelope(const std::string& kind, const Options& o, const Loaded* in) {
  Json j;
  j["schema"] = "bifinf." + kind + "/1";
  j["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  if (in) {
    j["input"] = {{"polynomial", o.poly}, {"normalized", in->f.to_string(in->names)}, {"vars", in->names}};
  }
  return j;
}

TracerConfig tracer_config(const Options& o, const CLI::App& sub) {
  TracerConfig c;
  c.seed = o.seed;
  c.tol = o.tol;
  c.merge_dist = o.merge_dist;
  c.conv_tol = o.conv_tol;
  c.cluster_tol = o.cluster_tol;
  c.div_threshold = o.div_threshold;
  c.alpha_min = o.alpha_min;
  c.grid_nodes = o.grid_nodes;
  c.threads = o.threads;
  if (sub.count("--starts")) c.starts = o.starts;
  if (sub.count("--iterations")) c.newton_iterations = o.iterations;
  if (o.planar == "exact") {
    c.planar = PlanarMethod::exact;
  } else if (o.planar == "scan") {
    c.planar = PlanarMethod::angle_scan;
  } else {
    throw std::invalid_argument("--planar must be 'exact' or 'scan'");
  }
  if (!o.radii.empty()) {
    const auto parts = split(o.radii, ':');
    if (parts.size() != 3) throw std::invalid_argument("--radii expects R0:factor:count");
    try {
      c.r0 = std::stod(std::string(parts[0]));
      c.factor = std::stod(std::string(parts[1]));
      c.count = std::stoi(std::string(parts[2]));
    } catch (const std::logic_error&) {
      throw std::invalid_argument("--radii expects numbers R0:factor:count");
    }
  }
  c.validate();
  return c;
}

struct CenterChoice {
  std::vector<std::vector<Rational>> centers;
  Json selection;
};

CenterChoice choose_centers(const Options& o, const Loaded& in, const TracerConfig& cfg, int default_count) {
  const std::size_t n = in.names.size();
  CenterChoice out;
  if (!o.center.empty() && !o.centers.empty()) throw std::invalid_argument("use either --center or --centers");
  if (!o.center.empty()) {
    out.centers.push_back(parse_point(o.center, n));
    out.selection = {{"method", "explicit"}};
    return out;
  }
  if (!o.centers.empty()) {
    out.centers = parse_points(o.centers, n);
    out.selection = {{"method", "explicit"}};
    return out;
  }
  if (default_count < 1) throw std::invalid_argument("--num-centers must be at least 1");
  const CenterScreen screen = sampling_screen(cfg);
  Json picks = Json::array();
  // Each draw uses its own derived seed so adding centers never changes earlier ones.
  for (std::uint64_t k = 0; static_cast<int>(out.centers.size()) < default_count; ++k) {
    if (k > static_cast<std::uint64_t>(default_count) + 16) throw std::invalid_argument("could not draw distinct centers");
    const CenterPick pick = pick_generic_center(in.f, o.seed * 1000003ULL + k, screen);
    if (std::find(out.centers.begin(), out.centers.end(), pick.center) != out.centers.end()) continue;
    picks.push_back({{"center", rationals_json(pick.center)}, {"attempts", pick.attempts}, {"rejected", pick.rejected}});
    out.centers.push_back(pick.center);
  }
  out.selection = {{"method", "drawn"}, {"picks", std::move(picks)}};
  return out;
}

struct Output {
  std::string text;
  int code = 0;
};

void require_format(const Options& o, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed) {
    if (o.format == a) return;
  }
  std::string list;
  for (const char* a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
  throw std::invalid_argument("--format must be one of: " + list);
}

Output cmd_analyze(const Options& o, const CLI::App& sub, bool trace_mode) {
  require_format(o, {"json", "csv"});
  const Loaded in = load(o);
  if (in.names.size() < 2) throw std::invalid_argument("analysis needs at least 2 variables (n >= 2)");
  const TracerConfig cfg = tracer_config(o, sub);
  const CenterChoice cc = choose_centers(o, in, cfg, trace_mode ? 1 : o.num_centers);
  if (trace_mode && cc.centers.size() != 1) throw std::invalid_argument("trace takes exactly one center");
  const bool csv = o.format == "csv";

  Json j = envelope(trace_mode ? "trace" : "analysis", o, &in);
  j["config"] = config_json(cfg);
  j["center_selection"] = cc.selection;
  Output res;
  if (cc.centers.size() == 1) {
    const AnalysisReport rep = s_a_estimate(in.f, cc.centers.front(), cfg);
    res.code = rep.status == AnalysisStatus::degenerate ? 2 : 0;
    if (csv) {
      res.text = traces_csv(rep);
      return res;
    }
    Json r;
    r["mode"] = "single_center";
    Json limits = Json::array();
    for (const auto& lv : rep.limits.limit_values) limits.push_back(limit_json(lv));
    r["limit_values"] = std::move(limits);
    r["s_a"] = analysis_json(rep, in.names, trace_mode);
    j["result"] = std::move(r);
  } else {
    const SInfinityReport rep = s_infinity_estimate(in.f, cc.centers, cfg);
    res.code = rep.any_usable ? 0 : 2;
    if (csv) {
      for (std::size_t k = 0; k < rep.per_center.size(); ++k) {
        res.text += traces_csv(rep.per_center[k], static_cast<int>(k), k == 0);
      }
      return res;
    }
    Json r;
    r["mode"] = "multi_center";
    Json limits = Json::array();
    for (const auto& lv : rep.intersection) {
      limits.push_back({{"value", number_json(lv.value)}, {"uncertainty", number_json(lv.uncertainty)}});
    }
    r["limit_values"] = std::move(limits);
    r["s_infinity"] = s_infinity_json(rep, in.names, trace_mode);
    j["result"] = std::move(r);
  }
  res.text = dump(j);
  return res;
}

Output cmd_milnor(const Options& o) {
  require_format(o, {"json", "text"});
  const Loaded in = load(o);
  const std::size_t n = in.names.size();
  if (n < 2) throw std::invalid_argument("Milnor sets need at least 2 variables");
  const std::vector<Rational> center = o.center.empty() ? std::vector<Rational>(n, Rational(0)) : parse_point(o.center, n);
  MilnorMode mode;
  if (o.minors) {
    if (!o.pivot.empty()) throw std::invalid_argument("--pivot and --minors are exclusive");
    mode = MilnorMode::minors();
  } else if (!o.pivot.empty()) {
    const auto it = std::find(in.names.begin(), in.names.end(), o.pivot);
    if (it == in.names.end()) throw std::invalid_argument("--pivot names no variable: " + o.pivot);
    mode = MilnorMode::pivot_on(static_cast<std::size_t>(it - in.names.begin()));
  } else {
    mode = MilnorMode::pivot_on(default_pivot(in.f));
  }
  const std::vector<Polynomial> source{in.f};
  const MilnorSystem sys = milnor_equations(source, center, mode);
  Output res;
  if (o.format == "text") {
    for (const auto& e : sys.equations) res.text += e.to_string(in.names) + "\n";
    return res;
  }
  Json j = envelope("milnor", o, &in);
  j["result"] = milnor_json(sys, in.names);
  res.text = dump(j);
  return res;
}

Output cmd_arc_check(const Options& o) {
  require_format(o, {"json"});
  const Loaded in = load(o);
  const auto coeffs = parse_arc_spec(o.arc, in.names);
  const ArcWindow w = membership_window(in.f);
  int lo = w.k_min;
  int hi = w.k_max;
  for (const auto& [k, a] : coeffs) {
    lo = std::min(lo, k);
    hi = std::max(hi, k);
  }
  const RationalArc xi(in.names.size(), coeffs, {lo, hi});
  const ArcMembershipReport rep = check_membership(in.f, xi);
  Json j = envelope("arc-check", o, &in);
  j["arc"] = o.arc;
  j["window"] = {{"k_min", w.k_min}, {"k_max", w.k_max}};
  j["result"] = membership_json(rep);
  return {dump(j), 0};
}

Output cmd_arc_search(const Options& o, const CLI::App& sub) {
  require_format(o, {"json"});
  const Loaded in = load(o);
  if (in.names.size() < 2) throw std::invalid_argument("arc search needs at least 2 variables");
  ArcSearchConfig cfg;
  cfg.seed = o.seed;
  cfg.threads = o.threads;
  if (sub.count("--starts")) cfg.starts = o.starts;
  if (sub.count("--iterations")) cfg.max_iterations = o.iterations;
  if (sub.count("--tol")) cfg.tol = o.tol;
  if (cfg.starts < 1 || cfg.max_iterations < 1 || !(cfg.tol > 0.0)) {
    throw std::invalid_argument("starts, iterations and tol must be positive");
  }
  const auto hits = search_arcs(in.f, cfg);
  Json j = envelope("arc-search", o, &in);
  j["config"] = config_json(cfg);
  const ArcWindow w = arc_window(static_cast<int>(in.names.size()), static_cast<int>(*in.f.degree()));
  Json r;
  r["window"] = {{"k_min", w.k_min}, {"k_max", w.k_max}};
  r["hit_count"] = hits.size();
  r["complete"] = false;
  Json arr = Json::array();
  for (const auto& h : hits) arr.push_back(arc_hit_json(h));
  r["hits"] = std::move(arr);
  j["result"] = std::move(r);
  return {dump(j), 0};
}

Output cmd_dims(const Options& o) {
  require_format(o, {"json"});
  const ArcDimensions dm = dims(o.n, o.d);
  Json j = envelope("dims", o, nullptr);
  j["n"] = o.n;
  j["d"] = o.d;
  j["arc"] = integer_json(dm.arc);
  j["av"] = integer_json(dm.av);
  return {dump(j), 0};
}

Output cmd_constraints(const Options& o) {
  require_format(o, {"json", "text"});
  const Loaded in = load(o);
  if (in.names.size() < 2) throw std::invalid_argument("arc constraints need at least 2 variables");
  const ConstraintSystem sys = emit_constraints(in.f);
  if (o.format == "text") return {sys.to_text(), 0};
  Json j = envelope("constraints", o, &in);
  j["result"] = constraints_json(sys);
  return {dump(j), 0};
}

void add_poly(CLI::App* sub, Options& o) {
  sub->add_option("poly", o.poly, "Polynomial, e.g. \"x + x^2*y\"")->required();
  sub->add_option("--vars", o.vars, "Comma-separated variable order (default: inferred, natural sort)");
}

void add_output(CLI::App* sub, Options& o, const std::string& formats) {
  sub->add_option("--out", o.out, "Write the output to this file instead of stdout");
  sub->add_option("--format", o.format, "Output format: " + formats);
}

void add_tracer(CLI::App* sub, Options& o) {
  sub->add_option("--center", o.center, "Center a as comma-separated rationals, e.g. 0,1/2");
  sub->add_option("--seed", o.seed, "Seed for center draws and multistart solving");
  sub->add_option("--radii", o.radii, "Radius schedule R0:factor:count (default 10:2:10)");
  sub->add_option("--tol", o.tol, "Relative residual tolerance of slice points");
  sub->add_option("--merge-dist", o.merge_dist, "Merge distance for slice points, relative to R");
  sub->add_option("--conv-tol", o.conv_tol, "Convergence tolerance |f(R_last) - t0|");
  sub->add_option("--cluster-tol", o.cluster_tol, "Clustering tolerance for limit values");
  sub->add_option("--div-threshold", o.div_threshold, "Divergence threshold on |f|");
  sub->add_option("--alpha-min", o.alpha_min, "Smallest accepted decay exponent");
  sub->add_option("--planar", o.planar, "n = 2 slice solver: exact or scan");
  sub->add_option("--grid-nodes", o.grid_nodes, "Angular grid size of the scan solver");
  sub->add_option("--starts", o.starts, "Newton starts per radius for n >= 3");
  sub->add_option("--iterations", o.iterations, "Newton iterations per start for n >= 3");
  sub->add_option("--threads", o.threads, "Worker threads (0 = hardware concurrency)");
}

void write_output(const Options& o, const std::string& text, std::ostream& out) {
  if (o.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(o.out, std::ios::binary);
  if (!file) throw std::invalid_argument("cannot open output file " + o.out);
  file << text;
  if (!file) throw std::invalid_argument("failed writing " + o.out);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bifurcation values at infinity: Milnor-set tracing and arc-space tools", "bifinf"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));
  Options o;
  std::function<Output()> action;

  auto* analyze = app.add_subcommand("analyze", "Estimate S_a(f) for one center or S_inf(f) across several");
  add_poly(analyze, o);
  add_tracer(analyze, o);
  analyze->add_option("--centers", o.centers, "Semicolon-separated centers, e.g. \"0,0;0,1\"");
  analyze->add_option("--num-centers", o.num_centers, "Number of generic centers to draw (default 3)");
  add_output(analyze, o, "json|csv");
  analyze->callback([&] { action = [&] { return cmd_analyze(o, *analyze, false); }; });

  auto* trace = app.add_subcommand("trace", "Trace branches of M_a(f) at infinity with per-radius samples");
  add_poly(trace, o);
  add_tracer(trace, o);
  add_output(trace, o, "json|csv");
  trace->callback([&] { action = [&] { return cmd_analyze(o, *trace, true); }; });

  auto* milnor = app.add_subcommand("milnor", "Print the Milnor-set equations for a center");
  add_poly(milnor, o);
  milnor->add_option("--center", o.center, "Center a (default: origin)");
  milnor->add_option("--pivot", o.pivot, "Pivot variable name (default: largest partial degree)");
  milnor->add_flag("--minors", o.minors, "Use all 2x2 minors instead of a pivot chart");
  add_output(milnor, o, "json|text");
  milnor->callback([&] { action = [&] { return cmd_milnor(o); }; });

  auto* check = app.add_subcommand("arc-check", "Exact membership test of a rational arc");
  add_poly(check, o);
  check->add_option("arc", o.arc, "Arc, e.g. \"x: 1/2 t^-1; y: -1 t^1\"")->required();
  add_output(check, o, "json");
  check->callback([&] { action = [&] { return cmd_arc_check(o); }; });

  auto* search = app.add_subcommand("arc-search", "Numerical search for arcs satisfying the vanishing conditions");
  add_poly(search, o);
  search->add_option("--seed", o.seed, "Seed of the multistart");
  search->add_option("--starts", o.starts, "Number of starts (default 64)");
  search->add_option("--iterations", o.iterations, "Levenberg-Marquardt iterations per start (default 400)");
  search->add_option("--tol", o.tol, "Acceptance threshold on the squared violation (default 1e-8)");
  search->add_option("--threads", o.threads, "Worker threads (0 = hardware concurrency)");
  add_output(search, o, "json");
  search->callback([&] { action = [&] { return cmd_arc_search(o, *search); }; });

  auto* dm = app.add_subcommand("dims", "Dimensions of the reduced and the full arc spaces");
  dm->add_option("n", o.n, "Number of variables")->required();
  dm->add_option("d", o.d, "Degree")->required();
  add_output(dm, o, "json");
  dm->callback([&] { action = [&] { return cmd_dims(o); }; });

  auto* cons = app.add_subcommand("constraints", "Export the coefficient equations of the arc conditions");
  add_poly(cons, o);
  add_output(cons, o, "json|text");
  cons->callback([&] { action = [&] { return cmd_constraints(o); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    const Output res = action();
    write_output(o, res.text, out);
    if (res.code == 2) err << "warning: every analyzed center gave a degenerate Milnor system\n";
    return res.code;
  } catch (const ParseError& e) {
    err << "error: polynomial parse error: " << e.what() << '\n';
  } catch (const CenterSelectionError& e) {
    err << "error: " << e.what() << '\n';
    for (const auto& d : e.diagnostics()) err << "  rejected " << d << '\n';
    err << "  pass an explicit --center\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return 1;
}

}  // namespace bifinf
