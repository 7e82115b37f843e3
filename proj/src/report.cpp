#include "bifinf/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace bifinf {

namespace {

// Shortest round-trip representation; stable across runs and platforms.
std::string format_double(double v) {
  char buf[32];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

Json fit_json(const std::optional<BranchFit>& fit) {
  if (!fit) return nullptr;
  Json j;
  j["t0"] = number_json(fit->t0);
  j["constant"] = fit->constant;
  j["alpha"] = fit->constant ? Json(nullptr) : number_json(fit->alpha);
  j["c"] = fit->constant ? Json(nullptr) : number_json(fit->c);
  j["rms"] = number_json(fit->rms);
  return j;
}

Json witness_list(const std::vector<ConditionWitness>& ws) {
  Json arr = Json::array();
  for (const auto& w : ws) {
    Json j;
    j["power"] = w.power;
    j["coefficient"] = rational_json(w.coefficient);
    if (w.partial >= 0) j["partial"] = w.partial + 1;
    if (w.multiplier >= 0) j["multiplier"] = w.multiplier + 1;
    arr.push_back(std::move(j));
  }
  return arr;
}

}  // namespace

Json rational_json(const Rational& q) { return q.get_str(); }

Json rationals_json(std::span<const Rational> v) {
  Json arr = Json::array();
  for (const auto& q : v) arr.push_back(rational_json(q));
  return arr;
}

Json number_json(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

Json integer_json(const mpz_class& z) {
  if (z.fits_slong_p()) return static_cast<std::int64_t>(z.get_si());
  return z.get_str();
}

Json config_json(const TracerConfig& c) {
  Json j;
  j["seed"] = c.seed;
  j["tol"] = c.tol;
  j["merge_dist"] = c.merge_dist;
  j["conv_tol"] = c.conv_tol;
  j["cluster_tol"] = c.cluster_tol;
  j["div_threshold"] = c.div_threshold;
  j["alpha_min"] = c.alpha_min;
  j["radii"] = {{"r0", c.r0}, {"factor", c.factor}, {"count", c.count}};
  j["planar_method"] = c.planar == PlanarMethod::exact ? "exact" : "angle_scan";
  j["grid_nodes"] = c.grid_nodes;
  j["starts"] = c.starts;
  j["newton_iterations"] = c.newton_iterations;
  j["max_match_dist"] = c.max_match_dist;
  return j;
}

Json config_json(const ArcSearchConfig& c) {
  Json j;
  j["seed"] = c.seed;
  j["starts"] = c.starts;
  j["max_iterations"] = c.max_iterations;
  j["tol"] = c.tol;
  return j;
}

Json milnor_json(const MilnorSystem& sys, std::span<const std::string> names) {
  Json j;
  j["center"] = rationals_json(sys.center);
  if (sys.mode.kind == MilnorMode::Kind::pivot) {
    j["mode"] = "pivot";
    j["pivot"] = names[sys.mode.pivot];
  } else {
    j["mode"] = "minors";
    j["pivot"] = nullptr;
  }
  Json eqs = Json::array();
  for (const auto& e : sys.equations) eqs.push_back(e.to_string(names));
  j["equations"] = std::move(eqs);
  j["degenerate"] = sys.degenerate();
  return j;
}

Json membership_json(const ArcMembershipReport& r) {
  Json j;
  j["member"] = r.member();
  j["escapes"] = r.escapes;
  j["normalized"] = r.normalized;
  j["sphere_sum"] = rational_json(r.sphere_sum);
  j["sphere_exact"] = r.sphere_exact;
  j["lambda_estimate"] = r.lambda_estimate ? number_json(*r.lambda_estimate) : Json(nullptr);
  j["cond_b"] = r.cond_b;
  j["cond_c"] = r.cond_c;
  j["cond_d"] = r.cond_d;
  j["b0"] = r.b0 ? rational_json(*r.b0) : Json(nullptr);
  j["witnesses_b"] = witness_list(r.witnesses_b);
  j["witnesses_c"] = witness_list(r.witnesses_c);
  j["witnesses_d"] = witness_list(r.witnesses_d);
  return j;
}

Json arc_hit_json(const ArcSearchHit& h) {
  Json j;
  j["start"] = h.start;
  j["b0_estimate"] = number_json(h.b0_estimate);
  j["residual"] = number_json(h.residual);
  j["iterations"] = h.iterations;
  Json coeffs = Json::array();
  for (const auto& [k, v] : h.coefficients) {
    Json term;
    term["k"] = k;
    Json vals = Json::array();
    for (double x : v) vals.push_back(number_json(x));
    term["a"] = std::move(vals);
    coeffs.push_back(std::move(term));
  }
  j["coefficients"] = std::move(coeffs);
  return j;
}

Json limit_json(const LimitValue& lv) {
  Json j;
  j["value"] = number_json(lv.value);
  j["uncertainty"] = number_json(lv.uncertainty);
  j["branch_ids"] = lv.branch_ids;
  return j;
}

Json analysis_json(const AnalysisReport& rep, std::span<const std::string> names, bool include_samples) {
  Json j;
  j["center"] = rationals_json(rep.center);
  j["status"] = to_string(rep.status);
  j["note"] = rep.note;
  j["certified"] = rep.certified;
  j["pivot"] = rep.status == AnalysisStatus::low_degree ? Json(nullptr) : Json(names[rep.pivot]);
  Json eqs = Json::array();
  for (const auto& e : rep.equations) eqs.push_back(e.to_string(names));
  j["equations"] = std::move(eqs);
  Json radii = Json::array();
  for (double r : rep.radii) radii.push_back(r);
  j["radii"] = std::move(radii);

  Json limits = Json::array();
  for (const auto& lv : rep.limits.limit_values) limits.push_back(limit_json(lv));
  j["limit_values"] = std::move(limits);
  j["convergent_count"] = rep.limits.convergent_count;
  j["divergent_count"] = rep.limits.divergent_count;
  j["lost_count"] = rep.limits.lost_count;
  j["bound_cap"] = rep.bound_cap;
  j["bound_respected"] = rep.bound_respected;

  Json monitors = Json::array();
  for (const auto& m : rep.monitors) {
    monitors.push_back({{"branch_id", m.branch_id},
                        {"first", number_json(m.first)},
                        {"last", number_json(m.last)},
                        {"min", number_json(m.min)},
                        {"pass", m.pass},
                        {"dips", m.dips}});
  }
  j["malgrange_monitor"] = {{"pass", rep.monitor_pass}, {"branches", std::move(monitors)}};

  Json branches = Json::array();
  for (const auto& t : rep.branches) {
    Json b;
    b["branch_id"] = t.branch_id;
    b["status"] = to_string(t.status);
    b["ended_early"] = t.ended_early;
    b["sample_count"] = t.samples.size();
    b["R_first"] = t.samples.front().R;
    b["R_last"] = t.samples.back().R;
    b["f_last"] = number_json(t.samples.back().f);
    b["fit"] = fit_json(t.fit);
    if (include_samples) {
      Json samples = Json::array();
      for (const auto& s : t.samples) {
        Json x = Json::array();
        for (double v : s.x) x.push_back(number_json(v));
        samples.push_back({{"R", s.R},
                           {"x", std::move(x)},
                           {"f", number_json(s.f)},
                           {"malgrange", number_json(s.malgrange)},
                           {"residual", number_json(s.residual)}});
      }
      b["samples"] = std::move(samples);
    }
    branches.push_back(std::move(b));
  }
  j["branches"] = std::move(branches);
  return j;
}

Json s_infinity_json(const SInfinityReport& rep, std::span<const std::string> names, bool include_samples) {
  Json j;
  j["certified"] = rep.certified;
  j["any_usable"] = rep.any_usable;
  Json inter = Json::array();
  for (const auto& lv : rep.intersection) {
    inter.push_back({{"value", number_json(lv.value)}, {"uncertainty", number_json(lv.uncertainty)}});
  }
  j["intersection"] = std::move(inter);
  Json per = Json::array();
  for (const auto& r : rep.per_center) per.push_back(analysis_json(r, names, include_samples));
  j["per_center"] = std::move(per);
  return j;
}

Json constraints_json(const ConstraintSystem& sys) {
  const auto names = sys.unknown_names();
  Json j;
  j["window"] = {{"k_min", sys.window.k_min}, {"k_max", sys.window.k_max}};
  j["unknown_count"] = sys.unknowns.size();
  j["equation_count"] = sys.equations.size();
  j["unknowns"] = names;
  Json eqs = Json::array();
  for (const auto& e : sys.equations) {
    Json q;
    q["condition"] = std::string(1, e.condition);
    q["partial"] = e.partial >= 0 ? Json(e.partial + 1) : Json(nullptr);
    q["multiplier"] = e.multiplier >= 0 ? Json(e.multiplier + 1) : Json(nullptr);
    q["power"] = e.power;
    q["equation"] = e.equation.to_string(names);
    eqs.push_back(std::move(q));
  }
  j["equations"] = std::move(eqs);
  j["sphere"] = sys.sphere.to_string(names);
  return j;
}

std::string traces_csv(const AnalysisReport& rep, int center_index, bool header) {
  std::ostringstream out;
  const std::size_t n = rep.center.size();
  if (header) {
    if (center_index >= 0) out << "center_index,";
    out << "branch_id,R";
    for (std::size_t i = 0; i < n; ++i) out << ",x" << i + 1;
    out << ",f,malgrange,residual\n";
  }
  for (const auto& t : rep.branches) {
    for (const auto& s : t.samples) {
      if (center_index >= 0) out << center_index << ',';
      out << t.branch_id << ',' << format_double(s.R);
      for (double v : s.x) out << ',' << format_double(v);
      out << ',' << format_double(s.f) << ',' << format_double(s.malgrange) << ',' << format_double(s.residual) << '\n';
    }
  }
  return out.str();
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace bifinf
