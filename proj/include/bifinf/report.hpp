#pragma once

#include <json.hpp>

#include <span>
#include <string>
#include <vector>

#include "bifinf/arc_search.hpp"
#include "bifinf/arcs.hpp"
#include "bifinf/milnor.hpp"
#include "bifinf/tracer.hpp"

namespace bifinf {

inline constexpr const char* kToolName = "bifinf";
inline constexpr const char* kToolVersion = "1.0.0";

/// Insertion-ordered JSON so that serialized reports are byte-stable.
using Json = nlohmann::ordered_json;

Json rational_json(const Rational& q);
Json rationals_json(std::span<const Rational> v);
/// Non-finite doubles become null.
Json number_json(double v);
/// Exact integer as a JSON number when it fits in int64, else a decimal string.
Json integer_json(const mpz_class& z);

Json config_json(const TracerConfig& config);
Json config_json(const ArcSearchConfig& config);
Json milnor_json(const MilnorSystem& sys, std::span<const std::string> names);
Json membership_json(const ArcMembershipReport& rep);
Json arc_hit_json(const ArcSearchHit& hit);
Json limit_json(const LimitValue& lv);
/// include_samples adds every per-radius sample of every branch.
Json analysis_json(const AnalysisReport& rep, std::span<const std::string> names, bool include_samples);
Json s_infinity_json(const SInfinityReport& rep, std::span<const std::string> names, bool include_samples);
Json constraints_json(const ConstraintSystem& sys);

/// Columns branch_id,R,x1..xn,f,malgrange,residual, one row per sample.
/// A non-negative center_index adds a leading center_index column.
std::string traces_csv(const AnalysisReport& rep, int center_index = -1, bool header = true);

/// Two-space indented dump followed by a newline.
std::string dump(const Json& j);

}  // namespace bifinf
