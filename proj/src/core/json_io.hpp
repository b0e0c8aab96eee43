#pragma once

#include <string>
#include <vector>

#include "correspondence.hpp"
#include "distribution.hpp"
#include "embedding.hpp"
#include "json.hpp"
#include "montecarlo.hpp"
#include "orlicz_ops.hpp"

namespace orlz {

// Orlicz document: {"branches":[{"kind","domain":[lo,hi|null],...}],
//                   "kink": t1|null,
//                   "flags":{"normalized","linear_tail","smoothness"}}
// Branch params: power -> "terms":[{"coef","exp"}]; affine -> "a","b";
// table -> "s":[...], "m":[...]. Exact evaluators do not serialize: a
// reloaded table-backed function evaluates by monotone cubic interpolation.
nlohmann::json orlicz_to_json(const OrliczFunction& f);
OrliczFunction orlicz_from_json(const nlohmann::json& j);

// Distribution spec: {"kind": "pareto_q"|"uniform"|"constant"|"custom_table"
//                     |"from_orlicz"|"from_orlicz_max", params...}.
// p serializes as a number or the string "inf".
nlohmann::json dist_to_json(const Distribution& d);
Distribution dist_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ConditionReport& r);
nlohmann::json to_json(const LimitsReport& r);
nlohmann::json to_json(const DeviationReport& r);
nlohmann::json to_json(const ReconstructionReport& r);
nlohmann::json to_json(const EquivalenceResult& r);
nlohmann::json to_json(const McEstimate& e);
nlohmann::json to_json(const RatioReport& r);
nlohmann::json to_json(const DistortionReport& r);

// Shortest exact decimal form (round-trips through strtod).
std::string format_double(double v);

// Comma-separated, '.' decimal, header row, LF line endings.
std::string csv_document(const std::vector<std::string>& header,
                         const std::vector<std::vector<double>>& rows);

}  // namespace orlz
