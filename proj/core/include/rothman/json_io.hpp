#pragma once

// JSON encodings of analysis results. Reals appear twice: rounded to six
// significant digits under their own key and at full precision under
// "<key>_full". Infinities are written as the strings "+inf" and "-inf",
// undefined values as null.

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "rothman/diagnostics.hpp"
#include "rothman/measures.hpp"
#include "rothman/simulate.hpp"

namespace rothman {

using Json = nlohmann::ordered_json;

/// Rounds to six significant digits.
double round_sig6(double v);

Json to_json(const RiskPoint& p);
Json to_json(const StandardPopulation& s);
Json to_json(const LrInterval& interval);
Json to_json(const CollapsibilityReport& report);
Json to_json(const AnalysisReport& report);
Json to_json(const PopulationTruth& truth);

/// Two-space indent, trailing newline.
std::string dump(const Json& j);

/// {stratum_probs: [...], exposure_probs: [...], po_probs: [[p00,p01,p10,p11], ...]}.
/// Throws ParseError for malformed input and ValidationError for an
/// invalid population.
PopulationSpec parse_population_spec(std::string_view text);

}  // namespace rothman
