#pragma once

#include <optional>
#include <string_view>

#include "rothman/tables.hpp"

namespace rothman::fixtures {

/// Smoking and 20-year mortality among women in the Whickham survey,
/// stratified by age (18-64, 65+).
StratifiedCohortTable whickham();

/// The same cohort collapsed to a single stratum.
StratifiedCohortTable whickham_crude();

/// Synthetic six-age-group table whose margins collapse to the Whickham
/// strata (the <65 groups sum to the 18-64 stratum). The 45-54 point lies
/// inside the hull and only the top-right corner of the confounding
/// rectangle is a stratum point. Constructed for illustration; these are
/// not observed counts.
StratifiedCohortTable whickham_six_strata_synthetic();

/// Looks up a built-in table by name ("whickham", "whickham_crude",
/// "whickham6").
std::optional<StratifiedCohortTable> builtin(std::string_view name);

}  // namespace rothman::fixtures
