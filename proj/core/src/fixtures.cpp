#include "rothman/fixtures.hpp"

namespace rothman::fixtures {

namespace {
TableLabels whickham_labels() { return {"smoker", "dead within 20 years", "age"}; }
}  // namespace

StratifiedCohortTable whickham() {
  return StratifiedCohortTable({{"18-64", {97, 533, 65, 539}}, {"65+", {42, 49, 165, 193}}},
                               whickham_labels());
}

StratifiedCohortTable whickham_crude() {
  return StratifiedCohortTable({{"all", {139, 582, 230, 732}}}, whickham_labels());
}

StratifiedCohortTable whickham_six_strata_synthetic() {
  return StratifiedCohortTable({{"18-24", {2, 55, 1, 62}},
                                {"25-34", {3, 124, 5, 157}},
                                {"35-44", {14, 109, 7, 121}},
                                {"45-54", {27, 130, 12, 78}},
                                {"55-64", {51, 115, 40, 121}},
                                {"65+", {42, 49, 165, 193}}},
                               whickham_labels());
}

std::optional<StratifiedCohortTable> builtin(std::string_view name) {
  if (name == "whickham") return whickham();
  if (name == "whickham_crude") return whickham_crude();
  if (name == "whickham6") return whickham_six_strata_synthetic();
  return std::nullopt;
}

}  // namespace rothman::fixtures
