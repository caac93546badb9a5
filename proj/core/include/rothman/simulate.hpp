#pragma once

// Potential-outcomes populations with a categorical covariate C, binary
// exposure X and binary outcome. Exposure is independent of the potential
// outcomes given C, so the only confounding is through C.

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "rothman/geometry.hpp"
#include "rothman/tables.hpp"

namespace rothman {

struct PopulationSpec {
  /// Pr(C = c).
  std::vector<double> stratum_probs;
  /// Pr(X = 1 | C = c).
  std::vector<double> exposure_probs;
  /// {p00, p01, p10, p11} with p_ab = Pr(D0 = a, D1 = b | C = c).
  std::vector<std::array<double, 4>> po_probs;

  std::size_t strata() const noexcept { return stratum_probs.size(); }
};

/// Throws ValidationError for mismatched lengths, proportions outside
/// [0, 1], distributions not summing to one within 1e-12, or an empty
/// (stratum, exposure) margin.
void validate(const PopulationSpec& spec);

struct PopulationTruth {
  /// (Pr(D0 = 1 | C = c), Pr(D1 = 1 | C = c)).
  std::vector<RiskPoint> causal_strata;
  /// sum_c Pr(C = c) causal_strata[c].
  RiskPoint causal_marginal;
  /// Expected association points; equal to the causal ones here.
  std::vector<RiskPoint> association_strata;
  RiskPoint crude;
  /// Exposure depends on C and C shifts the outcome risks.
  bool confounded = false;
  /// Distance from the crude point to the standardized segment or hull.
  double crude_distance = 0.0;
};

/// Exact population expectations.
PopulationTruth population_truth(const PopulationSpec& spec);

struct Individual {
  std::size_t stratum = 0;
  bool exposed = false;
  bool outcome_if_unexposed = false;  // D0
  bool outcome_if_exposed = false;    // D1
  bool outcome = false;               // D = D^X
};

/// Individual i draws from Philox4x32-10 keyed by the seed with counters
/// {i_lo, i_hi, 0, 0} (stratum, exposure) and {i_lo, i_hi, 1, 0}
/// (potential outcomes), so results do not depend on how work is split.
Individual sample_individual(const PopulationSpec& spec, std::uint64_t seed, std::uint64_t index);

std::vector<Individual> sample_individuals(const PopulationSpec& spec, std::uint64_t n,
                                           std::uint64_t seed);

/// Aggregates n draws into a table with strata labelled "C=1" ... "C=k".
StratifiedCohortTable sample_table(const PopulationSpec& spec, std::uint64_t n, std::uint64_t seed);

}  // namespace rothman
