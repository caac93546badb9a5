#pragma once

// Binomial GLMs over the categorical design of a stratified cohort table:
// IRLS fitting under four links, likelihood-ratio tests and profile
// likelihood intervals for the exposure coefficient.
//
// Design rows are (stratum, exposure) cells. Coding is by reference cell:
// the first stratum and the unexposed group are the references, so the
// exposure coefficient is directly the (log) measure of association.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rothman/measures.hpp"
#include "rothman/tables.hpp"

namespace rothman {

enum class Link { logit, log, identity, cloglog };

enum class Terms {
  intercept_only,
  exposure_only,
  exposure_plus_stratum,
  saturated_with_interaction,
};

std::string_view to_string(Link link);
std::string_view to_string(Terms terms);

/// logit -> OR, log -> RR, identity -> RD, cloglog -> HR.
Measure measure_for(Link link) noexcept;
Link link_for(Measure m) noexcept;

struct ModelSpec {
  Link link = Link::logit;
  Terms terms = Terms::exposure_only;
  StratifiedCohortTable table;
};

struct GlmFit {
  Link link = Link::logit;
  Terms terms = Terms::exposure_only;
  std::vector<std::string> coefficient_names;
  std::vector<double> coefficients;
  /// From the inverse expected information at the optimum.
  std::vector<double> standard_errors;
  /// Binomial kernel sum y log(mu) + (n - y) log(1 - mu); the binomial
  /// coefficients are omitted (they cancel in every comparison).
  double log_likelihood = 0.0;
  /// Against the per-cell saturated model.
  double deviance = 0.0;
  /// Per stratum, in table order.
  std::vector<RiskPair> fitted_risks;
  bool converged = false;
  int iterations = 0;
  std::vector<double> deviance_trace;

  std::size_t parameter_count() const noexcept { return coefficients.size(); }
  /// Exposure coefficient on the measure's natural scale (exponentiated
  /// except under the identity link). Throws for intercept-only fits.
  double exposure_measure() const;
};

/// Maximum-likelihood fit by IRLS with step halving. Throws
/// ValidationError for designs touching an empty (stratum, exposure) cell
/// and NumericalError on non-convergence or a fit pinned to the boundary
/// of the parameter space.
GlmFit fit(const ModelSpec& spec);

/// Measure of association in each stratum implied by the fit, natural scale.
std::vector<double> stratum_measures(const GlmFit& fit);

/// Log-likelihood and score at arbitrary coefficients (same layout as
/// GlmFit::coefficients). The log-likelihood is -inf when some fitted risk
/// leaves (0, 1).
double log_likelihood_at(const ModelSpec& spec, std::span<const double> coefficients);
std::vector<double> score_at(const ModelSpec& spec, std::span<const double> coefficients);

/// 2 (l_alt - l_null); throws ValidationError if it is below -1e-8.
double lr_statistic(const GlmFit& null_fit, const GlmFit& alt_fit);
/// Upper chi-square tail of lr_statistic with df degrees of freedom.
double lr_test(const GlmFit& null_fit, const GlmFit& alt_fit, int df);

struct LrInterval {
  double estimate = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.95;
  /// False when the root could not be bracketed; the endpoint is then
  /// the natural-scale image of -inf or +inf.
  bool lower_bounded = true;
  bool upper_bounded = true;
};

/// Profile log-likelihood with the exposure coefficient fixed (link scale).
/// Returns -inf when no admissible fit exists for that value.
double profile_log_likelihood(const ModelSpec& spec, double exposure_coefficient);

/// Likelihood-ratio interval for the exposure coefficient: the two roots
/// of 2 (l_max - l_profile(b)) = chi_square_quantile(level, 1), bracketed by
/// doubling steps of one standard error and refined by bisection to 1e-9.
LrInterval profile_interval(const ModelSpec& spec, double level = 0.95);
LrInterval profile_interval(const ModelSpec& spec, const GlmFit& mle, double level = 0.95);

}  // namespace rothman
