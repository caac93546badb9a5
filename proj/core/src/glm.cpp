#include "rothman/glm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include <Eigen/Dense>

#include "rothman/chi_square.hpp"
#include "rothman/error.hpp"

namespace rothman {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRiskEpsilon = 1e-10;
constexpr double kBoundaryWarning = 1e-8;
constexpr double kDevianceTolerance = 1e-10;
constexpr double kStepTolerance = 1e-10;
constexpr int kMaxIterations = 100;
constexpr int kMaxHalvings = 32;
constexpr std::size_t kExposureColumn = 1;

// ---- links --------------------------------------------------------------

double link_fun(Link link, double mu) {
  switch (link) {
    case Link::logit: return std::log(mu / (1.0 - mu));
    case Link::log: return std::log(mu);
    case Link::identity: return mu;
    case Link::cloglog: return std::log(-std::log1p(-mu));
  }
  return mu;
}

double link_inverse(Link link, double eta) {
  switch (link) {
    case Link::logit: return 1.0 / (1.0 + std::exp(-eta));
    case Link::log: return std::exp(eta);
    case Link::identity: return eta;
    case Link::cloglog: return -std::expm1(-std::exp(eta));
  }
  return eta;
}

// d mu / d eta
double link_derivative(Link link, double eta) {
  switch (link) {
    case Link::logit: {
      const double mu = link_inverse(link, eta);
      return mu * (1.0 - mu);
    }
    case Link::log: return std::exp(eta);
    case Link::identity: return 1.0;
    case Link::cloglog: return std::exp(eta - std::exp(eta));
  }
  return 1.0;
}

// ---- design -------------------------------------------------------------

struct Design {
  MatrixXd x;        // one row per used (stratum, exposure) cell
  VectorXd cases;
  VectorXd totals;
  MatrixXd all_x;    // every cell, row 2c + exposure, for fitted risks
  std::vector<std::string> names;
  std::size_t strata = 0;
};

Design build_design(const ModelSpec& spec) {
  const auto& table = spec.table;
  const std::size_t k = table.size();
  const bool stratified =
      spec.terms == Terms::exposure_plus_stratum || spec.terms == Terms::saturated_with_interaction;
  if (spec.terms == Terms::saturated_with_interaction && k < 2) {
    throw ValidationError("interaction model requires at least two strata");
  }

  Design d;
  d.strata = k;
  d.names.push_back("(intercept)");
  if (spec.terms != Terms::intercept_only) d.names.push_back("exposure");
  if (stratified) {
    for (std::size_t c = 1; c < k; ++c) d.names.push_back("stratum[" + table.stratum(c).label + "]");
  }
  if (spec.terms == Terms::saturated_with_interaction) {
    for (std::size_t c = 1; c < k; ++c) {
      d.names.push_back("exposure:stratum[" + table.stratum(c).label + "]");
    }
  }
  const auto p = static_cast<Eigen::Index>(d.names.size());

  d.all_x = MatrixXd::Zero(static_cast<Eigen::Index>(2 * k), p);
  std::vector<Eigen::Index> used;
  std::vector<double> cases, totals;
  for (std::size_t c = 0; c < k; ++c) {
    const auto& s = table.stratum(c);
    for (int e = 0; e < 2; ++e) {
      const auto r = static_cast<Eigen::Index>(2 * c + e);
      Eigen::Index col = 0;
      d.all_x(r, col++) = 1.0;
      if (spec.terms != Terms::intercept_only) d.all_x(r, col++) = e;
      if (stratified) {
        for (std::size_t j = 1; j < k; ++j) d.all_x(r, col++) = (c == j) ? 1.0 : 0.0;
      }
      if (spec.terms == Terms::saturated_with_interaction) {
        for (std::size_t j = 1; j < k; ++j) d.all_x(r, col++) = (c == j && e == 1) ? 1.0 : 0.0;
      }
      const Count n = e ? s.cell.exposed_total : s.cell.unexposed_total;
      const Count y = e ? s.cell.exposed_cases : s.cell.unexposed_cases;
      if (n == 0) {
        if (stratified) {
          throw ValidationError("stratum '" + s.label + "' has no " +
                                (e ? "exposed" : "unexposed") +
                                " individuals; stratified models cannot be fitted");
        }
        continue;
      }
      used.push_back(r);
      cases.push_back(static_cast<double>(y));
      totals.push_back(static_cast<double>(n));
    }
  }
  d.x.resize(static_cast<Eigen::Index>(used.size()), p);
  for (std::size_t i = 0; i < used.size(); ++i) {
    d.x.row(static_cast<Eigen::Index>(i)) = d.all_x.row(used[i]);
  }
  d.cases = Eigen::Map<VectorXd>(cases.data(), static_cast<Eigen::Index>(cases.size()));
  d.totals = Eigen::Map<VectorXd>(totals.data(), static_cast<Eigen::Index>(totals.size()));
  return d;
}

// Design with the exposure column removed; that column becomes an offset.
struct ReducedDesign {
  Design design;
  VectorXd exposure_column;
};

ReducedDesign reduce_design(const Design& full) {
  if (full.x.cols() < 2) throw ValidationError("model has no exposure coefficient");
  ReducedDesign out;
  out.design = full;
  out.exposure_column = full.x.col(kExposureColumn);
  const auto p = full.x.cols();
  auto drop = [&](const MatrixXd& m) {
    MatrixXd r(m.rows(), p - 1);
    r.leftCols(kExposureColumn) = m.leftCols(kExposureColumn);
    r.rightCols(p - 1 - kExposureColumn) = m.rightCols(p - 1 - kExposureColumn);
    return r;
  };
  out.design.x = drop(full.x);
  out.design.all_x = drop(full.all_x);
  out.design.names.erase(out.design.names.begin() + kExposureColumn);
  return out;
}

// ---- likelihood ---------------------------------------------------------

bool admissible(const VectorXd& mu) {
  return (mu.array() > kRiskEpsilon).all() && (mu.array() < 1.0 - kRiskEpsilon).all();
}

VectorXd fitted_means(const Design&, Link link, const VectorXd& eta) {
  VectorXd mu(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) mu[i] = link_inverse(link, eta[i]);
  return mu;
}

double xlogy(double x, double y) { return x == 0.0 ? 0.0 : x * std::log(y); }

double kernel_log_likelihood(const Design& d, const VectorXd& mu) {
  double ll = 0.0;
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    ll += xlogy(d.cases[i], mu[i]) + xlogy(d.totals[i] - d.cases[i], 1.0 - mu[i]);
  }
  return ll;
}

double deviance_of(const Design& d, const VectorXd& mu) {
  double dev = 0.0;
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    const double y = d.cases[i];
    const double n = d.totals[i];
    const double m = n * mu[i];
    dev += xlogy(y, y / m) + xlogy(n - y, (n - y) / (n - m));
  }
  return std::max(0.0, 2.0 * dev);
}

// ---- IRLS ---------------------------------------------------------------

enum class IrlsStatus { converged, max_iterations, stalled, infeasible, singular };

struct IrlsResult {
  IrlsStatus status = IrlsStatus::infeasible;
  VectorXd beta;
  VectorXd mu;
  double deviance = kInf;
  double log_likelihood = -kInf;
  int iterations = 0;
  std::vector<double> trace;
  MatrixXd information;
};

struct Candidate {
  VectorXd beta;
  VectorXd eta;
  VectorXd mu;
  double deviance = kInf;
  bool ok = false;
};

Candidate evaluate(const Design& d, Link link, const VectorXd& offset, const VectorXd& beta) {
  Candidate c;
  c.beta = beta;
  c.eta = d.x * beta + offset;
  c.mu = fitted_means(d, link, c.eta);
  c.ok = c.mu.allFinite() && admissible(c.mu);
  if (c.ok) c.deviance = deviance_of(d, c.mu);
  return c;
}

MatrixXd expected_information(const Design& d, Link link, const VectorXd& eta,
                              const VectorXd& mu, VectorXd* working_weights = nullptr) {
  VectorXd w(mu.size());
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    const double g = link_derivative(link, eta[i]);
    w[i] = d.totals[i] * g * g / (mu[i] * (1.0 - mu[i]));
  }
  if (working_weights) *working_weights = w;
  return d.x.transpose() * w.asDiagonal() * d.x;
}

// One Fisher-scoring (IRLS) solve from the current linear predictor.
std::optional<VectorXd> scoring_step(const Design& d, Link link, const VectorXd& offset,
                                     const VectorXd& eta, const VectorXd& mu) {
  VectorXd w;
  const MatrixXd info = expected_information(d, link, eta, mu, &w);
  VectorXd z(mu.size());
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    z[i] = eta[i] - offset[i] + (d.cases[i] / d.totals[i] - mu[i]) / link_derivative(link, eta[i]);
  }
  const Eigen::LDLT<MatrixXd> ldlt(info);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
      (ldlt.vectorD().array() <= 1e-12 * std::max(1.0, ldlt.vectorD().cwiseAbs().maxCoeff()))
          .any()) {
    return std::nullopt;
  }
  VectorXd beta = ldlt.solve(d.x.transpose() * (w.asDiagonal() * z));
  if (!beta.allFinite()) return std::nullopt;
  return beta;
}

// Start from the smoothed proportions (cases + 0.5) / (total + 1) pushed
// through the link; if the first solve leaves the admissible region, fall
// back to `fallback` and step-halve from there.
IrlsResult irls(const Design& d, Link link, const VectorXd& offset,
                const std::vector<VectorXd>& starts) {
  IrlsResult result;
  std::optional<Candidate> current;
  for (const auto& s : starts) {
    if (s.size() != d.x.cols()) continue;
    auto c = evaluate(d, link, offset, s);
    if (c.ok) {
      current = std::move(c);
      break;
    }
  }

  VectorXd eta, mu;
  if (current) {
    eta = current->eta;
    mu = current->mu;
    result.trace.push_back(current->deviance);
  } else {
    mu.resize(d.cases.size());
    eta.resize(d.cases.size());
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
      mu[i] = (d.cases[i] + 0.5) / (d.totals[i] + 1.0);
      eta[i] = link_fun(link, mu[i]);
    }
  }

  for (int iter = 1; iter <= kMaxIterations; ++iter) {
    result.iterations = iter;
    auto proposal = scoring_step(d, link, offset, eta, mu);
    if (!proposal) {
      result.status = IrlsStatus::singular;
      return result;
    }
    if (!current) {
      auto c = evaluate(d, link, offset, *proposal);
      if (!c.ok) {
        // Leaves the admissible region with nothing to halve toward.
        result.status = IrlsStatus::infeasible;
        return result;
      }
      current = std::move(c);
      eta = current->eta;
      mu = current->mu;
      result.trace.push_back(current->deviance);
      continue;
    }

    const double previous = current->deviance;
    const VectorXd step = *proposal - current->beta;
    std::optional<Candidate> accepted;
    double scale = 1.0;
    for (int h = 0; h <= kMaxHalvings; ++h, scale *= 0.5) {
      auto c = evaluate(d, link, offset, current->beta + scale * step);
      if (c.ok && c.deviance <= previous + 1e-12 * std::max(1.0, previous)) {
        accepted = std::move(c);
        break;
      }
    }
    if (!accepted) {
      result.status = IrlsStatus::stalled;
      break;
    }
    current = std::move(accepted);
    eta = current->eta;
    mu = current->mu;
    result.trace.push_back(current->deviance);
    // Scoring is only linearly convergent for non-canonical links, so a
    // flat deviance alone can stop well short of a zero score.
    const double moved = (scale * step).cwiseAbs().maxCoeff();
    if (std::abs(previous - current->deviance) < kDevianceTolerance && moved < kStepTolerance) {
      result.status = IrlsStatus::converged;
      break;
    }
    result.status = IrlsStatus::max_iterations;
  }

  if (current) {
    result.beta = current->beta;
    result.mu = current->mu;
    result.deviance = current->deviance;
    result.log_likelihood = kernel_log_likelihood(d, current->mu);
    result.information = expected_information(d, link, current->eta, current->mu);
  }
  return result;
}

std::vector<VectorXd> default_starts(const Design& d, Link link) {
  // Intercept-only start at the pooled proportion: admissible for every link.
  VectorXd null_start = VectorXd::Zero(d.x.cols());
  null_start[0] = link_fun(link, d.cases.sum() / d.totals.sum());
  return {null_start};
}

std::string describe_trace(const std::vector<double>& trace) {
  std::ostringstream os;
  os.precision(12);
  os << "deviance trace:";
  for (double v : trace) os << ' ' << v;
  return os.str();
}

}  // namespace

std::string_view to_string(Link link) {
  switch (link) {
    case Link::logit: return "logit";
    case Link::log: return "log";
    case Link::identity: return "identity";
    case Link::cloglog: return "cloglog";
  }
  return "";
}

std::string_view to_string(Terms terms) {
  switch (terms) {
    case Terms::intercept_only: return "intercept_only";
    case Terms::exposure_only: return "exposure_only";
    case Terms::exposure_plus_stratum: return "exposure_plus_stratum";
    case Terms::saturated_with_interaction: return "saturated_with_interaction";
  }
  return "";
}

Measure measure_for(Link link) noexcept {
  switch (link) {
    case Link::logit: return Measure::odds_ratio;
    case Link::log: return Measure::risk_ratio;
    case Link::identity: return Measure::risk_difference;
    case Link::cloglog: return Measure::hazard_ratio;
  }
  return Measure::odds_ratio;
}

Link link_for(Measure m) noexcept {
  switch (m) {
    case Measure::odds_ratio: return Link::logit;
    case Measure::risk_ratio: return Link::log;
    case Measure::risk_difference: return Link::identity;
    case Measure::hazard_ratio: return Link::cloglog;
  }
  return Link::logit;
}

namespace {
double natural_scale(Link link, double b) { return link == Link::identity ? b : std::exp(b); }
}  // namespace

double GlmFit::exposure_measure() const {
  if (terms == Terms::intercept_only) throw ValidationError("intercept-only fit has no exposure effect");
  return natural_scale(link, coefficients.at(kExposureColumn));
}

GlmFit fit(const ModelSpec& spec) {
  const Design d = build_design(spec);
  const VectorXd offset = VectorXd::Zero(d.x.rows());
  IrlsResult r = irls(d, spec.link, offset, {});
  if (r.status == IrlsStatus::infeasible) r = irls(d, spec.link, offset, default_starts(d, spec.link));

  const std::string model = std::string(to_string(spec.link)) + "/" + std::string(to_string(spec.terms));
  switch (r.status) {
    case IrlsStatus::converged: break;
    case IrlsStatus::singular:
      throw NumericalError(model + ": singular information matrix");
    case IrlsStatus::infeasible:
      throw NumericalError(model + ": no admissible starting values");
    case IrlsStatus::stalled:
      throw NumericalError(model + ": step halving failed, fit is boundary-constrained; " +
                           describe_trace(r.trace));
    case IrlsStatus::max_iterations:
      throw NumericalError(model + ": no convergence after " + std::to_string(kMaxIterations) +
                           " iterations; " + describe_trace(r.trace));
  }
  if ((r.mu.array() < kBoundaryWarning).any() || (r.mu.array() > 1.0 - kBoundaryWarning).any()) {
    throw NumericalError(model + ": fitted risk pinned to the boundary of (0, 1)");
  }

  GlmFit out;
  out.link = spec.link;
  out.terms = spec.terms;
  out.coefficient_names = d.names;
  out.coefficients.assign(r.beta.data(), r.beta.data() + r.beta.size());
  const MatrixXd cov = r.information.inverse();
  for (Eigen::Index i = 0; i < cov.rows(); ++i) out.standard_errors.push_back(std::sqrt(cov(i, i)));
  out.log_likelihood = r.log_likelihood;
  out.deviance = r.deviance;
  out.converged = true;
  out.iterations = r.iterations;
  out.deviance_trace = r.trace;
  const VectorXd all_mu = fitted_means(d, spec.link, d.all_x * r.beta);
  for (std::size_t c = 0; c < d.strata; ++c) {
    out.fitted_risks.push_back({all_mu[static_cast<Eigen::Index>(2 * c)],
                                all_mu[static_cast<Eigen::Index>(2 * c + 1)]});
  }
  return out;
}

std::vector<double> stratum_measures(const GlmFit& f) {
  if (f.terms == Terms::intercept_only) throw ValidationError("intercept-only fit has no exposure effect");
  const std::size_t k = f.fitted_risks.size();
  std::vector<double> out;
  const double base = f.coefficients.at(kExposureColumn);
  for (std::size_t c = 0; c < k; ++c) {
    double b = base;
    if (f.terms == Terms::saturated_with_interaction && c > 0) {
      // intercept, exposure, (k - 1) strata, then (k - 1) interactions
      b += f.coefficients.at(2 + (k - 1) + (c - 1));
    }
    out.push_back(natural_scale(f.link, b));
  }
  return out;
}

double log_likelihood_at(const ModelSpec& spec, std::span<const double> coefficients) {
  const Design d = build_design(spec);
  if (static_cast<Eigen::Index>(coefficients.size()) != d.x.cols()) {
    throw ValidationError("coefficient vector has the wrong length");
  }
  const VectorXd beta = Eigen::Map<const VectorXd>(coefficients.data(), d.x.cols());
  const VectorXd mu = fitted_means(d, spec.link, d.x * beta);
  if (!((mu.array() > 0.0).all() && (mu.array() < 1.0).all())) return -kInf;
  return kernel_log_likelihood(d, mu);
}

std::vector<double> score_at(const ModelSpec& spec, std::span<const double> coefficients) {
  const Design d = build_design(spec);
  if (static_cast<Eigen::Index>(coefficients.size()) != d.x.cols()) {
    throw ValidationError("coefficient vector has the wrong length");
  }
  const VectorXd beta = Eigen::Map<const VectorXd>(coefficients.data(), d.x.cols());
  const VectorXd eta = d.x * beta;
  const VectorXd mu = fitted_means(d, spec.link, eta);
  VectorXd u(mu.size());
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    u[i] = (d.cases[i] - d.totals[i] * mu[i]) * link_derivative(spec.link, eta[i]) /
           (mu[i] * (1.0 - mu[i]));
  }
  const VectorXd s = d.x.transpose() * u;
  return {s.data(), s.data() + s.size()};
}

double lr_statistic(const GlmFit& null_fit, const GlmFit& alt_fit) {
  const double stat = 2.0 * (alt_fit.log_likelihood - null_fit.log_likelihood);
  if (stat < -1e-8) {
    throw ValidationError("negative likelihood-ratio statistic; models are not nested");
  }
  return std::max(stat, 0.0);
}

double lr_test(const GlmFit& null_fit, const GlmFit& alt_fit, int df) {
  if (df <= 0) throw ValidationError("likelihood-ratio test needs positive degrees of freedom");
  return chi_square_sf(lr_statistic(null_fit, alt_fit), df);
}

namespace {

class ProfileEvaluator {
 public:
  ProfileEvaluator(const ModelSpec& spec, std::optional<VectorXd> warm)
      : link_(spec.link), reduced_(reduce_design(build_design(spec))) {
    if (warm) starts_.push_back({std::numeric_limits<double>::quiet_NaN(), *warm});
  }

  double operator()(double b) {
    const VectorXd offset = b * reduced_.exposure_column;
    std::vector<VectorXd> starts;
    // Nearest previously solved value first.
    auto ordered = starts_;
    std::sort(ordered.begin(), ordered.end(), [&](const auto& l, const auto& r) {
      const double dl = std::isnan(l.first) ? kInf : std::abs(l.first - b);
      const double dr = std::isnan(r.first) ? kInf : std::abs(r.first - b);
      return dl < dr;
    });
    for (const auto& s : ordered) starts.push_back(s.second);
    for (auto& s : default_starts(reduced_.design, link_)) starts.push_back(std::move(s));

    IrlsResult r = irls(reduced_.design, link_, offset, starts);
    if (r.status == IrlsStatus::infeasible || r.status == IrlsStatus::singular) return -kInf;
    if (r.beta.size() > 0 && std::isfinite(r.log_likelihood)) {
      starts_.push_back({b, r.beta});
      if (starts_.size() > 64) starts_.erase(starts_.begin() + 1);
    }
    return r.log_likelihood;
  }

 private:
  Link link_;
  ReducedDesign reduced_;
  std::vector<std::pair<double, VectorXd>> starts_;
};

std::optional<VectorXd> warm_start(const GlmFit& mle) {
  if (mle.coefficients.size() < 2) return std::nullopt;
  VectorXd w(static_cast<Eigen::Index>(mle.coefficients.size() - 1));
  Eigen::Index j = 0;
  for (std::size_t i = 0; i < mle.coefficients.size(); ++i) {
    if (i != kExposureColumn) w[j++] = mle.coefficients[i];
  }
  return w;
}

}  // namespace

double profile_log_likelihood(const ModelSpec& spec, double exposure_coefficient) {
  ProfileEvaluator eval(spec, std::nullopt);
  return eval(exposure_coefficient);
}

LrInterval profile_interval(const ModelSpec& spec, double level) {
  return profile_interval(spec, fit(spec), level);
}

LrInterval profile_interval(const ModelSpec& spec, const GlmFit& mle, double level) {
  if (!(level > 0.0 && level < 1.0)) throw ValidationError("confidence level must lie in (0, 1)");
  if (!mle.converged) throw NumericalError("profile interval requires a converged fit");
  if (mle.terms == Terms::intercept_only) throw ValidationError("intercept-only fit has no exposure effect");

  ProfileEvaluator profile(spec, warm_start(mle));
  const double critical = chi_square_quantile(level, 1.0);
  const double b_hat = mle.coefficients.at(kExposureColumn);
  double step0 = mle.standard_errors.at(kExposureColumn);
  if (!(step0 > 0.0) || !std::isfinite(step0)) step0 = 0.1;
  auto excess = [&](double b) { return 2.0 * (mle.log_likelihood - profile(b)) - critical; };

  struct Root {
    double value;
    bool bounded;
  };
  auto find_root = [&](double direction) -> Root {
    double inner = b_hat;
    double step = step0;
    double outer = b_hat + direction * step;
    bool bracketed = false;
    for (int i = 0; i < 60; ++i) {
      if (excess(outer) >= 0.0) {
        bracketed = true;
        break;
      }
      inner = outer;
      step *= 2.0;
      outer = b_hat + direction * step;
    }
    if (!bracketed) return {direction * kInf, false};
    while (std::abs(outer - inner) >= 1e-9) {
      const double mid = 0.5 * (inner + outer);
      (excess(mid) >= 0.0 ? outer : inner) = mid;
    }
    return {0.5 * (inner + outer), true};
  };

  const Root lo = find_root(-1.0);
  const Root hi = find_root(+1.0);
  LrInterval out;
  out.level = level;
  out.estimate = natural_scale(mle.link, b_hat);
  out.lower = natural_scale(mle.link, lo.value);
  out.upper = natural_scale(mle.link, hi.value);
  out.lower_bounded = lo.bounded;
  out.upper_bounded = hi.bounded;
  return out;
}

}  // namespace rothman
