#include "rothman/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <thread>

#include "rothman/error.hpp"
#include "rothman/philox.hpp"

namespace rothman {

namespace {

constexpr double kSumTolerance = 1e-12;
constexpr double kDifferenceTolerance = 1e-12;

bool is_proportion(double p) { return p >= 0.0 && p <= 1.0; }

std::string stratum_name(std::size_t c) { return "C=" + std::to_string(c + 1); }

}  // namespace

void validate(const PopulationSpec& spec) {
  const std::size_t k = spec.strata();
  if (k == 0) throw ValidationError("population needs at least one stratum");
  if (spec.exposure_probs.size() != k || spec.po_probs.size() != k) {
    throw ValidationError("stratum_probs, exposure_probs and po_probs must have equal lengths");
  }
  double total = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    if (!is_proportion(spec.stratum_probs[c])) {
      throw ValidationError("stratum_probs[" + std::to_string(c) + "] is not a proportion");
    }
    if (!is_proportion(spec.exposure_probs[c])) {
      throw ValidationError("exposure_probs[" + std::to_string(c) + "] is not a proportion");
    }
    double po_total = 0.0;
    for (double p : spec.po_probs[c]) {
      if (!is_proportion(p)) {
        throw ValidationError("po_probs[" + std::to_string(c) + "] has an entry outside [0, 1]");
      }
      po_total += p;
    }
    if (std::abs(po_total - 1.0) > kSumTolerance) {
      throw ValidationError("po_probs[" + std::to_string(c) + "] does not sum to 1");
    }
    total += spec.stratum_probs[c];
  }
  if (std::abs(total - 1.0) > kSumTolerance) throw ValidationError("stratum_probs do not sum to 1");
  for (std::size_t c = 0; c < k; ++c) {
    const double joint_exposed = spec.stratum_probs[c] * spec.exposure_probs[c];
    const double joint_unexposed = spec.stratum_probs[c] * (1.0 - spec.exposure_probs[c]);
    if (joint_exposed <= 0.0) {
      throw ValidationError("Pr(X=1, " + stratum_name(c) + ") is zero");
    }
    if (joint_unexposed <= 0.0) {
      throw ValidationError("Pr(X=0, " + stratum_name(c) + ") is zero");
    }
  }
}

PopulationTruth population_truth(const PopulationSpec& spec) {
  validate(spec);
  const std::size_t k = spec.strata();
  PopulationTruth truth;
  truth.causal_marginal = {0.0, 0.0, PointKind::causal, "marginal"};
  double unexposed_mass = 0.0, exposed_mass = 0.0, unexposed_risk = 0.0, exposed_risk = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    const auto& po = spec.po_probs[c];
    const double risk0 = po[2] + po[3];  // Pr(D0 = 1 | c)
    const double risk1 = po[1] + po[3];  // Pr(D1 = 1 | c)
    truth.causal_strata.push_back({risk0, risk1, PointKind::causal, stratum_name(c)});
    // Exposure is independent of (D0, D1) given C, and D = D^X.
    truth.association_strata.push_back({risk0, risk1, PointKind::stratum, stratum_name(c)});
    const double pc = spec.stratum_probs[c];
    truth.causal_marginal.x += pc * risk0;
    truth.causal_marginal.y += pc * risk1;
    const double w0 = pc * (1.0 - spec.exposure_probs[c]);
    const double w1 = pc * spec.exposure_probs[c];
    unexposed_mass += w0;
    exposed_mass += w1;
    unexposed_risk += w0 * risk0;
    exposed_risk += w1 * risk1;
  }
  truth.crude = {unexposed_risk / unexposed_mass, exposed_risk / exposed_mass, PointKind::crude,
                 "crude"};

  const auto [emin, emax] =
      std::minmax_element(spec.exposure_probs.begin(), spec.exposure_probs.end());
  const bool exposure_depends_on_c = *emax - *emin > kDifferenceTolerance;
  bool points_differ = false;
  for (std::size_t c = 1; c < k; ++c) {
    const auto& a = truth.association_strata[0];
    const auto& b = truth.association_strata[c];
    if (std::abs(a.x - b.x) > kDifferenceTolerance || std::abs(a.y - b.y) > kDifferenceTolerance) {
      points_differ = true;
    }
  }
  truth.confounded = exposure_depends_on_c && points_differ;
  truth.crude_distance = distance_to_hull(standardized_hull(truth.association_strata), truth.crude);
  return truth;
}

namespace {

std::size_t categorical(double u, std::span<const double> probs) {
  double cumulative = 0.0;
  for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
    cumulative += probs[i];
    if (u < cumulative) return i;
  }
  // Skip trailing zero-probability categories on rounding overflow.
  std::size_t last = probs.size() - 1;
  while (last > 0 && probs[last] == 0.0) --last;
  return last;
}

}  // namespace

Individual sample_individual(const PopulationSpec& spec, std::uint64_t seed, std::uint64_t index) {
  const Philox4x32 rng(seed);
  const auto lo = static_cast<std::uint32_t>(index);
  const auto hi = static_cast<std::uint32_t>(index >> 32);
  const auto a = rng({lo, hi, 0u, 0u});
  const auto b = rng({lo, hi, 1u, 0u});
  Individual person;
  person.stratum = categorical(Philox4x32::to_unit(a[0], a[1]), spec.stratum_probs);
  person.exposed = Philox4x32::to_unit(a[2], a[3]) < spec.exposure_probs[person.stratum];
  const std::size_t joint = categorical(Philox4x32::to_unit(b[0], b[1]), spec.po_probs[person.stratum]);
  person.outcome_if_unexposed = (joint & 2u) != 0;
  person.outcome_if_exposed = (joint & 1u) != 0;
  person.outcome = person.exposed ? person.outcome_if_exposed : person.outcome_if_unexposed;
  return person;
}

std::vector<Individual> sample_individuals(const PopulationSpec& spec, std::uint64_t n,
                                           std::uint64_t seed) {
  validate(spec);
  std::vector<Individual> out;
  out.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) out.push_back(sample_individual(spec, seed, i));
  return out;
}

StratifiedCohortTable sample_table(const PopulationSpec& spec, std::uint64_t n, std::uint64_t seed) {
  validate(spec);
  if (n == 0) throw ValidationError("sample size must be positive");
  const std::size_t k = spec.strata();
  using Cells = std::vector<CohortCell>;
  auto tally = [&](std::uint64_t begin, std::uint64_t end) {
    Cells cells(k);
    for (std::uint64_t i = begin; i < end; ++i) {
      const Individual p = sample_individual(spec, seed, i);
      auto& cell = cells[p.stratum];
      if (p.exposed) {
        ++cell.exposed_total;
        cell.exposed_cases += p.outcome;
      } else {
        ++cell.unexposed_total;
        cell.unexposed_cases += p.outcome;
      }
    }
    return cells;
  };

  const std::uint64_t workers =
      n < (1u << 16) ? 1 : std::max<std::uint64_t>(1, std::thread::hardware_concurrency());
  std::vector<std::future<Cells>> parts;
  for (std::uint64_t w = 0; w < workers; ++w) {
    parts.push_back(std::async(workers == 1 ? std::launch::deferred : std::launch::async, tally,
                               n * w / workers, n * (w + 1) / workers));
  }
  Cells cells(k);
  for (auto& part : parts) {
    const Cells c = part.get();
    for (std::size_t s = 0; s < k; ++s) {
      cells[s].exposed_cases += c[s].exposed_cases;
      cells[s].exposed_total += c[s].exposed_total;
      cells[s].unexposed_cases += c[s].unexposed_cases;
      cells[s].unexposed_total += c[s].unexposed_total;
    }
  }
  std::vector<Stratum> strata;
  for (std::size_t s = 0; s < k; ++s) strata.push_back({stratum_name(s), cells[s]});
  return StratifiedCohortTable(std::move(strata), {"X", "D", "C"});
}

}  // namespace rothman
