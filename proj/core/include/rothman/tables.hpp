#pragma once

// Stratified 2x2 cohort tables: a binary exposure crossed with a binary
// outcome inside each level of a categorical covariate.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rothman {

using Count = std::int64_t;

/// One 2x2 table stored as case counts and group totals.
///
/// A zero total is representable so that a stratum with nobody in one
/// exposure group can still be loaded; see has_empty_margin().
struct CohortCell {
  Count exposed_cases = 0;
  Count exposed_total = 0;
  Count unexposed_cases = 0;
  Count unexposed_total = 0;

  bool has_empty_margin() const noexcept {
    return exposed_total == 0 || unexposed_total == 0;
  }
  Count total() const noexcept { return exposed_total + unexposed_total; }
  Count cases() const noexcept { return exposed_cases + unexposed_cases; }

  friend bool operator==(const CohortCell&, const CohortCell&) = default;
};

/// Throws ValidationError naming `where` if counts are negative or cases
/// exceed totals.
void validate(const CohortCell& cell, std::string_view where);

struct Stratum {
  std::string label;
  CohortCell cell;

  friend bool operator==(const Stratum&, const Stratum&) = default;
};

struct TableLabels {
  std::string exposure = "exposure";
  std::string outcome = "outcome";
  std::string covariate = "stratum";

  friend bool operator==(const TableLabels&, const TableLabels&) = default;
};

/// Immutable, validated sequence of strata in input order.
class StratifiedCohortTable {
 public:
  /// Validates every cell, label uniqueness and k >= 1.
  explicit StratifiedCohortTable(std::vector<Stratum> strata, TableLabels labels = {});

  std::span<const Stratum> strata() const noexcept { return strata_; }
  const Stratum& stratum(std::size_t i) const { return strata_.at(i); }
  std::size_t size() const noexcept { return strata_.size(); }
  const TableLabels& labels() const noexcept { return labels_; }

  /// Indices of strata that have no exposed or no unexposed individuals.
  std::vector<std::size_t> strata_with_empty_margin() const;

  friend bool operator==(const StratifiedCohortTable&, const StratifiedCohortTable&) = default;

 private:
  std::vector<Stratum> strata_;
  TableLabels labels_;
};

enum class TableFormat { csv, json };

/// CSV: header `stratum,exposed_cases,exposed_total,unexposed_cases,unexposed_total`
/// followed by one row per stratum. JSON: `{labels: {...}, strata: [...]}`
/// with an optional `crude` cell that must equal the collapsed strata.
StratifiedCohortTable parse_table(std::istream& source, TableFormat format);
StratifiedCohortTable parse_table(std::string_view source, TableFormat format);

std::string serialize_table(const StratifiedCohortTable& table, TableFormat format);

/// Elementwise sum over strata.
CohortCell collapse(const StratifiedCohortTable& table);

struct RiskPair {
  double unexposed = 0.0;
  double exposed = 0.0;
};

/// (unexposed_cases / unexposed_total, exposed_cases / exposed_total).
/// Throws DomainError when either total is zero.
RiskPair stratum_risks(const CohortCell& cell);

}  // namespace rothman
