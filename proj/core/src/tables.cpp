#include "rothman/tables.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <istream>
#include <iterator>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rothman/error.hpp"

namespace rothman {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::parse: return "parse_error";
    case ErrorCode::validation: return "validation_error";
    case ErrorCode::domain: return "domain_error";
    case ErrorCode::numerical: return "numerical_error";
  }
  return "error";
}

void validate(const CohortCell& cell, std::string_view where) {
  auto fail = [&](const std::string& what) {
    throw ValidationError(std::string(where) + ": " + what);
  };
  if (cell.exposed_cases < 0 || cell.exposed_total < 0 || cell.unexposed_cases < 0 ||
      cell.unexposed_total < 0) {
    fail("counts must be nonnegative");
  }
  if (cell.exposed_cases > cell.exposed_total) {
    fail("exposed_cases " + std::to_string(cell.exposed_cases) + " exceeds exposed_total " +
         std::to_string(cell.exposed_total));
  }
  if (cell.unexposed_cases > cell.unexposed_total) {
    fail("unexposed_cases " + std::to_string(cell.unexposed_cases) +
         " exceeds unexposed_total " + std::to_string(cell.unexposed_total));
  }
}

StratifiedCohortTable::StratifiedCohortTable(std::vector<Stratum> strata, TableLabels labels)
    : strata_(std::move(strata)), labels_(std::move(labels)) {
  if (strata_.empty()) throw ValidationError("table must contain at least one stratum");
  std::set<std::string> seen;
  for (const auto& s : strata_) {
    validate(s.cell, "stratum '" + s.label + "'");
    if (!seen.insert(s.label).second) {
      throw ValidationError("duplicate stratum label '" + s.label + "'");
    }
  }
}

std::vector<std::size_t> StratifiedCohortTable::strata_with_empty_margin() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < strata_.size(); ++i) {
    if (strata_[i].cell.has_empty_margin()) out.push_back(i);
  }
  return out;
}

CohortCell collapse(const StratifiedCohortTable& table) {
  CohortCell sum;
  for (const auto& s : table.strata()) {
    sum.exposed_cases += s.cell.exposed_cases;
    sum.exposed_total += s.cell.exposed_total;
    sum.unexposed_cases += s.cell.unexposed_cases;
    sum.unexposed_total += s.cell.unexposed_total;
  }
  return sum;
}

RiskPair stratum_risks(const CohortCell& cell) {
  if (cell.unexposed_total == 0) throw DomainError("no unexposed individuals in cell");
  if (cell.exposed_total == 0) throw DomainError("no exposed individuals in cell");
  return {static_cast<double>(cell.unexposed_cases) / static_cast<double>(cell.unexposed_total),
          static_cast<double>(cell.exposed_cases) / static_cast<double>(cell.exposed_total)};
}

namespace {

constexpr std::string_view kCsvHeader =
    "stratum,exposed_cases,exposed_total,unexposed_cases,unexposed_total";
constexpr std::array<std::string_view, 5> kColumns = {
    "stratum", "exposed_cases", "exposed_total", "unexposed_cases", "unexposed_total"};

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

// RFC 4180 style: fields may be double-quoted, with "" as an escaped quote.
std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == '"' && trim(current).empty()) {
      current.clear();
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.push_back(was_quoted ? current : std::string(trim(current)));
      current.clear();
      was_quoted = false;
    } else {
      current.push_back(c);
    }
  }
  if (quoted) throw ParseError(line_no, "", "unterminated quoted field");
  fields.push_back(was_quoted ? current : std::string(trim(current)));
  return fields;
}

Count parse_count(const std::string& text, std::size_t line_no, std::string_view field) {
  Count value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc{} || ptr != last) {
    throw ParseError(line_no, std::string(field), "expected an integer count, got '" + text + "'");
  }
  return value;
}

StratifiedCohortTable parse_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::vector<Stratum> strata;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    if (trim(view).empty()) continue;
    if (!have_header) {
      auto header = split_csv_line(view, line_no);
      if (header.size() != kColumns.size()) {
        throw ParseError(line_no, "", "header must be '" + std::string(kCsvHeader) + "'");
      }
      for (std::size_t i = 0; i < kColumns.size(); ++i) {
        if (header[i] != kColumns[i]) {
          throw ParseError(line_no, header[i],
                           "expected column '" + std::string(kColumns[i]) + "'");
        }
      }
      have_header = true;
      continue;
    }
    auto fields = split_csv_line(view, line_no);
    if (fields.size() != kColumns.size()) {
      throw ParseError(line_no, "", "expected 5 fields, got " + std::to_string(fields.size()));
    }
    if (fields[0].empty()) throw ParseError(line_no, "stratum", "empty stratum label");
    Stratum s;
    s.label = fields[0];
    s.cell.exposed_cases = parse_count(fields[1], line_no, kColumns[1]);
    s.cell.exposed_total = parse_count(fields[2], line_no, kColumns[2]);
    s.cell.unexposed_cases = parse_count(fields[3], line_no, kColumns[3]);
    s.cell.unexposed_total = parse_count(fields[4], line_no, kColumns[4]);
    validate(s.cell, "line " + std::to_string(line_no) + ", stratum '" + s.label + "'");
    strata.push_back(std::move(s));
  }
  if (!have_header) throw ParseError(line_no, "", "missing CSV header");
  return StratifiedCohortTable(std::move(strata));
}

Count json_count(const nlohmann::json& obj, std::string_view key, std::size_t index) {
  const std::string where = "strata[" + std::to_string(index) + "]";
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(1, where + "." + std::string(key), "missing field");
  if (!it->is_number_integer()) {
    throw ParseError(1, where + "." + std::string(key), "expected an integer count");
  }
  return it->get<Count>();
}

StratifiedCohortTable parse_json(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(1, "", e.what());
  }
  if (!doc.is_object()) throw ParseError(1, "", "top-level value must be an object");
  TableLabels labels;
  if (auto it = doc.find("labels"); it != doc.end()) {
    if (!it->is_object()) throw ParseError(1, "labels", "expected an object");
    labels.exposure = it->value("exposure", labels.exposure);
    labels.outcome = it->value("outcome", labels.outcome);
    labels.covariate = it->value("covariate", labels.covariate);
  }
  auto strata_it = doc.find("strata");
  if (strata_it == doc.end() || !strata_it->is_array()) {
    throw ParseError(1, "strata", "expected an array of strata");
  }
  std::vector<Stratum> strata;
  for (std::size_t i = 0; i < strata_it->size(); ++i) {
    const auto& row = (*strata_it)[i];
    if (!row.is_object()) throw ParseError(1, "strata[" + std::to_string(i) + "]", "expected an object");
    Stratum s;
    auto label = row.find("label");
    if (label == row.end() || !label->is_string()) {
      throw ParseError(1, "strata[" + std::to_string(i) + "].label", "expected a string");
    }
    s.label = label->get<std::string>();
    s.cell.exposed_cases = json_count(row, "exposed_cases", i);
    s.cell.exposed_total = json_count(row, "exposed_total", i);
    s.cell.unexposed_cases = json_count(row, "unexposed_cases", i);
    s.cell.unexposed_total = json_count(row, "unexposed_total", i);
    validate(s.cell, "stratum '" + s.label + "'");
    strata.push_back(std::move(s));
  }
  StratifiedCohortTable table(std::move(strata), std::move(labels));
  if (auto it = doc.find("crude"); it != doc.end()) {
    CohortCell crude{json_count(*it, "exposed_cases", 0), json_count(*it, "exposed_total", 0),
                     json_count(*it, "unexposed_cases", 0), json_count(*it, "unexposed_total", 0)};
    if (crude != collapse(table)) {
      throw ValidationError("crude table does not equal the sum of the strata");
    }
  }
  return table;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos && trim(s) == s) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

StratifiedCohortTable parse_table(std::istream& source, TableFormat format) {
  return format == TableFormat::csv ? parse_csv(source) : parse_json(source);
}

StratifiedCohortTable parse_table(std::string_view source, TableFormat format) {
  std::istringstream in{std::string(source)};
  return parse_table(in, format);
}

std::string serialize_table(const StratifiedCohortTable& table, TableFormat format) {
  if (format == TableFormat::csv) {
    std::ostringstream out;
    out << kCsvHeader << '\n';
    for (const auto& s : table.strata()) {
      out << csv_quote(s.label) << ',' << s.cell.exposed_cases << ',' << s.cell.exposed_total
          << ',' << s.cell.unexposed_cases << ',' << s.cell.unexposed_total << '\n';
    }
    return out.str();
  }
  nlohmann::ordered_json doc;
  doc["labels"] = {{"exposure", table.labels().exposure},
                   {"outcome", table.labels().outcome},
                   {"covariate", table.labels().covariate}};
  doc["strata"] = nlohmann::ordered_json::array();
  for (const auto& s : table.strata()) {
    doc["strata"].push_back({{"label", s.label},
                             {"exposed_cases", s.cell.exposed_cases},
                             {"exposed_total", s.cell.exposed_total},
                             {"unexposed_cases", s.cell.unexposed_cases},
                             {"unexposed_total", s.cell.unexposed_total}});
  }
  return doc.dump(2) + "\n";
}

}  // namespace rothman
