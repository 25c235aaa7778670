// Copyright 2026 The wqte Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef WQTE_DATA_HPP
#define WQTE_DATA_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"
#include "wqte/error.hpp"

namespace wqte {

enum class ExposureTag { kBinary, kCategorical, kContinuous };

/// Exposure regime. `levels` is J for categorical, 2 for binary, 0 otherwise.
struct ExposureKind {
  ExposureTag tag = ExposureTag::kBinary;
  int levels = 2;

  static ExposureKind binary() { return {ExposureTag::kBinary, 2}; }
  static ExposureKind categorical(int levels) {
    if (levels < 3) {
      throw ArgumentError("categorical exposure needs J >= 3 levels "
                          "(use binary for two levels), got " +
                          std::to_string(levels));
    }
    return {ExposureTag::kCategorical, levels};
  }
  static ExposureKind continuous() { return {ExposureTag::kContinuous, 0}; }

  [[nodiscard]] bool is_binary() const { return tag == ExposureTag::kBinary; }
  [[nodiscard]] bool is_categorical() const {
    return tag == ExposureTag::kCategorical;
  }
  [[nodiscard]] bool is_continuous() const {
    return tag == ExposureTag::kContinuous;
  }
  friend bool operator==(const ExposureKind&, const ExposureKind&) = default;
};

inline std::string to_string(const ExposureKind& kind) {
  switch (kind.tag) {
    case ExposureTag::kBinary:
      return "binary";
    case ExposureTag::kCategorical:
      return "categorical(" + std::to_string(kind.levels) + ")";
    case ExposureTag::kContinuous:
      return "continuous";
  }
  return "unknown";
}

/// Unit-level observational record: outcome, exposure and covariates.
///
/// Exposure values are stored as doubles: 0/1 for binary, 1..J for
/// categorical, raw dose for continuous. Immutable once built.
class Dataset {
 public:
  Dataset(Eigen::VectorXd y, Eigen::VectorXd z, ExposureKind kind,
          Eigen::MatrixXd x, std::vector<std::string> column_names = {},
          std::string outcome_name = "y", std::string exposure_name = "z",
          std::vector<std::string> level_labels = {})
      : y_(std::move(y)),
        z_(std::move(z)),
        kind_(kind),
        x_(std::move(x)),
        column_names_(std::move(column_names)),
        outcome_name_(std::move(outcome_name)),
        exposure_name_(std::move(exposure_name)),
        level_labels_(std::move(level_labels)) {
    validate();
  }

  [[nodiscard]] std::size_t n() const { return static_cast<std::size_t>(y_.size()); }
  [[nodiscard]] std::size_t p() const { return static_cast<std::size_t>(x_.cols()); }
  [[nodiscard]] const Eigen::VectorXd& y() const { return y_; }
  [[nodiscard]] const Eigen::VectorXd& z() const { return z_; }
  [[nodiscard]] const Eigen::MatrixXd& x() const { return x_; }
  [[nodiscard]] const ExposureKind& kind() const { return kind_; }
  [[nodiscard]] const std::vector<std::string>& column_names() const {
    return column_names_;
  }
  [[nodiscard]] const std::string& outcome_name() const { return outcome_name_; }
  [[nodiscard]] const std::string& exposure_name() const {
    return exposure_name_;
  }
  /// Original labels of categorical levels 1..J (index 0 is level 1).
  [[nodiscard]] const std::vector<std::string>& level_labels() const {
    return level_labels_;
  }

  /// Exposure as integer labels (binary 0/1, categorical 1..J).
  [[nodiscard]] std::vector<int> labels() const {
    std::vector<int> out(n());
    for (std::size_t i = 0; i < n(); ++i) {
      out[i] = static_cast<int>(std::lround(z_[static_cast<Eigen::Index>(i)]));
    }
    return out;
  }

  /// Rows `rows` (repeats allowed), e.g. a bootstrap resample.
  [[nodiscard]] Dataset subset(std::span<const std::size_t> rows) const {
    const auto m = static_cast<Eigen::Index>(rows.size());
    Eigen::VectorXd y(m);
    Eigen::VectorXd z(m);
    Eigen::MatrixXd x(m, x_.cols());
    for (Eigen::Index r = 0; r < m; ++r) {
      const auto i = static_cast<Eigen::Index>(rows[static_cast<std::size_t>(r)]);
      y[r] = y_[i];
      z[r] = z_[i];
      x.row(r) = x_.row(i);
    }
    return {std::move(y), std::move(z), kind_, std::move(x), column_names_,
            outcome_name_, exposure_name_, level_labels_};
  }

  /// Same units with the exposure replaced (e.g. binned dose -> labels).
  [[nodiscard]] Dataset with_exposure(Eigen::VectorXd z, ExposureKind kind) const {
    return {y_, std::move(z), kind, x_, column_names_, outcome_name_,
            exposure_name_, {}};
  }

 private:
  void validate() {
    if (y_.size() == 0) throw ArgumentError("dataset must have n >= 1 rows");
    if (z_.size() != y_.size() || x_.rows() != y_.size()) {
      throw ArgumentError("outcome, exposure and covariate rows differ in length");
    }
    if (column_names_.empty()) {
      for (Eigen::Index j = 0; j < x_.cols(); ++j) {
        column_names_.push_back("x" + std::to_string(j + 1));
      }
    }
    if (column_names_.size() != static_cast<std::size_t>(x_.cols())) {
      throw ArgumentError("column_names size does not match covariate count");
    }
    if (!y_.allFinite() || !z_.allFinite() || !x_.allFinite()) {
      throw DomainError("dataset contains non-finite values");
    }
    if (kind_.is_binary()) {
      for (double v : z_) {
        if (v != 0.0 && v != 1.0) throw DomainError("binary exposure must be 0/1");
      }
    } else if (kind_.is_categorical()) {
      std::vector<int> seen(static_cast<std::size_t>(kind_.levels), 0);
      for (double v : z_) {
        const long level = std::lround(v);
        if (static_cast<double>(level) != v || level < 1 || level > kind_.levels) {
          throw DomainError("categorical exposure must be integer labels 1..J");
        }
        seen[static_cast<std::size_t>(level - 1)] = 1;
      }
      if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
        throw DegenerateExposureError("not every exposure level is observed");
      }
      if (level_labels_.empty()) {
        for (int j = 1; j <= kind_.levels; ++j) level_labels_.push_back(std::to_string(j));
      }
    }
  }

  Eigen::VectorXd y_;
  Eigen::VectorXd z_;
  ExposureKind kind_;
  Eigen::MatrixXd x_;
  std::vector<std::string> column_names_;
  std::string outcome_name_;
  std::string exposure_name_;
  std::vector<std::string> level_labels_;
};

// ---------------------------------------------------------------------------
// CSV

namespace csv {

/// Splits RFC-4180 text into records of fields. Quoted fields may contain
/// separators, doubled quotes and line breaks.
inline std::vector<std::vector<std::string>> parse(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    if (!(row.size() == 1 && row[0].empty())) rows.push_back(std::move(row));
    row.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && !field_started) {
      in_quotes = true;
      field_started = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\n') {
      end_row();
    } else if (c == '\r') {
      if (i + 1 < text.size() && text[i + 1] == '\n') continue;
      end_row();
    } else {
      field.push_back(c);
      field_started = true;
    }
  }
  if (in_quotes) throw ParseError(rows.size(), "unterminated quoted field");
  if (!field.empty() || !row.empty()) end_row();
  return rows;
}

inline std::string escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

/// Shortest decimal form that parses back to exactly `v`.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

inline bool is_missing(std::string_view s) {
  s = trim(s);
  return s.empty() || s == "NA" || s == "N/A" || s == "NaN" || s == "nan" ||
         s == "null";
}

inline std::optional<double> to_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) return std::nullopt;
  return v;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace csv

enum class Transform { kIdentity, kLog10, kLn };

inline Transform parse_transform(const std::string& name) {
  if (name == "identity") return Transform::kIdentity;
  if (name == "log10") return Transform::kLog10;
  if (name == "ln" || name == "log") return Transform::kLn;
  throw ArgumentError("unknown transform '" + name + "'");
}

/// Maps CSV columns onto dataset roles.
struct CsvSchema {
  std::string outcome = "y";
  std::string exposure = "z";
  std::vector<std::string> covariates;
  ExposureTag exposure_tag = ExposureTag::kBinary;
  std::map<std::string, Transform> transforms;  // absent = identity
};

struct LoadReport {
  std::size_t rows_read = 0;
  std::size_t rows_dropped = 0;  // any mapped field missing
  std::size_t rows_kept = 0;
  std::vector<std::string> warnings;

  [[nodiscard]] nlohmann::json to_json() const {
    return {{"rows_read", rows_read},
            {"rows_dropped", rows_dropped},
            {"rows_kept", rows_kept},
            {"warnings", warnings}};
  }
};

namespace detail {

inline double apply_transform(Transform t, double v, std::size_t row,
                              const std::string& column) {
  switch (t) {
    case Transform::kIdentity:
      return v;
    case Transform::kLog10:
    case Transform::kLn:
      if (!(v > 0.0)) {
        throw DomainError("row " + std::to_string(row) + ": log transform of " +
                          "non-positive value in column '" + column + "'");
      }
      return t == Transform::kLog10 ? std::log10(v) : std::log(v);
  }
  return v;
}

}  // namespace detail

/// Parses CSV text into a Dataset. Rows with a missing mapped field are
/// dropped; `report` (optional) receives the counts. Row indices in errors
/// are 1-based data rows (header excluded).
inline Dataset parse_csv(std::string_view text, const CsvSchema& schema,
                         LoadReport* report = nullptr) {
  auto rows = csv::parse(text);
  if (rows.empty()) throw SchemaError("CSV has no header row");
  const auto& header = rows.front();
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t c = 0; c < header.size(); ++c) {
    index.emplace(std::string(csv::trim(header[c])), c);
  }
  auto column = [&](const std::string& name) {
    auto it = index.find(name);
    if (it == index.end()) throw SchemaError("missing column '" + name + "'");
    return it->second;
  };
  for (const auto& [name, t] : schema.transforms) {
    (void)t;
    if (name != schema.outcome && name != schema.exposure &&
        std::find(schema.covariates.begin(), schema.covariates.end(), name) ==
            schema.covariates.end()) {
      throw SchemaError("transform given for unmapped column '" + name + "'");
    }
  }
  const std::size_t y_col = column(schema.outcome);
  const std::size_t z_col = column(schema.exposure);
  std::vector<std::size_t> x_cols;
  for (const auto& name : schema.covariates) x_cols.push_back(column(name));
  auto transform_of = [&](const std::string& name) {
    auto it = schema.transforms.find(name);
    return it == schema.transforms.end() ? Transform::kIdentity : it->second;
  };
  const bool categorical = schema.exposure_tag == ExposureTag::kCategorical;
  if (categorical && transform_of(schema.exposure) != Transform::kIdentity) {
    throw SchemaError("categorical exposure cannot be transformed");
  }

  LoadReport rep;
  std::vector<double> ys;
  std::vector<double> zs;
  std::vector<double> xs;
  std::vector<std::string> level_labels;
  std::unordered_map<std::string, int> level_code;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    ++rep.rows_read;
    if (row.size() != header.size()) {
      throw ParseError(r, "expected " + std::to_string(header.size()) +
                              " fields, found " + std::to_string(row.size()));
    }
    bool missing = csv::is_missing(row[y_col]) || csv::is_missing(row[z_col]);
    for (std::size_t c : x_cols) missing = missing || csv::is_missing(row[c]);
    if (missing) {
      ++rep.rows_dropped;
      continue;
    }
    auto number = [&](std::size_t c, const std::string& name) {
      auto v = csv::to_double(row[c]);
      if (!v) {
        throw ParseError(r, "non-numeric value '" + row[c] + "' in column '" +
                                name + "'");
      }
      return detail::apply_transform(transform_of(name), *v, r, name);
    };
    ys.push_back(number(y_col, schema.outcome));
    if (categorical) {
      const std::string label(csv::trim(row[z_col]));
      auto [it, inserted] =
          level_code.emplace(label, static_cast<int>(level_labels.size()) + 1);
      if (inserted) level_labels.push_back(label);
      zs.push_back(it->second);
    } else {
      zs.push_back(number(z_col, schema.exposure));
    }
    for (std::size_t k = 0; k < x_cols.size(); ++k) {
      xs.push_back(number(x_cols[k], schema.covariates[k]));
    }
  }
  rep.rows_kept = ys.size();
  if (rep.rows_dropped > 0) {
    rep.warnings.push_back(std::to_string(rep.rows_dropped) +
                           " row(s) dropped for missing values");
  }
  if (ys.empty()) throw SchemaError("no complete rows in CSV");

  const auto n = static_cast<Eigen::Index>(ys.size());
  const auto p = static_cast<Eigen::Index>(x_cols.size());
  Eigen::MatrixXd x(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      x(i, j) = xs[static_cast<std::size_t>(i * p + j)];
    }
  }
  ExposureKind kind = ExposureKind::continuous();
  if (schema.exposure_tag == ExposureTag::kBinary) {
    kind = ExposureKind::binary();
  } else if (categorical) {
    kind = ExposureKind::categorical(static_cast<int>(level_labels.size()));
  }
  if (report != nullptr) *report = rep;
  return {Eigen::Map<Eigen::VectorXd>(ys.data(), n),
          Eigen::Map<Eigen::VectorXd>(zs.data(), n),
          kind,
          std::move(x),
          schema.covariates,
          schema.outcome,
          schema.exposure,
          std::move(level_labels)};
}

inline Dataset load_csv(const std::string& path, const CsvSchema& schema,
                        LoadReport* report = nullptr) {
  return parse_csv(csv::read_file(path), schema, report);
}

/// CSV text with header (outcome, exposure, covariates...) at 17 digits.
inline std::string to_csv(const Dataset& data) {
  std::string out = csv::escape(data.outcome_name()) + "," +
                    csv::escape(data.exposure_name());
  for (const auto& name : data.column_names()) out += "," + csv::escape(name);
  out += "\n";
  const auto labels = data.kind().is_categorical() ? data.labels() : std::vector<int>{};
  for (std::size_t i = 0; i < data.n(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    out += csv::format_double(data.y()[r]);
    out += ",";
    if (data.kind().is_categorical()) {
      out += csv::escape(data.level_labels()[static_cast<std::size_t>(labels[i] - 1)]);
    } else if (data.kind().is_binary()) {
      out += data.z()[r] == 1.0 ? "1" : "0";
    } else {
      out += csv::format_double(data.z()[r]);
    }
    for (Eigen::Index j = 0; j < data.x().cols(); ++j) {
      out += "," + csv::format_double(data.x()(r, j));
    }
    out += "\n";
  }
  return out;
}

inline void write_csv(const std::string& path, const Dataset& data) {
  csv::write_file(path, to_csv(data));
}

/// Schema that reads back a file produced by write_csv.
inline CsvSchema schema_of(const Dataset& data) {
  return {data.outcome_name(), data.exposure_name(), data.column_names(),
          data.kind().tag, {}};
}

// ---------------------------------------------------------------------------
// Group summaries

struct ColumnSummary {
  std::string column;
  double mean = 0.0;
  double sd = 0.0;  // n-1 denominator; NaN when the group has one row
};

struct GroupSummary {
  int group = 0;
  std::string name;
  std::size_t count = 0;
  std::vector<ColumnSummary> columns;
};

struct SummaryTable {
  std::vector<GroupSummary> groups;
  std::vector<std::string> warnings;
};

namespace detail {

inline ColumnSummary mean_sd(std::string column, const std::vector<double>& v) {
  ColumnSummary s{std::move(column), 0.0, std::numeric_limits<double>::quiet_NaN()};
  double sum = 0.0;
  for (double x : v) sum += x;
  s.mean = sum / static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return s;
}

}  // namespace detail

/// Per-group mean and SD of outcome, exposure and every covariate.
/// `group_of_row[i]` is in [0, num_groups); empty groups are skipped.
inline SummaryTable summarize(const Dataset& data, std::span<const int> group_of_row,
                              int num_groups,
                              std::vector<std::string> group_names = {}) {
  if (group_of_row.size() != data.n()) {
    throw ArgumentError("group assignment length does not match dataset");
  }
  SummaryTable table;
  std::vector<std::string> names{data.outcome_name(), data.exposure_name()};
  names.insert(names.end(), data.column_names().begin(), data.column_names().end());
  for (int g = 0; g < num_groups; ++g) {
    std::vector<Eigen::Index> rows;
    for (std::size_t i = 0; i < data.n(); ++i) {
      if (group_of_row[i] == g) rows.push_back(static_cast<Eigen::Index>(i));
    }
    const std::string name = static_cast<std::size_t>(g) < group_names.size()
                                 ? group_names[static_cast<std::size_t>(g)]
                                 : std::to_string(g);
    if (rows.empty()) {
      table.warnings.push_back("group '" + name + "' is empty and was excluded");
      continue;
    }
    GroupSummary gs{g, name, rows.size(), {}};
    for (std::size_t c = 0; c < names.size(); ++c) {
      std::vector<double> v;
      v.reserve(rows.size());
      for (auto i : rows) {
        if (c == 0) {
          v.push_back(data.y()[i]);
        } else if (c == 1) {
          v.push_back(data.z()[i]);
        } else {
          v.push_back(data.x()(i, static_cast<Eigen::Index>(c - 2)));
        }
      }
      gs.columns.push_back(detail::mean_sd(names[c], v));
    }
    table.groups.push_back(std::move(gs));
  }
  return table;
}

/// Groups by exposure level (binary 0/1 or categorical 1..J).
inline SummaryTable summarize_by_exposure(const Dataset& data) {
  if (data.kind().is_continuous()) {
    throw ArgumentError("continuous exposure: bin it first and pass groups");
  }
  auto labels = data.labels();
  const bool binary = data.kind().is_binary();
  for (auto& l : labels) l = binary ? l : l - 1;
  std::vector<std::string> names;
  if (binary) {
    names = {"0", "1"};
  } else {
    names = data.level_labels();
  }
  return summarize(data, labels, data.kind().levels, names);
}

}  // namespace wqte

#endif  // WQTE_DATA_HPP
