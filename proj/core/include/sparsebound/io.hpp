#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "sparsebound/bounds.hpp"
#include "sparsebound/graphs.hpp"
#include "sparsebound/matrix.hpp"
#include "sparsebound/stats.hpp"

namespace sparsebound {

std::string library_version();

// ---- MatrixMarket ---------------------------------------------------------

/// Reads `%%MatrixMarket matrix {array|coordinate} {real|integer}
/// {general|symmetric|skew-symmetric}`. Coordinates are 1-indexed and
/// missing coordinates are zero. Throws ParseError (with line number) on
/// malformed input and UnsupportedField for complex, pattern or hermitian
/// files; IoError if the file cannot be opened.
DenseMatrix read_matrix(const std::filesystem::path& path);
DenseMatrix read_matrix(std::istream& in);

enum class MatrixFormat { Array, Coordinate };

/// Entries are written with 17 significant digits, so reading back gives
/// the same doubles. Coordinate output lists nonzeros only.
void write_matrix(const DenseMatrix& a, std::ostream& out, MatrixFormat format);
void write_matrix(const DenseMatrix& a, const std::filesystem::path& path, MatrixFormat format);

// ---- Edge lists -------------------------------------------------------------

/// One `j k weight` triple per line, 0-indexed; `#` starts a comment. An
/// optional `vertices V` line fixes the vertex count, otherwise it is the
/// largest index plus one.
WeightedGraph read_edge_list(std::istream& in);
WeightedGraph read_edge_list(const std::filesystem::path& path);

// ---- Reports ----------------------------------------------------------------

using Cell = std::variant<std::string, double, std::int64_t, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  /// Throws ParameterOutOfRange if the row width differs from the header.
  void add_row(std::vector<Cell> row);
};

/// A command's output: the table plus what is needed to reproduce it.
struct Report {
  std::string command;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::uint64_t seed = 0;
  std::string version = library_version();
  /// ISO 8601 UTC; omitted when empty.
  std::string timestamp;
  Table table;
  /// Extra structured output, JSON only; omitted when null.
  nlohmann::ordered_json details;
};

enum class ReportFormat { Csv, Json };
ReportFormat parse_report_format(std::string_view text);

std::string utc_timestamp();

/// CSV: `# key: value` metadata lines, then a header row, then data rows.
std::string to_csv(const Report& r);
/// A single JSON object with the metadata and `rows` as objects keyed by
/// column.
nlohmann::ordered_json to_json(const Report& r);

void write_report(const Report& r, std::ostream& out, ReportFormat format);
/// Throws IoError if the file cannot be written.
void write_report(const Report& r, const std::filesystem::path& path, ReportFormat format);

/// Columns norm, trials, mean, std_err, q05 … q95.
Table trial_stats_table(std::span<const TrialStats> stats);
/// Columns trial then one per norm; one row per retained trial.
Table per_trial_table(std::span<const TrialStats> stats);

// ---- Bound reports ----------------------------------------------------------

nlohmann::ordered_json to_json(const BoundReport& r);
/// Throws ParseError (line 0) on a missing or mistyped field.
BoundReport bound_report_from_json(const nlohmann::json& j);

}  // namespace sparsebound
