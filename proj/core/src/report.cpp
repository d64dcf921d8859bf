#include <chrono>
#include <ctime>
#include <fstream>
#include <ostream>
#include <sstream>

#include "sparsebound/error.hpp"
#include "sparsebound/io.hpp"
#include "text.hpp"

namespace sparsebound {
namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string cell_text(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return csv_escape(v);
        } else if constexpr (std::is_same_v<T, double>) {
          return detail::format_shortest(v);
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else {
          return std::to_string(v);
        }
      },
      c);
}

nlohmann::ordered_json cell_json(const Cell& c) {
  return std::visit([](const auto& v) { return nlohmann::ordered_json(v); }, c);
}

std::string quantile_column(double level) {
  const int pct = static_cast<int>(level * 100.0 + 0.5);
  return pct < 10 ? "q0" + std::to_string(pct) : "q" + std::to_string(pct);
}

}  // namespace

std::string library_version() { return SPARSEBOUND_VERSION; }

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size())
    throw ParameterOutOfRange("table row has " + std::to_string(row.size()) + " cells, expected " +
                              std::to_string(columns.size()));
  rows.push_back(std::move(row));
}

ReportFormat parse_report_format(std::string_view text) {
  if (text == "csv") return ReportFormat::Csv;
  if (text == "json") return ReportFormat::Json;
  throw ParameterOutOfRange("unknown report format '" + std::string(text) + "' (csv or json)");
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string to_csv(const Report& r) {
  std::ostringstream out;
  out << "# command: " << r.command << '\n';
  out << "# version: " << r.version << '\n';
  out << "# seed: " << r.seed << '\n';
  if (!r.timestamp.empty()) out << "# timestamp: " << r.timestamp << '\n';
  out << "# config: " << r.config.dump() << '\n';
  for (std::size_t i = 0; i < r.table.columns.size(); ++i)
    out << (i ? "," : "") << csv_escape(r.table.columns[i]);
  out << '\n';
  for (const auto& row : r.table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell_text(row[i]);
    out << '\n';
  }
  return out.str();
}

nlohmann::ordered_json to_json(const Report& r) {
  nlohmann::ordered_json j;
  j["command"] = r.command;
  j["version"] = r.version;
  j["seed"] = r.seed;
  if (!r.timestamp.empty()) j["timestamp"] = r.timestamp;
  j["config"] = r.config;
  j["columns"] = r.table.columns;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : r.table.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[r.table.columns[i]] = cell_json(row[i]);
    rows.push_back(std::move(obj));
  }
  j["rows"] = std::move(rows);
  if (!r.details.is_null()) j["details"] = r.details;
  return j;
}

void write_report(const Report& r, std::ostream& out, ReportFormat format) {
  if (format == ReportFormat::Csv) {
    out << to_csv(r);
  } else {
    out << to_json(r).dump(2) << '\n';
  }
}

void write_report(const Report& r, const std::filesystem::path& path, ReportFormat format) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_report(r, out, format);
  if (!out.flush()) throw IoError("write to '" + path.string() + "' failed");
}

Table trial_stats_table(std::span<const TrialStats> stats) {
  Table t;
  t.columns = {"norm", "trials", "mean", "std_err"};
  for (double level : kQuantileLevels) t.columns.push_back(quantile_column(level));
  for (const auto& s : stats) {
    std::vector<Cell> row = {s.norm.name(), static_cast<std::int64_t>(s.trials), s.mean, s.std_err};
    for (double level : kQuantileLevels) {
      const auto it = s.quantiles.find(level);
      row.emplace_back(it == s.quantiles.end() ? std::nan("") : it->second);
    }
    t.add_row(std::move(row));
  }
  return t;
}

Table per_trial_table(std::span<const TrialStats> stats) {
  Table t;
  t.columns = {"trial"};
  std::size_t count = 0;
  for (const auto& s : stats) {
    t.columns.push_back(s.norm.name());
    if (!s.per_trial.empty() && count != 0 && s.per_trial.size() != count)
      throw ParameterOutOfRange("per-trial series differ in length");
    count = std::max(count, s.per_trial.size());
  }
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<Cell> row = {static_cast<std::int64_t>(i)};
    for (const auto& s : stats) row.emplace_back(s.per_trial.empty() ? std::nan("") : s.per_trial[i]);
    t.add_row(std::move(row));
  }
  return t;
}

nlohmann::ordered_json to_json(const BoundReport& r) {
  nlohmann::ordered_json j;
  j["norm"] = r.norm.name();
  if (r.norm.tag() == NormTag::WeightedTwoToInf) j["norm_weights"] = r.norm.weights();
  j["value"] = r.value;
  nlohmann::ordered_json terms = nlohmann::ordered_json::object();
  for (const auto& [name, v] : r.terms) terms[name] = v;
  j["terms"] = std::move(terms);
  j["constant_mode"] = to_string(r.constant_mode);
  j["scale"] = r.scale;
  if (!r.weights.empty()) j["weights"] = r.weights;
  return j;
}

BoundReport bound_report_from_json(const nlohmann::json& j) {
  try {
    BoundReport r;
    const auto name = j.at("norm").get<std::string>();
    r.norm = name == "weighted_two_to_inf"
                 ? NormKind::weighted_two_to_inf(j.at("norm_weights").get<std::vector<double>>())
                 : NormKind::parse(name);
    r.value = j.at("value").get<double>();
    r.terms = j.at("terms").get<std::map<std::string, double>>();
    r.constant_mode = parse_constant_mode(j.at("constant_mode").get<std::string>());
    r.scale = j.at("scale").get<double>();
    if (j.contains("weights")) r.weights = j.at("weights").get<std::vector<double>>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("bound report: ") + e.what());
  } catch (const ParameterOutOfRange& e) {
    throw ParseError(0, std::string("bound report: ") + e.what());
  }
}

}  // namespace sparsebound
