#include "busgate/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "busgate/common.hpp"

#ifndef BUSGATE_VERSION
#define BUSGATE_VERSION "0.0.0"
#endif

namespace busgate::io {

Format parse_format(const std::string& s) {
  if (s == "csv") return Format::Csv;
  if (s == "json") return Format::Json;
  throw ConfigError("unknown output format '" + s + "' (expected csv or json)");
}

std::string extension(Format f) { return f == Format::Csv ? "csv" : "json"; }

std::string code_version() { return BUSGATE_VERSION; }

nlohmann::json default_tolerances() {
  return {{"ffq_ramp_step_change", 1e-9},
          {"mbq_krylov_error", 1e-10},
          {"mbq_ramp_step_change", 1e-9},
          {"lanczos_residual", 1e-10},
          {"optimizer_bracket", 1e-9},
          {"map_hermiticity", 1e-9},
          {"map_trace", 1e-8},
          {"choi_min", -1e-8}};
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

namespace {

// Numbers go through format_number so JSON and CSV carry the same digits.
nlohmann::json rounded(double x) {
  if (!std::isfinite(x)) return format_number(x);
  return std::stod(format_number(x));
}

nlohmann::json rounded_tree(const nlohmann::json& j) {
  if (j.is_number_float()) return rounded(j.get<double>());
  if (j.is_array() || j.is_object()) {
    nlohmann::json out = j;
    for (auto it = out.begin(); it != out.end(); ++it) *it = rounded_tree(*it);
    return out;
  }
  return j;
}

}  // namespace

std::string render(const Table& table, const Metadata& meta, Format format) {
  for (const auto& row : table.rows)
    if (row.size() != table.columns.size())
      throw ConfigError("table '" + table.name + "' has a row of the wrong width");
  std::ostringstream os;
  if (format == Format::Csv) {
    os << "# scenario: " << rounded_tree(meta.scenario).dump() << '\n';
    os << "# engine: " << meta.engine << '\n';
    os << "# version: " << meta.version << '\n';
    os << "# tolerances: " << rounded_tree(meta.tolerances).dump() << '\n';
    for (const auto& n : meta.notes) os << "# note: " << n << '\n';
    for (std::size_t c = 0; c < table.columns.size(); ++c) os << (c ? "," : "") << table.columns[c];
    os << '\n';
    for (const auto& row : table.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << format_number(row[c]);
      os << '\n';
    }
    return os.str();
  }
  nlohmann::ordered_json doc;
  doc["metadata"] = {{"scenario", rounded_tree(meta.scenario)},
                     {"engine", meta.engine},
                     {"version", meta.version},
                     {"tolerances", rounded_tree(meta.tolerances)},
                     {"notes", meta.notes}};
  doc["columns"] = table.columns;
  auto rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    auto r = nlohmann::json::array();
    for (double x : row) r.push_back(rounded(x));
    rows.push_back(r);
  }
  doc["rows"] = rows;
  return doc.dump(2) + "\n";
}

std::filesystem::path write_table(const std::filesystem::path& dir, const Table& table, const Metadata& meta,
                                  Format format) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
  const auto path = dir / (table.name + "." + extension(format));
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open " + path.string() + " for writing");
  f << render(table, meta, format);
  if (!f) throw ConfigError("failed writing " + path.string());
  return path;
}

}  // namespace busgate::io
