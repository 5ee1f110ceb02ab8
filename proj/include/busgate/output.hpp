#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace busgate::io {

enum class Format { Csv, Json };

Format parse_format(const std::string& s);
std::string extension(Format f);

/// Column-major data set written as one file.
struct Table {
  std::string name;  // file stem
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Header block carried by every output file. Nothing time- or host-dependent
/// goes in here, so reruns produce identical bytes.
struct Metadata {
  nlohmann::json scenario;
  std::string engine;
  std::string version;
  nlohmann::json tolerances;
  std::vector<std::string> notes;
};

std::string code_version();
/// Tolerances the engines and map checks run with by default.
nlohmann::json default_tolerances();

/// %.12g
std::string format_number(double x);

std::string render(const Table& table, const Metadata& meta, Format format);
/// Writes <dir>/<table.name>.<ext>, creating dir if needed. Returns the path.
std::filesystem::path write_table(const std::filesystem::path& dir, const Table& table, const Metadata& meta,
                                  Format format);

}  // namespace busgate::io
