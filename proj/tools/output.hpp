#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "uogp/combfactor.hpp"
#include "uogp/quadrature.hpp"

namespace uogp::cli {

/// Provenance block embedded in every emitted result file: enough to rerun
/// the exact command and to diff result files across tool versions.
struct RunManifest {
  std::string command;
  /// Flag values in the order they matter for reproduction.
  std::vector<std::pair<std::string, std::string>> params;
  QuadratureConfig quadrature{};
  std::string mode;
  std::uint64_t seed = 0;
  std::string version;
  double wall_seconds = 0.0;
};

/// One result row; ordered so CSV columns and JSON keys line up.
using Record = nlohmann::ordered_json;

struct ResultSet {
  std::vector<std::string> columns;
  std::vector<Record> records;
};

const char* mode_name(OverlapMode mode);
const char* quadrature_mode_name(QuadratureConfig::Mode mode);

std::string format_int_list(const std::vector<int>& v);
std::string format_real_list(const std::vector<double>& v, int precision = 6);

nlohmann::ordered_json manifest_json(const RunManifest& manifest);

/// CSV: '#'-prefixed manifest lines, then a header row, then records.
/// UTF-8 throughout, '.' decimal separator, RFC-style quoting.
void write_csv(std::ostream& out, const ResultSet& set,
               const RunManifest& manifest);

/// JSON: array with one object per record, each embedding the manifest.
void write_json(std::ostream& out, const ResultSet& set,
                const RunManifest& manifest);

/// Dispatch on format name ("csv" or "json") and write to `path`.
void write_result_file(const std::string& path, const std::string& format,
                       const ResultSet& set, const RunManifest& manifest);

}  // namespace uogp::cli
