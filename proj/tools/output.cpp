#include "output.hpp"

#include <fstream>

#include <fmt/format.h>

#include "uogp/errors.hpp"

namespace uogp::cli {
namespace {

std::string csv_escape(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string quoted = "\"";
  for (char c : cell) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::string cell_text(const Record& record, const std::string& column) {
  const auto& value = record.at(column);
  return csv_escape(value.is_string() ? value.get<std::string>()
                                      : value.dump());
}

}  // namespace

const char* mode_name(OverlapMode mode) {
  return mode == OverlapMode::literal ? "literal" : "level-consistent";
}

const char* quadrature_mode_name(QuadratureConfig::Mode mode) {
  return mode == QuadratureConfig::Mode::gauss_hermite ? "gauss-hermite"
                                                       : "adaptive";
}

std::string format_int_list(const std::vector<int>& v) {
  return fmt::format("[{}]", fmt::join(v, ","));
}

std::string format_real_list(const std::vector<double>& v, int precision) {
  std::string body;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) body += ",";
    body += fmt::format("{:.{}f}", v[i], precision);
  }
  return fmt::format("[{}]", body);
}

nlohmann::ordered_json manifest_json(const RunManifest& manifest) {
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [key, value] : manifest.params) params[key] = value;
  return nlohmann::ordered_json{
      {"command", manifest.command},
      {"params", std::move(params)},
      {"quadrature",
       {{"nodes_per_level", manifest.quadrature.nodes_per_level},
        {"truncation", manifest.quadrature.truncation},
        {"mode", quadrature_mode_name(manifest.quadrature.mode)}}},
      {"mode", manifest.mode},
      {"seed", manifest.seed},
      {"version", manifest.version},
      {"wall_seconds", manifest.wall_seconds},
  };
}

void write_csv(std::ostream& out, const ResultSet& set,
               const RunManifest& manifest) {
  out << fmt::format("# uogp {}\n# command: {}\n", manifest.version,
                     manifest.command);
  for (const auto& [key, value] : manifest.params)
    out << fmt::format("# {}: {}\n", key, value);
  out << fmt::format("# quadrature: {} nodes={} truncation={:g}\n",
                     quadrature_mode_name(manifest.quadrature.mode),
                     manifest.quadrature.nodes_per_level,
                     manifest.quadrature.truncation);
  if (!manifest.mode.empty())
    out << fmt::format("# mode: {}\n", manifest.mode);
  out << fmt::format("# seed: {}\n# wall_seconds: {:.3f}\n", manifest.seed,
                     manifest.wall_seconds);
  out << fmt::format("{}\n", fmt::join(set.columns, ","));
  for (const auto& record : set.records) {
    std::string line;
    for (std::size_t i = 0; i < set.columns.size(); ++i) {
      if (i > 0) line += ",";
      line += cell_text(record, set.columns[i]);
    }
    out << line << "\n";
  }
}

void write_json(std::ostream& out, const ResultSet& set,
                const RunManifest& manifest) {
  nlohmann::ordered_json results = nlohmann::ordered_json::array();
  nlohmann::ordered_json embedded = manifest_json(manifest);
  for (const auto& record : set.records) {
    nlohmann::ordered_json item = record;
    item["manifest"] = embedded;
    results.push_back(std::move(item));
  }
  out << results.dump(2) << "\n";
}

void write_result_file(const std::string& path, const std::string& format,
                       const ResultSet& set, const RunManifest& manifest) {
  std::ofstream out(path);
  if (!out)
    raise(ErrorCode::InvalidArgument,
          fmt::format("cannot open output file '{}'", path));
  if (format == "json")
    write_json(out, set, manifest);
  else
    write_csv(out, set, manifest);
}

}  // namespace uogp::cli
