#pragma once

// Shared helpers for the ltcn command-line tool: grid parsing, CSV output,
// run manifests.

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ltcn/format.hpp"
#include "ltcn/types.hpp"

namespace ltcn::cli {

/// Parse "start:end:step" (inclusive end) or a single value.
std::vector<double> parse_double_grid(const std::string& spec, const std::string& flag);
std::vector<int> parse_int_grid(const std::string& spec, const std::string& flag);

/// Minimal CSV field quoting: quotes fields containing the delimiter,
/// quotes or newlines.
std::string csv_escape(const std::string& field, char delimiter = ',');

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  void row(const std::vector<std::string>& cells);
  static std::string number(double value) { return format_double(value); }

 private:
  std::ofstream out_;
  std::size_t width_;
  std::string path_;
};

/// Every command writes a manifest next to its primary output so the run can
/// be replayed: resolved flags, seed, inputs, outputs, artifact version.
void write_manifest(const std::string& output_path, const std::string& subcommand,
                    const nlohmann::json& flags, const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs);

/// Read a feature-only CSV for prediction. Accepts exactly `features`
/// numeric columns, or features+1 columns whose trailing column is treated
/// as a label and dropped. Returns a 0-row matrix for a header-only file.
Matrix read_feature_csv(const std::string& path, Index features, char delimiter,
                        bool has_header);

} // namespace ltcn::cli
