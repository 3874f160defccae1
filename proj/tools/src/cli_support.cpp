#include "cli_support.hpp"

#include <charconv>
#include <cmath>

#include "ltcn/log.hpp"
#include "ltcn/version.hpp"

namespace ltcn::cli {

namespace {

double parse_double(const std::string& text, const std::string& flag) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw std::invalid_argument(flag + ": '" + text + "' is not a number");
  return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string::size_type start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    if (pos == std::string::npos) {
      parts.push_back(text.substr(start));
      break;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
  return parts;
}

} // namespace

std::vector<double> parse_double_grid(const std::string& spec, const std::string& flag) {
  const auto parts = split(spec, ':');
  if (parts.size() == 1) return {parse_double(parts[0], flag)};
  if (parts.size() != 3)
    throw std::invalid_argument(flag + ": expected a single value or start:end:step, got '" +
                                spec + "'");
  const double start = parse_double(parts[0], flag);
  const double end = parse_double(parts[1], flag);
  const double step = parse_double(parts[2], flag);
  if (step <= 0.0) throw std::invalid_argument(flag + ": step must be positive");
  if (end < start) throw std::invalid_argument(flag + ": end must be >= start");
  std::vector<double> values;
  for (int i = 0;; ++i) {
    const double v = start + i * step;
    if (v > end + step * 1e-9) break;
    values.push_back(std::min(v, end));
  }
  return values;
}

std::vector<int> parse_int_grid(const std::string& spec, const std::string& flag) {
  std::vector<int> values;
  for (double v : parse_double_grid(spec, flag)) {
    const int i = static_cast<int>(std::llround(v));
    if (std::abs(v - i) > 1e-9)
      throw std::invalid_argument(flag + ": expected integers, got " + format_double(v));
    values.push_back(i);
  }
  return values;
}

std::string csv_escape(const std::string& field, char delimiter) {
  if (field.find_first_of(std::string{delimiter, '"', '\n', '\r'}) == std::string::npos)
    return field;
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : out_(path), width_(header.size()), path_(path) {
  if (!out_) throw std::runtime_error("cannot write '" + path + "'");
  row(header);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != width_)
    throw std::logic_error("csv row width mismatch writing '" + path_ + "'");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) out_ << ',';
    out_ << csv_escape(cells[i]);
  }
  out_ << '\n';
  if (!out_) throw std::runtime_error("failed writing '" + path_ + "'");
}

void write_manifest(const std::string& output_path, const std::string& subcommand,
                    const nlohmann::json& flags, const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs) {
  nlohmann::json doc;
  doc["artifact_version"] = kVersion;
  doc["manifest_version"] = kModelFormatVersion;
  doc["subcommand"] = subcommand;
  doc["flags"] = flags;
  doc["inputs"] = inputs;
  doc["outputs"] = outputs;
  const std::string path = output_path + ".manifest.json";
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << doc.dump(2) << '\n';
}

Matrix read_feature_csv(const std::string& path, Index features, char delimiter,
                        bool has_header) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");

  std::vector<std::vector<double>> rows;
  std::string line;
  bool header_pending = has_header;
  std::size_t data_row = 0;
  bool dropped_label = false;

  while (std::getline(in, line)) {
    // Trim trailing CR and skip blank lines.
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    std::string probe = line;
    probe.erase(0, probe.find_first_not_of(" \t"));
    if (probe.empty()) continue;

    const auto cells = split(line, delimiter);
    if (header_pending) {
      header_pending = false;
      continue;
    }
    ++data_row;
    const auto found = static_cast<Index>(cells.size());
    if (found != features && found != features + 1)
      throw std::runtime_error("'" + path + "': expected " + std::to_string(features) +
                               " feature columns, found " + std::to_string(found) + " at row " +
                               std::to_string(data_row));
    if (found == features + 1 && !dropped_label) {
      dropped_label = true;
      log_info("ignoring trailing label column in '" + path + "'");
    }
    std::vector<double> values(static_cast<std::size_t>(features));
    for (Index c = 0; c < features; ++c) {
      const std::string cell = cells[static_cast<std::size_t>(c)];
      std::string trimmed = cell;
      trimmed.erase(0, trimmed.find_first_not_of(" \t"));
      const auto last = trimmed.find_last_not_of(" \t");
      if (last != std::string::npos) trimmed.erase(last + 1);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(trimmed.data(), trimmed.data() + trimmed.size(), v);
      if (ec != std::errc() || ptr != trimmed.data() + trimmed.size() || !std::isfinite(v))
        throw std::runtime_error("'" + path + "': non-numeric feature value '" + cell +
                                 "' at row " + std::to_string(data_row) + ", column " +
                                 std::to_string(c + 1));
      values[static_cast<std::size_t>(c)] = v;
    }
    rows.push_back(std::move(values));
  }

  Matrix X(static_cast<Index>(rows.size()), features);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (Index c = 0; c < features; ++c)
      X(static_cast<Index>(r), c) = rows[r][static_cast<std::size_t>(c)];
  return X;
}

} // namespace ltcn::cli
