// CSV tables, SVG line plots and run manifests.
#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "intricacy/harness/config.hpp"

namespace intricacy::harness {

/// Comma-separated table with a header row. Numbers use the shortest
/// round-trip form, so identical runs give byte-identical files.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::vector<std::string> header);

  void row(const std::vector<double>& values);
  /// Mixed row of preformatted cells.
  void row_text(const std::vector<std::string>& cells);

 private:
  std::ofstream out_;
  std::size_t columns_;
};

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
};

/// Single-panel line plot. Throws std::invalid_argument if there is no
/// series or a series has fewer than two finite points.
void emit_plot(const PlotSpec& spec, const std::filesystem::path& path);

/// SVG document as a string (emit_plot writes this).
std::string render_svg(const PlotSpec& spec);

struct RunManifest {
  std::string subcommand;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<std::string> outputs;
  std::map<std::string, bool> flags;
  std::map<std::string, double> metrics;
  double wall_seconds = 0.0;
  int exit_code = 0;

  void write(const std::filesystem::path& path) const;
};

const char* tool_version();

}  // namespace intricacy::harness
