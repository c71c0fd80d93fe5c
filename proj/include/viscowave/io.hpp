#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "viscowave/asymptotics.hpp"
#include "viscowave/grid.hpp"
#include "viscowave/problem.hpp"
#include "viscowave/solution_field.hpp"

namespace viscowave::io {

inline constexpr int kSchemaVersion = 1;

/// Shortest round-trip decimal form; identical input gives identical text.
std::string format_double(double v);

/// Numeric CSV with a single header row. Blank lines are skipped.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

CsvTable read_csv(const std::filesystem::path& path);

/// `x,value` file on a uniform grid starting at x = 0.
SpaceField read_space_field(const std::filesystem::path& path);

/// `x,t,value` file, row-major in t, on a uniform tensor grid starting at
/// (0, 0). Fills `grid` with the grid found in the file.
SpaceTimeField read_space_time_field(const std::filesystem::path& path, Grid& grid);

/// `t,value` file on a uniform time grid starting at 0. Returns the samples
/// and sets T.
std::vector<double> read_time_series(const std::filesystem::path& path, double& T);

void ensure_directory(const std::filesystem::path& dir);
void write_text(const std::filesystem::path& path, std::string_view text);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

/// `x,t,u` rows, outer loop over t.
std::string solution_csv(const SolutionField& field);

/// `theorem,eps,t,x,xi,lhs,shape,ratio,regime`; xi left empty when absent.
std::string sweep_csv(const SweepReport& report);

nlohmann::json to_json(const SweepReport& report);
nlohmann::json to_json(const BoundConstants& c);
nlohmann::json to_json(const BoundDiagnostics& d);
nlohmann::json to_json(const BoundExponents& e);

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  int width = 640;
  int height = 420;
};

/// Line chart as a standalone SVG document. Non-positive values are dropped
/// on log axes.
std::string svg_line_chart(const PlotSpec& spec, const std::vector<PlotSeries>& series);

}  // namespace viscowave::io
