// Self-describing CSV output and companion gnuplot scripts.
#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "kitaev/echo.hpp"

namespace kitaev::cli {

struct CsvTable {
  MetaRecord meta;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(const std::vector<double>& values);
  /// '#'-prefixed "key: value" lines, the column row, then data rows.
  std::string render() const;
};

/// Writes text to path, or to console when path is "-". Throws IoError.
void write_text(const std::string& path, const std::string& text, std::ostream& console);

struct PlotSpec {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  int x_column = 1;
  int y_column = 2;
  /// When > 0, one curve per distinct value of this column.
  int group_column = 0;
  std::vector<std::string> groups;
  bool log_axes = false;
};

/// gnuplot script plotting the CSV at csv_path.
std::string gnuplot_script(const std::string& csv_path, const PlotSpec& spec);

}  // namespace kitaev::cli
