#include "kitaev/cli/csv_writer.hpp"

#include <fstream>
#include <sstream>

#include "kitaev/cli/run_config.hpp"
#include "kitaev/format.hpp"

namespace kitaev::cli {

void CsvTable::add_row(const std::vector<double>& values) {
  std::vector<std::string> row;
  row.reserve(values.size());
  for (double v : values) row.push_back(format_number(v));
  rows.push_back(std::move(row));
}

std::string CsvTable::render() const {
  std::ostringstream s;
  for (const auto& [key, value] : meta) s << "# " << key << ": " << value << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) s << (i ? "," : "") << columns[i];
  s << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) s << (i ? "," : "") << row[i];
    s << '\n';
  }
  return s.str();
}

void write_text(const std::string& path, const std::string& text, std::ostream& console) {
  if (path == "-") {
    console << text;
    console.flush();
    if (!console) throw IoError("failed to write to standard output");
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + path + "' for writing");
  file << text;
  file.close();
  if (!file) throw IoError("failed writing '" + path + "'");
}

std::string gnuplot_script(const std::string& csv_path, const PlotSpec& spec) {
  std::ostringstream s;
  s << "# " << spec.title << '\n'
    << "set datafile separator ','\n"
    << "set datafile commentschars '#'\n"
    << "set key autotitle columnhead\n"
    << "set title '" << spec.title << "'\n"
    << "set xlabel '" << spec.xlabel << "'\n"
    << "set ylabel '" << spec.ylabel << "'\n";
  if (spec.log_axes) s << "set logscale xy\n";
  s << "set grid\n";
  const std::string file = "'" + csv_path + "'";
  if (spec.group_column > 0 && !spec.groups.empty()) {
    s << "plot";
    for (std::size_t i = 0; i < spec.groups.size(); ++i) {
      s << (i ? ", \\\n    " : " ") << file << " using ($" << spec.group_column << "==" << spec.groups[i]
        << " ? $" << spec.x_column << " : 1/0):" << spec.y_column << " with lines title 'N="
        << spec.groups[i] << "'";
    }
    s << '\n';
  } else {
    s << "plot " << file << " using " << spec.x_column << ':' << spec.y_column
      << (spec.log_axes ? " with linespoints" : " with lines") << '\n';
  }
  return s.str();
}

}  // namespace kitaev::cli
