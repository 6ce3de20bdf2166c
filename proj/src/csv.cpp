#include "subord/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace subord {

std::string format_float(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  auto write_row = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      out << cells[i];
    }
    out << '\n';
  };
  write_row(table.header);
  for (const auto& row : table.rows) write_row(row);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (line.empty() || line.back() == ',') cells.emplace_back();
    return cells;
  };
  CsvTable table;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() && in.peek() == std::char_traits<char>::eof()) break;
    auto cells = split(line);
    if (table.header.empty()) {
      table.header = std::move(cells);
    } else {
      if (cells.size() != table.header.size()) {
        throw std::runtime_error("ragged row in " + path.string());
      }
      table.rows.push_back(std::move(cells));
    }
  }
  if (table.header.empty()) {
    throw std::runtime_error("empty table in " + path.string());
  }
  return table;
}

CsvTable report_to_table(const VerificationReport& report,
                         const std::string& suite) {
  CsvTable t;
  t.header = {"suite", "check_id", "value", "bound", "pass", "note"};
  for (const auto& r : report.rows) {
    t.rows.push_back({suite, r.id, format_float(r.value),
                      r.bound ? format_float(*r.bound) : "",
                      r.pass ? "1" : "0", r.note});
  }
  return t;
}

}  // namespace subord
