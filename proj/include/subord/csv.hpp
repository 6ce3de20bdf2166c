#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "subord/report.hpp"

namespace subord {

// Minimal CSV table: comma separated, '.' decimal point, LF line endings,
// one header row.  Floats are rendered with 17 significant digits so that
// reruns of the same configuration are byte-identical and values round-trip.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string format_float(double v);

void write_csv(const std::filesystem::path& path, const CsvTable& table);

// Inverse of write_csv for files produced by it (no quoting or embedded
// commas).  The first row becomes the header.  Throws std::runtime_error if
// the file cannot be opened or a row has a different number of fields.
CsvTable read_csv(const std::filesystem::path& path);

CsvTable report_to_table(const VerificationReport& report,
                         const std::string& suite);

}  // namespace subord
