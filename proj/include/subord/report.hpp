#pragma once

#include <optional>
#include <string>
#include <vector>

namespace subord {

// One verified statement: a measured value plus (optionally) the bound it must
// satisfy.  `pass` is the verdict; `note` carries human-readable context that
// ends up in the CSV output.
struct CheckRow {
  std::string id;
  double value = 0.0;
  std::optional<double> bound;
  bool pass = true;
  std::string note;
};

struct VerificationReport {
  std::vector<CheckRow> rows;

  void add(CheckRow row) { rows.push_back(std::move(row)); }

  void add(const std::string& id, double value, std::optional<double> bound,
           bool pass, std::string note = "") {
    rows.push_back(CheckRow{id, value, bound, pass, std::move(note)});
  }

  bool all_pass() const {
    for (const auto& r : rows)
      if (!r.pass) return false;
    return true;
  }

  const CheckRow* find(const std::string& id) const {
    for (const auto& r : rows)
      if (r.id == id) return &r;
    return nullptr;
  }

  void append(const VerificationReport& other) {
    rows.insert(rows.end(), other.rows.begin(), other.rows.end());
  }
};

}  // namespace subord
