#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hwime/metrics.hpp"

#ifndef HWIME_FIXTURE_DIR
#error "HWIME_FIXTURE_DIR must point at tests/fixtures"
#endif

namespace hwime::testsupport {

inline std::string fixture_path(const std::string& name) {
  return std::string(HWIME_FIXTURE_DIR) + "/" + name;
}

inline std::vector<std::vector<std::string>> read_csv(const std::string& name) {
  std::ifstream in(fixture_path(name));
  if (!in) throw std::runtime_error("missing fixture " + name);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  bool header_skipped = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_skipped) {
      header_skipped = true;
      continue;
    }
    std::vector<std::string> cells;
    std::istringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

// set -> system -> per-replica percentages in replica order; empty optional
// marks an N/A cell.
using FixtureRows =
    std::map<std::string, std::map<std::string, std::vector<std::optional<Centi>>>>;

inline FixtureRows load_accuracy_rows() {
  FixtureRows data;
  for (const auto& row : read_csv("accuracy_rows.csv")) {
    if (row.size() != 4) throw std::runtime_error("bad accuracy_rows.csv row");
    auto& cells = data[row[0]][row[1]];
    size_t index = std::stoul(row[2]);
    if (cells.size() < index) cells.resize(index);
    cells[index - 1] =
        row[3] == "N/A" ? std::nullopt : std::optional<Centi>(Centi::parse(row[3]));
  }
  return data;
}

inline std::map<std::string, std::map<std::string, std::optional<Centi>>>
load_accuracy_averages() {
  std::map<std::string, std::map<std::string, std::optional<Centi>>> data;
  for (const auto& row : read_csv("accuracy_averages.csv")) {
    if (row.size() != 3) throw std::runtime_error("bad accuracy_averages.csv row");
    data[row[0]][row[1]] =
        row[2] == "N/A" ? std::nullopt : std::optional<Centi>(Centi::parse(row[2]));
  }
  return data;
}

}  // namespace hwime::testsupport
