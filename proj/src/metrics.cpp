#include "hwime/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace hwime {

namespace {

// floor((2n + d) / 2d) == round-half-up(n/d) for n >= 0, d > 0.
int64_t div_round_half_up(int64_t num, int64_t den) {
  return (2 * num + den) / (2 * den);
}

}  // namespace

const char* to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::Correct: return "correct";
    case Outcome::Incorrect: return "incorrect";
    case Outcome::NoResult: return "no_result";
  }
  return "?";
}

Outcome outcome_from_string(std::string_view name) {
  if (name == "correct") return Outcome::Correct;
  if (name == "incorrect") return Outcome::Incorrect;
  if (name == "no_result") return Outcome::NoResult;
  throw std::invalid_argument("unknown outcome '" + std::string(name) + "'");
}

Centi Centi::parse(std::string_view s) {
  bool negative = !s.empty() && s.front() == '-';
  std::string_view rest = negative ? s.substr(1) : s;

  size_t dot = rest.find('.');
  std::string_view int_part = rest.substr(0, dot);
  std::string_view frac_part =
      dot == std::string_view::npos ? std::string_view{} : rest.substr(dot + 1);
  if (int_part.empty() || frac_part.size() > 2) {
    throw std::invalid_argument("bad percentage '" + std::string(s) + "'");
  }

  int64_t whole = 0;
  auto [p1, e1] = std::from_chars(int_part.data(), int_part.data() + int_part.size(), whole);
  if (e1 != std::errc() || p1 != int_part.data() + int_part.size()) {
    throw std::invalid_argument("bad percentage '" + std::string(s) + "'");
  }

  int64_t frac = 0;
  if (!frac_part.empty()) {
    auto [p2, e2] = std::from_chars(frac_part.data(), frac_part.data() + frac_part.size(), frac);
    if (e2 != std::errc() || p2 != frac_part.data() + frac_part.size()) {
      throw std::invalid_argument("bad percentage '" + std::string(s) + "'");
    }
    if (frac_part.size() == 1) frac *= 10;
  }

  int64_t hundredths = whole * 100 + frac;
  return Centi{negative ? -hundredths : hundredths};
}

Centi Centi::from_double(double v) {
  return Centi{static_cast<int64_t>(std::llround(v * 100.0))};
}

std::string Centi::str() const {
  int64_t v = hundredths;
  std::string sign = v < 0 ? "-" : "";
  if (v < 0) v = -v;
  std::ostringstream out;
  out << sign << v / 100 << '.' << char('0' + (v / 10) % 10) << char('0' + v % 10);
  return std::move(out).str();
}

MergeableCounter accumulate(MergeableCounter counter, Outcome outcome) {
  switch (outcome) {
    case Outcome::Correct: ++counter.correct; break;
    case Outcome::Incorrect: ++counter.incorrect; break;
    case Outcome::NoResult: ++counter.no_result; break;
  }
  return counter;
}

std::optional<Centi> accuracy_percent(const MergeableCounter& counter) {
  uint64_t total = counter.total();
  if (total == 0) return std::nullopt;
  return Centi{div_round_half_up(static_cast<int64_t>(counter.correct) * 10000,
                                 static_cast<int64_t>(total))};
}

Centi aggregate_replicas(std::span<const Centi> rows) {
  if (rows.empty()) throw EmptyRows();
  int64_t sum = 0;
  for (const Centi& row : rows) sum += row.hundredths;
  return Centi{div_round_half_up(sum, static_cast<int64_t>(rows.size()))};
}

AccuracyReport make_report(std::string set_name, std::string system,
                           std::vector<ReplicaRow> rows) {
  AccuracyReport report;
  report.set_name = std::move(set_name);
  report.system = std::move(system);
  report.rows = std::move(rows);

  std::vector<Centi> present;
  for (ReplicaRow& row : report.rows) {
    if (!row.percent && row.counts.total() > 0) {
      row.percent = accuracy_percent(row.counts);
    }
    if (row.percent) present.push_back(*row.percent);
  }
  if (!present.empty()) report.average = aggregate_replicas(present);
  return report;
}

std::string render_table(std::span<const AccuracyReport> reports) {
  if (reports.empty()) return "(no reports)\n";

  const std::string& set_name = reports.front().set_name;

  // Union of replica indices, in order; each system contributes its cells.
  std::set<uint32_t> indices;
  for (const AccuracyReport& report : reports) {
    for (const ReplicaRow& row : report.rows) indices.insert(row.replica_index);
  }

  std::vector<std::string> row_labels;
  for (uint32_t idx : indices) row_labels.push_back(set_name + "_" + std::to_string(idx));
  row_labels.push_back("Average");

  size_t label_width = set_name.size();
  for (const std::string& label : row_labels) label_width = std::max(label_width, label.size());

  struct Column {
    std::string header;
    std::map<uint32_t, std::string> cells;
    std::string average;
    size_t width;
  };
  std::vector<Column> columns;
  for (const AccuracyReport& report : reports) {
    Column col;
    col.header = report.system;
    std::vector<Centi> present;
    for (const ReplicaRow& row : report.rows) {
      col.cells[row.replica_index] = row.percent ? row.percent->str() : "N/A";
      if (row.percent) present.push_back(*row.percent);
    }
    col.average = present.empty() ? "N/A" : aggregate_replicas(present).str();
    col.width = col.header.size();
    for (const auto& [_, cell] : col.cells) col.width = std::max(col.width, cell.size());
    col.width = std::max(col.width, col.average.size());
    columns.push_back(std::move(col));
  }

  std::ostringstream out;
  auto pad = [&out](const std::string& s, size_t width) {
    out << s << std::string(width - s.size(), ' ');
  };

  pad(set_name, label_width);
  for (const Column& col : columns) {
    out << "  ";
    pad(col.header, col.width);
  }
  out << '\n';

  size_t label_i = 0;
  for (uint32_t idx : indices) {
    pad(row_labels[label_i++], label_width);
    for (const Column& col : columns) {
      out << "  ";
      auto it = col.cells.find(idx);
      pad(it == col.cells.end() ? "N/A" : it->second, col.width);
    }
    out << '\n';
  }

  pad("Average", label_width);
  for (const Column& col : columns) {
    out << "  ";
    pad(col.average, col.width);
  }
  out << '\n';
  return std::move(out).str();
}

}  // namespace hwime
