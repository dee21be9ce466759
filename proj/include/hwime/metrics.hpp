#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hwime {

enum class Outcome : uint8_t { Correct, Incorrect, NoResult };

const char* to_string(Outcome outcome);
Outcome outcome_from_string(std::string_view name);

// Percentage held in exact hundredths so table arithmetic never touches
// floating point. "50.00", "2.10" etc.
struct Centi {
  int64_t hundredths = 0;

  static Centi parse(std::string_view s);        // throws std::invalid_argument
  static Centi from_double(double v);            // nearest hundredth
  std::string str() const;                       // always two decimals
  double to_double() const { return static_cast<double>(hundredths) / 100.0; }

  friend bool operator==(const Centi&, const Centi&) = default;
  friend auto operator<=>(const Centi&, const Centi&) = default;
};

// Commutative, associative, identity = zeros.
struct MergeableCounter {
  uint64_t correct = 0;
  uint64_t incorrect = 0;
  uint64_t no_result = 0;

  uint64_t total() const { return correct + incorrect + no_result; }

  friend MergeableCounter operator+(const MergeableCounter& a,
                                    const MergeableCounter& b) {
    return {a.correct + b.correct, a.incorrect + b.incorrect,
            a.no_result + b.no_result};
  }
  friend bool operator==(const MergeableCounter&, const MergeableCounter&) = default;
};

MergeableCounter accumulate(MergeableCounter counter, Outcome outcome);

// 100 * correct / total, rounded half up to two decimals; empty for zero
// records. NoResult samples count against accuracy by sitting in the total.
std::optional<Centi> accuracy_percent(const MergeableCounter& counter);

class EmptyRows : public std::runtime_error {
 public:
  EmptyRows() : std::runtime_error("no replica rows to aggregate") {}
};

// Arithmetic mean of the per-replica percentages (not pooled counts), rounded
// half up to two decimals. This is the convention the cross-replica "Average"
// row uses; it coincides with pooled-count accuracy only for equal-size
// replicas.
Centi aggregate_replicas(std::span<const Centi> rows);

struct ReplicaRow {
  uint32_t replica_index = 0;
  MergeableCounter counts;
  std::optional<Centi> percent;  // empty renders as N/A
};

// One system's column of per-replica rows plus its Average cell.
struct AccuracyReport {
  std::string set_name;
  std::string system;
  std::vector<ReplicaRow> rows;
  std::optional<Centi> average;
};

// Computes row percentages from counts and the average over present rows.
AccuracyReport make_report(std::string set_name, std::string system,
                           std::vector<ReplicaRow> rows);

// Fixed-width text table: one row per replica plus Average, one column per
// system. Missing cells render as N/A and are excluded from that column's
// average only.
std::string render_table(std::span<const AccuracyReport> reports);

}  // namespace hwime
