#pragma once

#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hwime/dataset.hpp"
#include "hwime/geometry.hpp"

namespace hwime {

// Sample flattened for matching: strokes concatenated in order, each point
// tagged with its stroke ordinal so stroke-count information can enter the
// alignment cost.
struct FlatPoint {
  int16_t x = 0;
  int16_t y = 0;
  uint16_t stroke = 0;

  friend bool operator==(const FlatPoint&, const FlatPoint&) = default;
};

using FlatPath = std::vector<FlatPoint>;

FlatPath flatten(const Sample& sample);

// Reference recognizer state: normalized template paths per label.
struct TemplateStore {
  int normalize_target = 180;
  std::map<std::string, std::vector<FlatPath>> templates;

  bool empty() const { return templates.empty(); }
  size_t path_count() const;
};

class EmptyStore : public std::runtime_error {
 public:
  EmptyStore() : std::runtime_error("template store has no templates") {}
};

// Classic dynamic time warping: per-step cost is the Euclidean distance,
// moves (i+1,j), (i,j+1), (i+1,j+1), anchored at both ends.
double dtw_distance(std::span<const Point> a, std::span<const Point> b);

// Same recurrence over flattened paths; aligning points from different
// stroke ordinals costs an extra gap_penalty * |ordinal difference| per step.
double dtw_distance_gapped(std::span<const FlatPoint> a,
                           std::span<const FlatPoint> b, double gap_penalty);

// Pen-up gap penalty used when none is given: normalize_target / 4.
double default_gap_penalty(int normalize_target);

// Nearest-template label for the normalized sample; ties break toward the
// lexicographically smallest label. The template scan is the data-parallel
// kernel: nn_classify runs it with OpenMP when available, nn_classify_serial
// is the straight-line reference kept for testing and benchmarking.
std::string nn_classify(const Sample& sample, const TemplateStore& store,
                        int target, double gap_penalty = -1.0);
std::string nn_classify_serial(const Sample& sample, const TemplateStore& store,
                               int target, double gap_penalty = -1.0);

// First per_label samples of each label, normalized and flattened.
TemplateStore train_templates(const SamplePool& pool, int target, size_t per_label);

// Pluggable recognition backend. Deterministic for a given constructed state;
// an empty return means "nothing committed" and produces no Result.
class Recognizer {
 public:
  virtual ~Recognizer() = default;
  virtual std::string recognize(uint32_t sample_index,
                                const std::vector<Stroke>& strokes) = 0;
  virtual std::string name() const = 0;
};

// Answers from a position -> text map loaded out-of-band; never sees labels
// on the wire.
class OracleRecognizer : public Recognizer {
 public:
  explicit OracleRecognizer(LabelMap labels) : labels_(std::move(labels)) {}
  std::string recognize(uint32_t sample_index, const std::vector<Stroke>&) override;
  std::string name() const override { return "oracle"; }

 private:
  LabelMap labels_;
};

class ConstantRecognizer : public Recognizer {
 public:
  explicit ConstantRecognizer(std::string text) : text_(std::move(text)) {}
  std::string recognize(uint32_t, const std::vector<Stroke>&) override { return text_; }
  std::string name() const override { return "constant"; }

 private:
  std::string text_;
};

class NnRecognizer : public Recognizer {
 public:
  NnRecognizer(TemplateStore store, int target, double gap_penalty = -1.0)
      : store_(std::move(store)), target_(target), gap_penalty_(gap_penalty) {}
  std::string recognize(uint32_t, const std::vector<Stroke>& strokes) override;
  std::string name() const override { return "nn"; }

 private:
  TemplateStore store_;
  int target_;
  double gap_penalty_;
};

}  // namespace hwime
