#include "hwime/recognizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hwime/trajectory.hpp"

namespace hwime {

FlatPath flatten(const Sample& sample) {
  FlatPath path;
  path.reserve(point_count(sample));
  uint16_t ordinal = 0;
  for (const Stroke& stroke : sample.strokes) {
    for (const Point& p : stroke.points) path.push_back({p.x, p.y, ordinal});
    ++ordinal;
  }
  return path;
}

size_t TemplateStore::path_count() const {
  size_t n = 0;
  for (const auto& [_, paths] : templates) n += paths.size();
  return n;
}

namespace {

// One rolling row of the DP table; both public distances share it.
template <typename Cost>
double dtw_core(size_t rows, size_t cols, Cost cost) {
  std::vector<double> prev(cols), cur(cols);

  for (size_t j = 0; j < cols; ++j) {
    prev[j] = cost(0, j) + (j > 0 ? prev[j - 1] : 0.0);
  }
  for (size_t i = 1; i < rows; ++i) {
    cur[0] = cost(i, 0) + prev[0];
    for (size_t j = 1; j < cols; ++j) {
      cur[j] = cost(i, j) + std::min({prev[j], cur[j - 1], prev[j - 1]});
    }
    std::swap(prev, cur);
  }
  return prev[cols - 1];
}

double euclid(int16_t ax, int16_t ay, int16_t bx, int16_t by) {
  return std::hypot(double(ax) - bx, double(ay) - by);
}

}  // namespace

double dtw_distance(std::span<const Point> a, std::span<const Point> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("dtw over empty sequence");
  return dtw_core(a.size(), b.size(), [&](size_t i, size_t j) {
    return euclid(a[i].x, a[i].y, b[j].x, b[j].y);
  });
}

double dtw_distance_gapped(std::span<const FlatPoint> a,
                           std::span<const FlatPoint> b, double gap_penalty) {
  if (a.empty() || b.empty()) throw std::invalid_argument("dtw over empty sequence");
  return dtw_core(a.size(), b.size(), [&](size_t i, size_t j) {
    return euclid(a[i].x, a[i].y, b[j].x, b[j].y) +
           gap_penalty * std::abs(int(a[i].stroke) - int(b[j].stroke));
  });
}

double default_gap_penalty(int normalize_target) {
  return static_cast<double>(normalize_target) / 4.0;
}

namespace {

struct Candidate {
  const std::string* label;
  const FlatPath* path;
};

std::vector<Candidate> collect(const TemplateStore& store) {
  std::vector<Candidate> candidates;
  candidates.reserve(store.path_count());
  for (const auto& [label, paths] : store.templates) {
    for (const FlatPath& path : paths) candidates.push_back({&label, &path});
  }
  return candidates;
}

// Argmin under (distance, label) so the winner is identical no matter how
// the distances were computed or in what order they are reduced.
std::string pick_best(const std::vector<Candidate>& candidates,
                      const std::vector<double>& distances) {
  size_t best = 0;
  for (size_t i = 1; i < candidates.size(); ++i) {
    if (distances[i] < distances[best] ||
        (distances[i] == distances[best] && *candidates[i].label < *candidates[best].label)) {
      best = i;
    }
  }
  return *candidates[best].label;
}

}  // namespace

std::string nn_classify_serial(const Sample& sample, const TemplateStore& store,
                               int target, double gap_penalty) {
  if (store.empty()) throw EmptyStore();
  if (gap_penalty < 0) gap_penalty = default_gap_penalty(target);

  FlatPath query = flatten(normalize_size(sample, target));
  std::vector<Candidate> candidates = collect(store);
  std::vector<double> distances(candidates.size());
  for (size_t i = 0; i < candidates.size(); ++i) {
    distances[i] = dtw_distance_gapped(query, *candidates[i].path, gap_penalty);
  }
  return pick_best(candidates, distances);
}

std::string nn_classify(const Sample& sample, const TemplateStore& store,
                        int target, double gap_penalty) {
  if (store.empty()) throw EmptyStore();
  if (gap_penalty < 0) gap_penalty = default_gap_penalty(target);

  FlatPath query = flatten(normalize_size(sample, target));
  std::vector<Candidate> candidates = collect(store);
  std::vector<double> distances(candidates.size());

  const int64_t n = static_cast<int64_t>(candidates.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (int64_t i = 0; i < n; ++i) {
    distances[i] = dtw_distance_gapped(query, *candidates[i].path, gap_penalty);
  }
  return pick_best(candidates, distances);
}

TemplateStore train_templates(const SamplePool& pool, int target, size_t per_label) {
  if (per_label == 0) throw std::invalid_argument("per_label must be >= 1");
  TemplateStore store;
  store.normalize_target = target;
  for (const Sample& sample : pool.samples) {
    std::vector<FlatPath>& paths = store.templates[sample.label];
    if (paths.size() < per_label) {
      paths.push_back(flatten(normalize_size(sample, target)));
    }
  }
  return store;
}

std::string OracleRecognizer::recognize(uint32_t sample_index,
                                        const std::vector<Stroke>&) {
  auto it = labels_.find(sample_index);
  return it == labels_.end() ? std::string() : it->second;
}

std::string NnRecognizer::recognize(uint32_t, const std::vector<Stroke>& strokes) {
  if (strokes.empty()) return {};
  Sample sample;
  sample.label = "?";  // placeholder; classification never reads it
  sample.strokes = strokes;
  return nn_classify(sample, store_, target_, gap_penalty_);
}

}  // namespace hwime
