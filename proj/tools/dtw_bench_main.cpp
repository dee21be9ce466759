// dtw-bench: compares the OpenMP template-scan kernel against the serial
// reference on synthetic glyph data and verifies they classify identically.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <vector>

#include "hwime/recognizer.hpp"
#include "hwime/synthetic.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using namespace hwime;
using Clock = std::chrono::steady_clock;

double run_pass(const SamplePool& queries, const TemplateStore& store, bool parallel,
                std::vector<std::string>& labels) {
  labels.clear();
  labels.reserve(queries.samples.size());
  auto start = Clock::now();
  for (const Sample& query : queries.samples) {
    labels.push_back(parallel ? nn_classify(query, store, 180)
                              : nn_classify_serial(query, store, 180));
  }
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial vs OpenMP benchmark of the DTW template scan"};

  int templates_per_class = 50;
  int queries_per_class = 10;
  int jitter = 3;
  int repeats = 3;
  app.add_option("--templates-per-class", templates_per_class)->capture_default_str();
  app.add_option("--queries-per-class", queries_per_class)->capture_default_str();
  app.add_option("--jitter", jitter)->capture_default_str();
  app.add_option("--repeats", repeats)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  SamplePool train =
      synthetic::make_glyph_pool("train", templates_per_class, 11, jitter);
  SamplePool queries =
      synthetic::make_glyph_pool("bench", queries_per_class, 2222, jitter);
  TemplateStore store = train_templates(train, 180, size_t(templates_per_class));

  std::printf("store: %zu templates, %zu queries\n", store.path_count(),
              queries.samples.size());
#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; both passes run the serial kernel\n");
#endif

  std::vector<std::string> serial_labels, parallel_labels;
  double serial_best = 1e99, parallel_best = 1e99;
  for (int r = 0; r < repeats; ++r) {
    serial_best = std::min(serial_best, run_pass(queries, store, false, serial_labels));
    parallel_best =
        std::min(parallel_best, run_pass(queries, store, true, parallel_labels));
  }

  if (serial_labels != parallel_labels) {
    std::fprintf(stderr, "kernel mismatch: serial and parallel labels differ\n");
    return 1;
  }

  double n = static_cast<double>(queries.samples.size());
  std::printf("serial:   %8.2f ms total, %6.2f ms/query\n", serial_best * 1e3,
              serial_best * 1e3 / n);
  std::printf("parallel: %8.2f ms total, %6.2f ms/query\n", parallel_best * 1e3,
              parallel_best * 1e3 / n);
  std::printf("speedup:  %.2fx, outputs identical\n", serial_best / parallel_best);
  return 0;
}
