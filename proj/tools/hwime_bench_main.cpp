// hwime-bench: drives replay sessions against device agents, builds seeded
// test sets, and merges per-replica reports into one table.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "hwime/dataset.hpp"
#include "hwime/metrics.hpp"
#include "hwime/orchestrator.hpp"
#include "hwime/synthetic.hpp"

namespace {

using namespace hwime;

std::vector<SamplePool> load_pools(const std::vector<std::string>& paths) {
  std::vector<SamplePool> pools;
  pools.reserve(paths.size());
  for (const std::string& path : paths) pools.push_back(load_hws_file(path));
  return pools;
}

void write_text_file(const std::string& path, std::string_view body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
}

int cmd_run(const std::vector<std::string>& pool_paths, const std::string& replica_path,
            SessionConfig config, const std::string& report_dir) {
  std::vector<SamplePool> pools = load_pools(pool_paths);
  TestReplica replica = load_replica_file(replica_path);

  std::fprintf(stderr, "replaying %zu samples of %s_%u over %zu agent(s)\n",
               replica.entries.size(), replica.set_name.c_str(),
               replica.replica_index, config.agents.size());

  auto records = run_session(config, replica, pools);

  ReportMetadata metadata;
  metadata.set_name = replica.set_name;
  metadata.replica_index = replica.replica_index;
  metadata.seed = config.seed.value_or(replica.seed);
  metadata.system = config.system_name;
  write_report(records, metadata, report_dir);

  MergeableCounter counter;
  for (const auto& record : records) counter = accumulate(counter, record.outcome);
  auto accuracy = accuracy_percent(counter);
  std::printf("correct=%llu incorrect=%llu no_result=%llu accuracy=%s\n",
              static_cast<unsigned long long>(counter.correct),
              static_cast<unsigned long long>(counter.incorrect),
              static_cast<unsigned long long>(counter.no_result),
              accuracy ? accuracy->str().c_str() : "N/A");
  std::printf("report written to %s\n", report_dir.c_str());
  return 0;
}

int cmd_build_set(const std::vector<std::string>& pool_paths,
                  const std::string& charset_path, size_t size, uint32_t replicas,
                  uint64_t seed, std::string set_name, const std::string& out_dir) {
  std::vector<SamplePool> pools = load_pools(pool_paths);

  if (!charset_path.empty()) {
    Charset charset = load_charset_file(charset_path);
    if (set_name.empty()) set_name = charset.name;
    for (SamplePool& pool : pools) pool = filter_by_charset(pool, charset);
  }
  if (set_name.empty()) set_name = "set";

  auto built = build_replicas(pools, size, replicas, seed, set_name);

  std::filesystem::create_directories(out_dir);
  for (const TestReplica& replica : built) {
    std::string stem = set_name + "_" + std::to_string(replica.replica_index);
    std::string replica_path = out_dir + "/" + stem + ".replica";
    write_text_file(replica_path, format_replica(replica));

    LabelMap labels = labels_for_replica(replica, pools);
    write_text_file(out_dir + "/" + stem + ".labels", format_labels(labels));
    std::printf("%s: %zu entries\n", replica_path.c_str(), replica.entries.size());
  }
  return 0;
}

int cmd_demo_pool(int per_class, int jitter, uint64_t seed, const std::string& out_path) {
  SamplePool pool = synthetic::make_glyph_pool(
      std::filesystem::path(out_path).stem().string(), per_class, seed, jitter);
  save_hws_file(pool, out_path);
  std::printf("%s: %zu samples, 10 labels\n", out_path.c_str(), pool.samples.size());
  return 0;
}

int cmd_report(const std::vector<std::string>& summary_paths, const std::string& out_path) {
  std::vector<ReplicaSummary> summaries;
  summaries.reserve(summary_paths.size());
  for (const std::string& path : summary_paths) {
    summaries.push_back(load_summary_file(path));
  }
  auto reports = merge_summaries(summaries);
  std::string table = render_table(reports);
  if (!out_path.empty()) write_text_file(out_path, table);
  std::fputs(table.c_str(), stdout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"handwriting input-method evaluation harness"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "replay a replica against agents");
  std::vector<std::string> run_pools, run_agents;
  std::string replica_path, report_dir = "report";
  SessionConfig config;
  uint64_t seed_flag = 0;
  bool seed_given = false;
  run->add_option("--pool", run_pools, "sample pool file (repeatable)")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--replica", replica_path, "replica file to replay")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--agent", run_agents, "agent endpoint host:port (repeatable)")
      ->required();
  run->add_option("--t1-ms", config.t1_ms, "nominal gap between points (ms)")
      ->capture_default_str();
  run->add_option("--t2-ms", config.t2_ms, "post-sample wait for a result (ms)")
      ->capture_default_str();
  run->add_option("--normalize", config.normalization_target, "size normalization target")
      ->capture_default_str();
  run->add_option("--time-scale", config.time_scale, "real-sleep scale factor")
      ->capture_default_str();
  run->add_option("--report", report_dir, "report output directory")
      ->capture_default_str();
  run->add_option("--system", config.system_name, "system column name in reports")
      ->capture_default_str();
  run->add_option("--seed", seed_flag, "seed recorded in report metadata")
      ->each([&seed_given](const std::string&) { seed_given = true; });

  // build-set
  auto* build = app.add_subcommand("build-set", "draw seeded test replicas");
  std::vector<std::string> build_pools;
  std::string charset_path, set_name, out_dir = "sets";
  size_t size = 0;
  uint32_t replica_count = 5;
  uint64_t seed = 0;
  build->add_option("--pool", build_pools, "sample pool file (repeatable)")
      ->required()
      ->check(CLI::ExistingFile);
  build->add_option("--charset", charset_path, "charset file to filter by")
      ->check(CLI::ExistingFile);
  build->add_option("--size", size, "entries per replica")->required();
  build->add_option("--replicas", replica_count, "number of replicas")
      ->capture_default_str();
  build->add_option("--seed", seed, "master seed")->required();
  build->add_option("--set-name", set_name, "set name (default: charset name)");
  build->add_option("--out", out_dir, "output directory")->capture_default_str();

  // demo-pool
  auto* demo = app.add_subcommand("demo-pool", "write a synthetic glyph pool");
  int per_class = 20, jitter = 3;
  uint64_t demo_seed = 1;
  std::string demo_out = "glyphs.hws";
  demo->add_option("--per-class", per_class, "samples per digit class")
      ->capture_default_str();
  demo->add_option("--jitter", jitter, "per-point jitter amplitude")
      ->capture_default_str();
  demo->add_option("--seed", demo_seed, "generator seed")->capture_default_str();
  demo->add_option("--out", demo_out, "output pool file")->capture_default_str();

  // report
  auto* report = app.add_subcommand("report", "merge summaries into one table");
  std::vector<std::string> summary_paths;
  std::string table_out;
  report->add_option("--merge", summary_paths, "summary.json files (repeatable)")
      ->required()
      ->check(CLI::ExistingFile);
  report->add_option("--out", table_out, "also write the table to this file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      config.agents = run_agents;
      if (seed_given) config.seed = seed_flag;
      return cmd_run(run_pools, replica_path, std::move(config), report_dir);
    }
    if (build->parsed()) {
      return cmd_build_set(build_pools, charset_path, size, replica_count, seed,
                           set_name, out_dir);
    }
    if (demo->parsed()) {
      return cmd_demo_pool(per_class, jitter, demo_seed, demo_out);
    }
    if (report->parsed()) {
      return cmd_report(summary_paths, table_out);
    }
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 1;
  }
  return 0;
}
