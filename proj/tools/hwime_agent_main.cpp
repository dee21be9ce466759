// hwime-agent: the simulated device. Listens for one session at a time,
// models touch-screen resampling, and feeds a pluggable recognizer behind the
// text-buffer monitoring model.

#include <CLI11.hpp>

#include <cstdio>
#include <memory>

#include "hwime/agent.hpp"
#include "hwime/dataset.hpp"
#include "hwime/net.hpp"
#include "hwime/recognizer.hpp"

namespace {

using namespace hwime;

std::shared_ptr<Recognizer> make_recognizer(const std::string& spec,
                                            const std::string& templates_path,
                                            const std::string& labels_path,
                                            int normalize_target) {
  if (spec == "oracle") {
    if (labels_path.empty()) {
      throw std::runtime_error("--recognizer oracle requires --oracle-labels");
    }
    return std::make_shared<OracleRecognizer>(load_labels_file(labels_path));
  }
  if (spec.rfind("constant:", 0) == 0) {
    return std::make_shared<ConstantRecognizer>(spec.substr(9));
  }
  if (spec == "nn") {
    if (templates_path.empty()) {
      throw std::runtime_error("--recognizer nn requires --templates");
    }
    SamplePool pool = load_hws_file(templates_path);
    TemplateStore store = train_templates(pool, normalize_target, 1000);
    std::fprintf(stderr, "nn recognizer: %zu labels, %zu templates\n",
                 store.templates.size(), store.path_count());
    return std::make_shared<NnRecognizer>(std::move(store), normalize_target);
  }
  throw std::runtime_error("unknown recognizer '" + spec +
                           "' (expected oracle | constant:<text> | nn)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simulated handwriting device agent"};

  std::string listen = "127.0.0.1:" + std::to_string(net::kDefaultPort);
  std::string recognizer_spec = "constant:?";
  std::string templates_path, labels_path, log_path, anchor = "kept";
  int normalize_target = 180;
  bool once = false;
  AgentConfig config;

  app.add_option("--listen", listen, "listen endpoint host:port")
      ->capture_default_str();
  app.add_option("--resample-time-ms", config.resample.time_threshold_ms,
                 "time threshold of the point-dropping model (0 = off)")
      ->capture_default_str();
  app.add_option("--resample-distance", config.resample.distance_threshold,
                 "distance threshold of the point-dropping model (0 = off)")
      ->capture_default_str();
  app.add_option("--resample-anchor", anchor, "thinning anchor: kept | raw")
      ->check(CLI::IsMember({"kept", "raw"}))
      ->capture_default_str();
  app.add_option("--recognizer", recognizer_spec,
                 "oracle | constant:<text> | nn")
      ->capture_default_str();
  app.add_option("--templates", templates_path, "template pool for --recognizer nn")
      ->check(CLI::ExistingFile);
  app.add_option("--oracle-labels", labels_path, "label map for --recognizer oracle")
      ->check(CLI::ExistingFile);
  app.add_option("--normalize", normalize_target, "nn normalization target")
      ->capture_default_str();
  app.add_option("--time-scale", config.time_scale,
                 "scales the artificial recognizer delay")
      ->capture_default_str();
  app.add_option("--delay-ms", config.recognizer_delay_ms,
                 "artificial recognizer delay before committing (ms)")
      ->capture_default_str();
  app.add_option("--log", log_path, "line-delimited event/result log");
  app.add_flag("--once", once, "serve one session, then exit");

  CLI11_PARSE(app, argc, argv);

  try {
    config.log_path = log_path;
    if (anchor == "raw") config.resample.anchor = ResampleAnchor::Raw;

    auto recognizer =
        make_recognizer(recognizer_spec, templates_path, labels_path, normalize_target);
    auto [host, port] = net::parse_endpoint(listen);

    AgentServer server(std::move(config), std::move(recognizer));
    server.bind(host, port);
    std::fprintf(stderr, "agent listening on %s:%u (recognizer: %s)\n", host.c_str(),
                 server.port(), recognizer_spec.c_str());
    if (once) {
      server.serve_one();
    } else {
      server.serve();
    }
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 1;
  }
  return 0;
}
