// caqs: generate synthetic streams, run active-learning sessions, serve the
// labeling API and merge learning-curve reports.

#include <atomic>
#include <chrono>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"

#include "caqs/checkpoint.hpp"
#include "caqs/error.hpp"
#include "caqs/harness/config.hpp"
#include "caqs/harness/dataset.hpp"
#include "caqs/harness/report.hpp"
#include "caqs/harness/service.hpp"
#include "caqs/harness/session.hpp"
#include "caqs/harness/synthetic.hpp"

namespace fs = std::filesystem;
using namespace caqs::harness;

namespace {

std::atomic<bool> interrupted{false};

Config load_config(const std::string& path, const std::vector<std::string>& overrides) {
  Config config = path.empty() ? Config{} : Config::load(path);
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw caqs::InvalidInput("--set expects key=value, got " + kv);
    config.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  return config;
}

void apply_flags(Config& config, const std::string& strategy, const std::string& mode) {
  if (!strategy.empty()) config.set("strategy", strategy);
  if (!mode.empty()) config.set("mode", mode);
}

void check_class_count(const Config& config, const Dataset& dataset) {
  if (config.has("q") && config.get_size("q", 0) != dataset.class_count())
    throw caqs::InvalidInput("config q does not match the dataset's class count");
}

std::string series_name(const SessionOptions& o) {
  return std::string(to_string(o.strategy)) + "-" + std::string(caqs::to_string(o.teacher.mode));
}

void write_outputs(const fs::path& out, const SessionOptions& options, const SessionState& state) {
  const Series series{series_name(options), state.train_size, state.curve};
  emit_report(out, std::span<const Series>(&series, 1));
  caqs::save_checkpoint(out / "model.ckpt", caqs::Checkpoint{state.classifier, state.context});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Context-aware active learning for activity streams"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::string data_path;
  std::string out_path;
  std::string strategy;
  std::string mode;

  auto* generate = app.add_subcommand("generate", "Write a planted-context synthetic dataset");
  generate->add_option("--config", config_path, "key = value config file");
  generate->add_option("--set", overrides, "Override a config key (key=value)");
  generate->add_option("--out", out_path, "Output JSONL dataset")->required();

  auto* run = app.add_subcommand("run", "Run an oracle-taught session and write its curve");
  run->add_option("--config", config_path, "key = value config file");
  run->add_option("--set", overrides, "Override a config key (key=value)");
  run->add_option("--data", data_path, "JSONL dataset")->required();
  run->add_option("--out", out_path, "Output directory")->required();
  run->add_option("--strategy", strategy, "caqs, caqs_no_context, random, entropy_topk, brute_force_oracle");
  run->add_option("--mode", mode, "strong_only, weak_only, strong_plus_weak, all_instances");

  std::string host = "127.0.0.1";
  int port = 8080;
  long timeout_ms = 0;
  bool linger = false;
  auto* serve = app.add_subcommand("serve", "Run a session taught through the HTTP labeling API");
  serve->add_option("--config", config_path, "key = value config file");
  serve->add_option("--set", overrides, "Override a config key (key=value)");
  serve->add_option("--data", data_path, "JSONL dataset")->required();
  serve->add_option("--out", out_path, "Output directory written when the session ends");
  serve->add_option("--strategy", strategy, "Query strategy");
  serve->add_option("--mode", mode, "Teacher mode");
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "Port, 0 picks a free one");
  serve->add_option("--timeout-ms", timeout_ms, "Abort a round after this long without labels (0 waits)");
  serve->add_flag("--linger", linger, "Keep serving after the session ends until interrupted");

  std::vector<std::string> inputs;
  auto* report = app.add_subcommand("report", "Merge curve files into one report");
  report->add_option("--in", inputs, "curves.csv files")->required();
  report->add_option("--out", out_path, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*generate) {
      const Config config = load_config(config_path, overrides);
      save_dataset(out_path, generate_synthetic(synthetic_config(config)));
      return 0;
    }
    if (*run) {
      Config config = load_config(config_path, overrides);
      apply_flags(config, strategy, mode);
      const Dataset dataset = load_dataset(data_path);
      check_class_count(config, dataset);
      const SessionOptions options = session_options(config);
      OracleTeacher oracle(dataset);
      const SessionState state = run_session(dataset, options, oracle);
      write_outputs(out_path, options, state);
      std::cout << series_name(options) << ": " << state.round << " rounds, "
                << state.labeled_manual << " manual, " << state.labeled_weak
                << " weak, final accuracy " << state.curve.back().accuracy << '\n';
      return 0;
    }
    if (*serve) {
      Config config = load_config(config_path, overrides);
      apply_flags(config, strategy, mode);
      const Dataset dataset = load_dataset(data_path);
      check_class_count(config, dataset);
      const SessionOptions options = session_options(config);
      LabelService service(dataset.class_names, std::chrono::milliseconds(timeout_ms));
      HttpServer server(service);
      const int bound = server.start(host, port);
      std::cout << "listening on http://" << host << ':' << bound << std::endl;
      std::signal(SIGINT, [](int) { interrupted = true; });
      std::signal(SIGTERM, [](int) { interrupted = true; });

      std::optional<SessionState> result;
      std::exception_ptr failure;
      std::atomic<bool> done{false};
      std::thread session([&] {
        try {
          result = run_session(dataset, options, service, &service);
        } catch (...) {
          failure = std::current_exception();
        }
        done = true;
      });
      while (!done && !interrupted)
        std::this_thread::sleep_for(std::chrono::milliseconds(50));
      if (interrupted) service.close();
      session.join();
      if (failure) std::rethrow_exception(failure);
      if (result && !out_path.empty()) write_outputs(out_path, options, *result);
      while (linger && !interrupted) std::this_thread::sleep_for(std::chrono::milliseconds(100));
      server.stop();
      return 0;
    }
    if (*report) {
      std::vector<Series> all;
      for (const auto& path : inputs) {
        std::ifstream in(path);
        if (!in) throw caqs::InvalidInput("cannot open " + path);
        for (auto& s : read_curves(in)) all.push_back(std::move(s));
      }
      emit_report(out_path, all);
      return 0;
    }
  } catch (const caqs::InvalidInput& e) {
    std::cerr << "caqs: rejected input: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "caqs: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
