#pragma once

#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "caqs/harness/session.hpp"

namespace caqs::harness {

inline constexpr int kApiVersion = 1;

// Human teacher behind an HTTP API. The session thread blocks in answer()
// until every queried id is labeled through post_labels() (or the timeout
// expires, which aborts the round). All payloads are JSON strings.
class LabelService : public Teacher, public SessionObserver {
 public:
  struct Reply {
    int status = 200;
    std::string body;
  };

  // timeout of zero waits forever.
  explicit LabelService(std::vector<std::string> class_names,
                        std::chrono::milliseconds timeout = std::chrono::milliseconds{0});

  std::optional<LabelMap> answer(const QueryBatch& batch) override;
  void on_graph(const GraphSnapshot& snapshot) override;
  void on_state(const SessionState& state) override;

  std::string session_json() const;
  std::string queries_json() const;
  std::string curve_json() const;
  // Latest snapshot, or with posterior = true the latest conditioned one.
  std::string graph_json(bool posterior = false) const;
  // Body {"<id>": class, ...}; class may be an index or a class name.
  Reply post_labels(const std::string& body);

  // Marks the session finished and releases a blocked answer().
  void close();

 private:
  mutable std::mutex mutex_;
  std::condition_variable cv_;
  std::vector<std::string> class_names_;
  std::chrono::milliseconds timeout_;
  std::optional<QueryBatch> pending_;
  LabelMap received_;
  std::optional<GraphSnapshot> graph_;
  std::optional<GraphSnapshot> posterior_;
  std::size_t round_ = 0;
  std::size_t manual_ = 0;
  std::size_t weak_ = 0;
  std::size_t train_size_ = 0;
  std::vector<CurvePoint> curve_;
  bool finished_ = false;
  bool closed_ = false;
};

// cpp-httplib front end exposing GET /session, /queries, /curve, /graph
// (?posterior=1 for the last conditioned graph) and POST /labels for a
// LabelService.
class HttpServer {
 public:
  explicit HttpServer(LabelService& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds (port 0 picks a free port) and serves on a background thread.
  int start(const std::string& host, int port);
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace caqs::harness
