#include "caqs/harness/service.hpp"

#include <algorithm>
#include <thread>

#include "httplib.h"
#include "json.hpp"

#include "caqs/error.hpp"
#include "caqs/info_metrics.hpp"

namespace caqs::harness {
namespace {

using nlohmann::json;

json vector_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json error_json(const std::string& message) {
  return {{"version", kApiVersion}, {"error", message}};
}

}  // namespace

LabelService::LabelService(std::vector<std::string> class_names, std::chrono::milliseconds timeout)
    : class_names_(std::move(class_names)), timeout_(timeout) {}

std::optional<LabelMap> LabelService::answer(const QueryBatch& batch) {
  std::unique_lock lock(mutex_);
  pending_ = batch;
  received_.clear();
  auto complete = [&] { return closed_ || (pending_ && received_.size() >= pending_->items.size()); };
  bool done = true;
  if (timeout_.count() > 0)
    done = cv_.wait_for(lock, timeout_, complete);
  else
    cv_.wait(lock, complete);
  std::optional<LabelMap> out;
  if (done && !closed_) out = received_;
  pending_.reset();
  received_.clear();
  return out;
}

void LabelService::on_graph(const GraphSnapshot& snapshot) {
  std::lock_guard lock(mutex_);
  graph_ = snapshot;
  if (snapshot.conditioned) posterior_ = snapshot;
}

void LabelService::on_state(const SessionState& state) {
  std::lock_guard lock(mutex_);
  round_ = state.round;
  manual_ = state.labeled_manual;
  weak_ = state.labeled_weak;
  train_size_ = state.train_size;
  curve_ = state.curve;
  finished_ = state.finished;
}

void LabelService::close() {
  {
    std::lock_guard lock(mutex_);
    closed_ = true;
  }
  cv_.notify_all();
}

std::string LabelService::session_json() const {
  std::lock_guard lock(mutex_);
  json pending = json::array();
  if (pending_)
    for (const auto& item : pending_->items)
      if (!received_.count(item.id)) pending.push_back({{"id", item.id}, {"pmf", vector_json(item.pmf)}});
  return json{{"version", kApiVersion},
              {"round", round_},
              {"labeled_manual", manual_},
              {"labeled_weak", weak_},
              {"train_size", train_size_},
              {"classes", class_names_},
              {"pending_queries", pending},
              {"awaiting_labels", pending_.has_value()},
              {"finished", finished_}}
      .dump();
}

std::string LabelService::queries_json() const {
  std::lock_guard lock(mutex_);
  json items = json::array();
  json labeled = json::object();
  std::size_t round = round_ + 1;
  if (pending_) {
    round = pending_->round;
    for (const auto& item : pending_->items) {
      json neighbors = json::array();
      for (const auto& [id, mi] : item.neighbors) neighbors.push_back({{"id", id}, {"mi", mi}});
      items.push_back({{"id", item.id},
                       {"pmf", vector_json(item.pmf)},
                       {"entropy", item.entropy},
                       {"neighbors", neighbors}});
    }
    for (const auto& [id, label] : received_) labeled[id] = label;
  }
  return json{{"version", kApiVersion},
              {"round", round},
              {"classes", class_names_},
              {"items", items},
              {"labeled", labeled}}
      .dump();
}

std::string LabelService::curve_json() const {
  std::lock_guard lock(mutex_);
  json points = json::array();
  for (const auto& p : curve_) {
    const double frac =
        train_size_ ? static_cast<double>(p.manual) / static_cast<double>(train_size_) : 0.0;
    points.push_back({{"round", p.round},
                      {"manual", p.manual},
                      {"manual_fraction", frac},
                      {"weak", p.weak},
                      {"accuracy", p.accuracy}});
  }
  return json{{"version", kApiVersion}, {"train_size", train_size_}, {"points", points}}.dump();
}

std::string LabelService::graph_json(bool posterior) const {
  std::lock_guard lock(mutex_);
  const std::optional<GraphSnapshot>& snap = posterior ? posterior_ : graph_;
  json out = {{"version", kApiVersion}};
  if (!snap) {
    out["round"] = round_;
    out["nodes"] = json::array();
    out["edges"] = json::array();
    return out.dump();
  }
  const CrfGraph& g = snap->graph;
  const MarginalSet& m = snap->marginals;
  json nodes = json::array();
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const GraphNode& node = g.node(i);
    json n = {{"index", i},
              {"kind", node.kind == NodeKind::activity ? "activity" : "context"},
              {"id", node.instance_id},
              {"marginal", vector_json(m.nodes[i])},
              {"entropy", node_entropy(m.nodes[i])}};
    if (node.kind == NodeKind::context) n["attribute"] = node.attribute;
    n["observed_label"] = node.observed_label ? json(*node.observed_label) : json(nullptr);
    nodes.push_back(std::move(n));
  }
  json edges = json::array();
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    const EdgeRecord& edge = g.edges()[e];
    edges.push_back({{"first", edge.first},
                     {"second", edge.second},
                     {"kind", edge.kind == EdgeKind::activity_activity ? "activity_activity"
                                                                       : "activity_context"},
                     {"mi", edge_mutual_information(m.edges[e])}});
  }
  out["round"] = snap->round;
  out["conditioned"] = snap->conditioned;
  out["class_count"] = g.class_count();
  out["converged"] = m.converged;
  out["nodes"] = std::move(nodes);
  out["edges"] = std::move(edges);
  return out.dump();
}

LabelService::Reply LabelService::post_labels(const std::string& body) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::exception&) {
    return {400, error_json("body is not JSON").dump()};
  }
  if (!j.is_object()) return {400, error_json("body must be an object of id: class").dump()};

  bool complete = false;
  std::size_t accepted = 0;
  std::size_t remaining = 0;
  {
    std::lock_guard lock(mutex_);
    if (!pending_) return {409, error_json("no query batch is pending").dump()};
    LabelMap parsed;
    for (const auto& [id, value] : j.items()) {
      const bool queried = std::any_of(pending_->items.begin(), pending_->items.end(),
                                       [&](const QueryItem& item) { return item.id == id; });
      if (!queried) return {400, error_json("instance " + id + " is not in the pending batch").dump()};
      std::optional<std::size_t> label;
      if (value.is_number_unsigned()) {
        label = value.get<std::size_t>();
      } else if (value.is_string()) {
        auto it = std::find(class_names_.begin(), class_names_.end(), value.get<std::string>());
        if (it != class_names_.end()) label = static_cast<std::size_t>(it - class_names_.begin());
      }
      if (!label || *label >= class_names_.size())
        return {400, error_json("invalid class for " + id).dump()};
      parsed[id] = *label;
    }
    for (const auto& [id, label] : parsed) received_[id] = label;
    accepted = parsed.size();
    remaining = pending_->items.size() - received_.size();
    complete = remaining == 0;
  }
  if (complete) cv_.notify_all();
  return {200, json{{"version", kApiVersion}, {"accepted", accepted}, {"remaining", remaining}}.dump()};
}

struct HttpServer::Impl {
  explicit Impl(LabelService& s) : service(s) {}
  LabelService& service;
  httplib::Server server;
  std::thread thread;
};

HttpServer::HttpServer(LabelService& service) : impl_(std::make_unique<Impl>(service)) {
  auto& svr = impl_->server;
  auto& svc = impl_->service;
  auto get = [&svr](const char* path, auto handler) {
    svr.Get(path, [handler](const httplib::Request&, httplib::Response& res) {
      res.set_content(handler(), "application/json");
    });
  };
  get("/session", [&svc] { return svc.session_json(); });
  get("/queries", [&svc] { return svc.queries_json(); });
  get("/curve", [&svc] { return svc.curve_json(); });
  svr.Get("/graph", [&svc](const httplib::Request& req, httplib::Response& res) {
    const std::string flag = req.get_param_value("posterior");
    res.set_content(svc.graph_json(flag == "1" || flag == "true"), "application/json");
  });
  svr.Post("/labels", [&svc](const httplib::Request& req, httplib::Response& res) {
    const auto reply = svc.post_labels(req.body);
    res.status = reply.status;
    res.set_content(reply.body, "application/json");
  });
  svr.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  svr.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                           {"Access-Control-Allow-Headers", "Content-Type"}});
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::start(const std::string& host, int port) {
  auto& svr = impl_->server;
  const int bound = port == 0 ? svr.bind_to_any_port(host) : (svr.bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw InvalidInput("cannot bind " + host + ":" + std::to_string(port));
  impl_->thread = std::thread([&svr] { svr.listen_after_bind(); });
  return bound;
}

void HttpServer::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace caqs::harness
