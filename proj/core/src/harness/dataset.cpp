#include "caqs/harness/dataset.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <string>

#include "json.hpp"

#include "caqs/error.hpp"

namespace caqs::harness {
namespace {

using nlohmann::json;

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw InvalidInput("dataset line " + std::to_string(line) + ": " + what);
}

Eigen::VectorXd to_vector(const json& j) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  return v;
}

Eigen::Vector2d to_point(const json& j) {
  if (!j.is_array() || j.size() != 2) throw InvalidInput("position must be [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

json from_vector(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json from_point(const Eigen::Vector2d& p) { return json::array({p.x(), p.y()}); }

void check_version(const json& j, std::size_t line) {
  if (!j.contains("schema_version")) fail(line, "missing schema_version");
  if (j.at("schema_version").get<int>() != kDatasetSchemaVersion)
    fail(line, "unsupported schema_version " + j.at("schema_version").dump());
}

}  // namespace

void validate(const Dataset& dataset) {
  const std::size_t q = dataset.class_count();
  if (q < 2) throw InvalidInput("dataset needs at least two classes");
  const std::size_t d = dataset.feature_dim();
  std::set<std::string> ids;
  for (const auto& inst : dataset.instances) {
    validate_instance(inst, d, dataset.attributes);
    if (inst.true_label && *inst.true_label >= q)
      throw InvalidInput("instance " + inst.id + ": label out of range");
    if (!ids.insert(inst.id).second) throw InvalidInput("duplicate instance id " + inst.id);
  }
  std::set<std::size_t> seen;
  for (const auto* split : {&dataset.train, &dataset.test}) {
    for (std::size_t i : *split) {
      if (i >= dataset.instances.size()) throw InvalidInput("split index out of range");
      if (!seen.insert(i).second) throw InvalidInput("split indices overlap");
    }
  }
}

Dataset read_dataset(std::istream& in) {
  Dataset ds;
  std::string text;
  std::size_t line = 0;
  bool have_header = false;
  std::map<std::string, std::size_t> attribute_index;
  bool any_split = false;
  std::vector<std::string> splits;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      fail(line, std::string("malformed JSON: ") + e.what());
    }
    try {
      check_version(j, line);
      if (!have_header) {
        if (j.value("type", std::string{}) != "header") fail(line, "first record must be the header");
        ds.class_names = j.at("classes").get<std::vector<std::string>>();
        for (const auto& a : j.at("attributes")) {
          AttributeSchema schema;
          schema.name = a.at("name").get<std::string>();
          const auto kind = a.at("kind").get<std::string>();
          if (kind == "object") {
            schema.kind = AttributeKind::object;
            schema.dim = a.at("dim").get<std::size_t>();
          } else if (kind == "person") {
            schema.kind = AttributeKind::person;
            schema.dim = a.value("bins", std::size_t{8});
          } else {
            fail(line, "unknown attribute kind " + kind);
          }
          if (!attribute_index.emplace(schema.name, ds.attributes.size()).second)
            fail(line, "duplicate attribute " + schema.name);
          ds.attributes.push_back(schema);
        }
        have_header = true;
        continue;
      }
      ActivityInstance inst;
      inst.id = j.at("id").get<std::string>();
      inst.features = to_vector(j.at("features"));
      inst.time = j.at("t").get<double>();
      inst.position = to_point(j.at("s"));
      if (j.contains("label") && !j.at("label").is_null())
        inst.true_label = j.at("label").get<std::size_t>();
      if (j.contains("group") && !j.at("group").is_null())
        inst.group = j.at("group").get<std::int64_t>();
      if (j.contains("context")) {
        for (const auto& c : j.at("context")) {
          ContextObservation obs;
          const auto name = c.at("kind").get<std::string>();
          auto it = attribute_index.find(name);
          if (it == attribute_index.end()) fail(line, "unknown context kind " + name);
          obs.attribute = it->second;
          if (c.contains("pmf")) obs.pmf = to_vector(c.at("pmf"));
          if (c.contains("value")) obs.value = c.at("value").get<double>();
          if (c.contains("s")) obs.position = to_point(c.at("s"));
          inst.context.push_back(std::move(obs));
        }
      }
      std::string split = j.value("split", std::string{});
      if (!split.empty()) {
        if (split != "train" && split != "test") fail(line, "split must be train or test");
        any_split = true;
      }
      splits.push_back(split);
      ds.instances.push_back(std::move(inst));
    } catch (const json::exception& e) {
      fail(line, e.what());
    }
  }
  if (!have_header) throw InvalidInput("dataset has no header record");
  for (std::size_t i = 0; i < ds.instances.size(); ++i) {
    // Without split tags every labeled instance trains.
    if (any_split && splits[i] == "test")
      ds.test.push_back(i);
    else
      ds.train.push_back(i);
  }
  validate(ds);
  return ds;
}

void write_dataset(std::ostream& out, const Dataset& dataset) {
  validate(dataset);
  json header = {{"schema_version", kDatasetSchemaVersion},
                 {"type", "header"},
                 {"classes", dataset.class_names}};
  json attrs = json::array();
  for (const auto& a : dataset.attributes) {
    if (a.kind == AttributeKind::object)
      attrs.push_back({{"name", a.name}, {"kind", "object"}, {"dim", a.dim}});
    else
      attrs.push_back({{"name", a.name}, {"kind", "person"}, {"bins", a.dim}});
  }
  header["attributes"] = attrs;
  out << header.dump() << '\n';

  std::vector<std::string> split(dataset.instances.size());
  for (std::size_t i : dataset.train) split[i] = "train";
  for (std::size_t i : dataset.test) split[i] = "test";
  for (std::size_t i = 0; i < dataset.instances.size(); ++i) {
    const auto& inst = dataset.instances[i];
    json j = {{"schema_version", kDatasetSchemaVersion},
              {"id", inst.id},
              {"features", from_vector(inst.features)},
              {"t", inst.time},
              {"s", from_point(inst.position)}};
    if (inst.true_label) j["label"] = *inst.true_label;
    if (!split[i].empty()) j["split"] = split[i];
    if (inst.group) j["group"] = *inst.group;
    json ctx = json::array();
    for (const auto& obs : inst.context) {
      json c = {{"kind", dataset.attributes[obs.attribute].name}};
      if (obs.pmf) c["pmf"] = from_vector(*obs.pmf);
      if (obs.value) c["value"] = *obs.value;
      c["s"] = from_point(obs.position);
      ctx.push_back(std::move(c));
    }
    j["context"] = std::move(ctx);
    out << j.dump() << '\n';
  }
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open dataset " + path.string());
  return read_dataset(in);
}

void save_dataset(const std::filesystem::path& path, const Dataset& dataset) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write dataset " + path.string());
  write_dataset(out, dataset);
}

}  // namespace caqs::harness
