#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "caqs/instance.hpp"

namespace caqs::harness {

inline constexpr int kDatasetSchemaVersion = 1;

struct Dataset {
  std::vector<std::string> class_names;
  std::vector<AttributeSchema> attributes;  // person dim = bin count
  std::vector<ActivityInstance> instances;  // stream order
  std::vector<std::size_t> train;           // indices into instances, stream order
  std::vector<std::size_t> test;

  std::size_t class_count() const { return class_names.size(); }
  std::size_t feature_dim() const {
    return instances.empty() ? 0 : static_cast<std::size_t>(instances.front().features.size());
  }
};

// Labels < q, disjoint splits, consistent feature length, valid observations.
void validate(const Dataset& dataset);

// JSON Lines. The first line is a header
//   {"schema_version":1,"type":"header","classes":[...],
//    "attributes":[{"name":"object","kind":"object","dim":4},
//                  {"name":"person","kind":"person","bins":8}]}
// followed by one instance per line
//   {"schema_version":1,"id":"a000001","features":[...],"t":12.5,"s":[x,y],
//    "label":3,"split":"train","group":7,
//    "context":[{"kind":"object","pmf":[...],"s":[x,y]},
//               {"kind":"person","value":1.7,"s":[x,y]}]}
// where "kind" names an attribute from the header.
Dataset read_dataset(std::istream& in);
void write_dataset(std::ostream& out, const Dataset& dataset);

Dataset load_dataset(const std::filesystem::path& path);
void save_dataset(const std::filesystem::path& path, const Dataset& dataset);

}  // namespace caqs::harness
