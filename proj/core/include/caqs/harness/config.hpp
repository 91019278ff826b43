#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

namespace caqs::harness {

// Flat "key = value" text, one pair per line, '#' starts a comment.
// Known keys: q, K, k, delta, lambda, alpha, alpha_decay, epochs, buffer,
// batch, damping, bp_tol, bp_iters, seed, mode, strategy, initial_fraction,
// initial_epochs, initial_random, context_labels, bins, node_limit, and the
// synthetic generator keys n, dim, super_categories, context_strength, noise,
// detector_noise, test_fraction, run_min, run_max.
class Config {
 public:
  static Config parse(std::istream& in);
  static Config load(const std::filesystem::path& path);

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  bool has(const std::string& key) const { return values_.count(key) != 0; }

  std::optional<std::string> get(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::size_t get_size(const std::string& key, std::size_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace caqs::harness
