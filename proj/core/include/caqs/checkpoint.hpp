#pragma once

#include <filesystem>
#include <iosfwd>

#include "caqs/context_model.hpp"
#include "caqs/mlr.hpp"

namespace caqs {

inline constexpr int kCheckpointVersion = 1;

struct Checkpoint {
  MlrModel classifier;
  ContextModel context;
};

// Line-oriented "key value..." text; the first line is "caqs-checkpoint <version>".
// Doubles are written with 17 significant digits, so load(save(x)) == x.
void save_checkpoint(std::ostream& out, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(std::istream& in);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace caqs
