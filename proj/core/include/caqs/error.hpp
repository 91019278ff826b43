#pragma once

#include <stdexcept>

namespace caqs {

// Thrown when an operation rejects its input (dimension mismatch, unknown id,
// out-of-range class, degenerate training set, ...).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace caqs
