#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace gesera {

/// Raised for every contract violation and malformed input in the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-fatal diagnostics collected by operations that can proceed anyway.
using Warnings = std::vector<std::string>;

}  // namespace gesera
