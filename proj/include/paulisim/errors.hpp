#pragma once
#include <stdexcept>
#include <string>

namespace psim {

// invalid arguments, dimension mismatches, malformed inputs
struct value_error : std::runtime_error {
  explicit value_error(const std::string& msg) : std::runtime_error(msg) {}
};

// numerical-consistency failures (non-Hermitian results, underflow, no convergence)
struct numerical_error : std::runtime_error {
  explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct io_error : std::runtime_error {
  explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace psim
