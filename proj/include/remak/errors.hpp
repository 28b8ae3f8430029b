#pragma once

#include <stdexcept>
#include <string>

namespace remak {

// Malformed or out-of-contract input. The CLI maps this to exit code 3.
struct invalid_input : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A configured desk-scale bound was exceeded. The CLI maps this to exit code 2.
struct resource_bound : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A precondition of an algorithm failed (not normal, not abelian, ...).
struct precondition_error : invalid_input {
  using invalid_input::invalid_input;
};

}  // namespace remak
