#pragma once

#include <stdexcept>

namespace cev {

// Bad user input (CLI maps these to exit code 2).
struct validation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A computation left its admissible domain (CLI exit code 3).
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace cev
