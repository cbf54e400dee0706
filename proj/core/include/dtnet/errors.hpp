#pragma once

#include <stdexcept>
#include <string>

namespace dtnet {

// Bad user input: malformed files, schema mismatches, out-of-contract arguments.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Non-finite values where finite arithmetic was expected (diverged training etc.).
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace dtnet
