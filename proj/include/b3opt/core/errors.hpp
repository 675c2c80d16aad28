#pragma once

#include <stdexcept>
#include <string>

namespace b3opt {

// Error categories map 1:1 onto CLI exit codes (3, 4, 5).
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace b3opt
