#pragma once

#include <stdexcept>
#include <string>

namespace gmtk {

// Malformed or out-of-contract input. Maps to CLI exit code 1.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Two independent computations of the same quantity disagree. Exit code 2.
class ConsistencyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace gmtk
