#pragma once

#include <stdexcept>
#include <string>

namespace cmhecke {

// Bad arguments: violated preconditions, malformed inputs.
struct invalid_input : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A table, cutoff or integer range is too small for the request.
struct capacity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct division_error : std::domain_error {
    using std::domain_error::domain_error;
};

// Something that is provably impossible happened; indicates a bug.
struct consistency_error : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace cmhecke
