#pragma once

#include <stdexcept>
#include <string>

namespace hpt {

// Bad arguments: mismatched modules, wrong degrees, length mismatches.
struct ArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Input data violates the stated contract of an operation (e.g. repair
// called on data that is not a homotopy equivalence).
struct ContractViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A precondition of a construction does not hold for the given input.
struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A value would fall outside the truncation window.
struct TruncationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The complement of the image of nabla has homology in some degree.
struct NoContractionError : std::runtime_error {
    int degree;
    NoContractionError(const std::string& what, int deg) : std::runtime_error(what), degree(deg) {}
};

// A verified identity failed on output we produced ourselves. Always a bug.
struct InternalError : std::logic_error {
    using std::logic_error::logic_error;
};

// Malformed input files.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace hpt
