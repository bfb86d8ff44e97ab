#pragma once

#include <stdexcept>
#include <string>

namespace rangelab {

enum class ErrorKind {
    Contract,           // precondition or argument violation
    Singular,           // vanishing gradient / vertical tangent where a graph is required
    ResourceExhausted,  // enumeration or refinement budget exceeded
    SharedFactor,       // resultant vanished identically
    CoverFailure,       // no admissible slab cover at any level
    DerivativeBound,    // implicit derivative outside the hierarchy range
    Ambiguous,          // region classification could not be decided
    EmptyGrid,          // coefficient grid of a lower-bound family is empty
    NonPacked,          // root outside the packed bracket
    Input               // malformed external data
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace rangelab
