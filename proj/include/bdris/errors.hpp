#pragma once

#include <stdexcept>
#include <string>

namespace bdris {

// Invalid user-supplied parameter (non-positive frequency, bad bounds, ...).
struct InvalidParameter : std::invalid_argument {
    explicit InvalidParameter(const std::string& msg) : std::invalid_argument(msg) {}
};

// A matrix argument violates a hard constraint (e.g. non-passive phase matrix).
struct ConstraintViolation : std::invalid_argument {
    explicit ConstraintViolation(const std::string& msg) : std::invalid_argument(msg) {}
};

// Numerically rank-deficient channel where the design needs full rank.
struct DegenerateChannel : std::runtime_error {
    explicit DegenerateChannel(const std::string& msg) : std::runtime_error(msg) {}
};

// Requested (M, K) outside the range a closed form is derived for.
struct UnsupportedRegime : std::invalid_argument {
    explicit UnsupportedRegime(const std::string& msg) : std::invalid_argument(msg) {}
};

// Non-finite value or failed internal cross-check.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// A constructed model failed its own consistency checks (construction bug).
struct InternalConsistencyError : std::logic_error {
    explicit InternalConsistencyError(const std::string& msg) : std::logic_error(msg) {}
};

// SNIS prefix with (numerically) zero solution density.
struct InfeasiblePrefix : std::runtime_error {
    explicit InfeasiblePrefix(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace bdris
