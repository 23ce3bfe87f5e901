#pragma once

#include <stdexcept>
#include <string>

namespace soldiv {

// A caller-visible precondition was violated (bad w/u, lambda out of range,
// non-multiple passed to the exact divider, malformed environment override).
class ParameterError : public std::invalid_argument {
public:
    explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

// A request would exceed a hard cost guard (e.g. exhaustive sweeps above the
// supported width). Distinct from ParameterError so callers can map it to a
// dedicated exit code.
class ResourceLimitError : public std::runtime_error {
public:
    explicit ResourceLimitError(const std::string& what) : std::runtime_error(what) {}
};

// Constant search failed: no (a, b, k) passed verification for a baseline.
class SetupError : public std::runtime_error {
public:
    explicit SetupError(const std::string& what) : std::runtime_error(what) {}
};

// An internal consistency check tripped: the iteration exceeded its update
// cap, or a verification-mode datapath saw a state it cannot correct.
class InternalError : public std::logic_error {
public:
    explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

} // namespace soldiv
