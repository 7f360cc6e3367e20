#pragma once

#include <stdexcept>
#include <string>

namespace tmfkit {

// Bad input: malformed data, unmet preconditions. The CLI maps this to exit code 2.
class input_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Arithmetic that has no answer in the given ring (non-unit, inexact division).
class arithmetic_error : public input_error {
public:
    using input_error::input_error;
};

// A violated internal invariant. The CLI maps this to exit code 3.
class consistency_error : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

inline void ensure(bool ok, const std::string& what)
{
    if (!ok) {
        throw consistency_error(what);
    }
}

} // namespace tmfkit
