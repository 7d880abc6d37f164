#pragma once

#include <stdexcept>
#include <string>

namespace manneville {

/// Iterative numerics failed to converge within their cap.
class numeric_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Requested work exceeds the supported size.
class resource_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input does not have the structure an operation requires
/// (e.g. an inadmissible symbol string handed to the compressor).
class structure_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Asymptotic prediction requested outside the cases it covers.
class unsupported_regime : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

} // namespace manneville
