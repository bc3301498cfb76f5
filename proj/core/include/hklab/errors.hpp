#pragma once

#include <stdexcept>
#include <string>

namespace hklab {

// Error taxonomy, mapped to CLI exit codes: ValidationError -> 1,
// ResourceError -> 2, everything else -> 3.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad parameters, malformed configs, out-of-range queries, degenerate data.
class ValidationError : public Error {
public:
    using Error::Error;
};

// A solve that cannot reach its tolerance within the allowed budget
// (window size, matrix dimension, iteration cap).
class ResourceError : public Error {
public:
    explicit ResourceError(const std::string& msg, long best_tried = -1)
        : Error(msg), best_tried_(best_tried) {}

    // Largest window/size that was attempted before giving up, or -1.
    long best_tried() const { return best_tried_; }

private:
    long best_tried_;
};

}  // namespace hklab
