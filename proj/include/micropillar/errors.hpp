#ifndef MICROPILLAR_ERRORS_HPP
#define MICROPILLAR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace micropillar {

// Invalid input: a type invariant or operation precondition is violated.
// The message names the first violated invariant (and, for config files,
// the line and field it came from).
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure inside an otherwise valid computation (factorization
// failure, non-convergent fit, unresolvable peak).
class ComputeError : public std::runtime_error {
public:
    explicit ComputeError(const std::string& what) : std::runtime_error(what) {}
};

// File / stream problems.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace micropillar

#endif
