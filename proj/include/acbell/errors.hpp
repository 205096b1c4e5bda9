#pragma once

#include <stdexcept>
#include <string>

namespace acbell {

// A geometric quantity was requested at (or across) the line-charge puncture,
// where field and phase are undefined.
class SingularityError : public std::runtime_error {
public:
    explicit SingularityError(const std::string& what) : std::runtime_error(what) {}
};

// A numerical routine cannot honor its accuracy contract for the given input.
class AccuracyError : public std::runtime_error {
public:
    explicit AccuracyError(const std::string& what) : std::runtime_error(what) {}
};

// A trajectory breaks the impenetrability constraint (exclusion radius around
// the line charge) or does not connect its declared endpoints.
class PathViolationError : public std::runtime_error {
public:
    explicit PathViolationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace acbell
