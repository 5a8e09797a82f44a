#pragma once

#include <stdexcept>
#include <string>

namespace observkit {

/// Shapes do not conform (matrix product, model assembly, trace widths).
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A value violates a precondition (non-finite entry, non-positive horizon...).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A factorization met a pivot below its threshold.
class SingularMatrixError : public std::runtime_error {
public:
    SingularMatrixError(const std::string& what, double pivot, double threshold)
        : std::runtime_error(what), pivot_(pivot), threshold_(threshold) {}

    [[nodiscard]] double pivot() const noexcept { return pivot_; }
    [[nodiscard]] double threshold() const noexcept { return threshold_; }

private:
    double pivot_;
    double threshold_;
};

}  // namespace observkit
