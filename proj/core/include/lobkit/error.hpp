#pragma once

#include <stdexcept>
#include <string>

namespace lobkit {

/// Bad input: malformed data, violated preconditions, invalid parameters.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File could not be opened, read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a function (e.g. trade volume beyond book depth).
class DomainError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// A statistic is undefined on the given data (zero variance, zero denominator).
class UndefinedStatistic : public ValidationError {
public:
    using ValidationError::ValidationError;
};

}  // namespace lobkit
