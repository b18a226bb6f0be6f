#pragma once

#include <stdexcept>
#include <string>

namespace dengue {

/// Base of all domain failures. Each subclass maps onto one ApiError code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input failed a validation rule. `field` names the offending input, if any.
class ValidationError : public Error {
public:
    explicit ValidationError(std::string field, const std::string& message)
        : Error(message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// A coordinate outside the WGS84 range.
class OutOfRangeError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// A batch upload larger than the per-request limit.
class BatchTooLargeError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class ConflictError : public Error {
public:
    explicit ConflictError(std::string field, const std::string& message)
        : Error(message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class NotFoundError : public Error {
public:
    using Error::Error;
};

class StorageError : public Error {
public:
    using Error::Error;
};

}  // namespace dengue
