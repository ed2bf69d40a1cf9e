#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ovcyst {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad input or configuration, detected before or while validating data.
class ValidationError : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class MissingColumn : public ValidationError {
public:
    explicit MissingColumn(const std::string& column)
        : ValidationError("missing column '" + column + "'"), column_(column) {}
    const std::string& column() const noexcept { return column_; }

private:
    std::string column_;
};

class ParseError : public ValidationError {
public:
    ParseError(std::size_t line, const std::string& column, const std::string& what)
        : ValidationError("line " + std::to_string(line) + ", column '" + column + "': " + what),
          line_(line),
          column_(column) {}
    std::size_t line() const noexcept { return line_; }
    const std::string& column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::string column_;
};

class UnknownLabel : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class LengthMismatch : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class KTooLarge : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class DegenerateClass : public Error {
public:
    using Error::Error;
};

class AllMissingColumn : public Error {
public:
    explicit AllMissingColumn(const std::string& column)
        : Error("column '" + column + "' has no observed values"), column_(column) {}
    const std::string& column() const noexcept { return column_; }

private:
    std::string column_;
};

class NoValidDonor : public Error {
public:
    using Error::Error;
};

class TooFewMembers : public Error {
public:
    using Error::Error;
};

class SingleClass : public Error {
public:
    using Error::Error;
};

class DegenerateLabels : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    IoError(const std::string& path, const std::string& what)
        : Error(path + ": " + what), path_(path) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

// A pipeline stage failed; wraps the original message with the stage name.
class StageError : public Error {
public:
    StageError(const std::string& stage, const std::string& what, bool validation)
        : Error("stage '" + stage + "': " + what), stage_(stage), validation_(validation) {}
    const std::string& stage() const noexcept { return stage_; }
    bool is_validation() const noexcept { return validation_; }

private:
    std::string stage_;
    bool validation_;
};

}  // namespace ovcyst
