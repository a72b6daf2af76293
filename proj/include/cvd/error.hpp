#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace cvd {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An operation was handed data in a state it does not accept
/// (e.g. an LMS image where RGB is required).
class ContractError : public Error {
public:
    using Error::Error;
};

/// A numeric argument lies outside its admissible range.
class DomainError : public Error {
public:
    using Error::Error;
};

class SingularMatrixError : public Error {
public:
    explicit SingularMatrixError(double det)
        : Error("matrix is singular (det = " + std::to_string(det) + ")"), det_(det) {}

    [[nodiscard]] double determinant() const noexcept { return det_; }

private:
    double det_;
};

/// Malformed input document. `line` is 1-based, 0 when unknown.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0, std::string field = {})
        : Error(format(what, line, field)), line_(line), field_(std::move(field)) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }
    [[nodiscard]] const std::string& field() const noexcept { return field_; }

private:
    static std::string format(const std::string& what, std::size_t line, const std::string& field) {
        std::string msg = what;
        if (line != 0) msg += " (line " + std::to_string(line) + ")";
        if (!field.empty()) msg += " [field: " + field + "]";
        return msg;
    }

    std::size_t line_;
    std::string field_;
};

/// Well-formed input that violates one or more invariants. Every violation is listed.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<std::string> problems)
        : Error(join(problems)), problems_(std::move(problems)) {}

    [[nodiscard]] const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    static std::string join(const std::vector<std::string>& problems) {
        std::string msg = "validation failed";
        for (const auto& p : problems) msg += "; " + p;
        return msg;
    }

    std::vector<std::string> problems_;
};

class StateError : public Error {
public:
    using Error::Error;
};

class NotFoundError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace cvd
