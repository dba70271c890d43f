#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kaczmarz {

// Base class for every error raised by the library. Indices stored in the
// derived types are 0-based; messages print them 1-based.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class NonFinite : public Error {
public:
    using Error::Error;
};

// A Householder pivot fell below the rank tolerance at `column`.
class RankDeficient : public Error {
public:
    explicit RankDeficient(std::size_t column)
        : Error("rank deficient: pivot " + std::to_string(column + 1) +
                " below rank tolerance"),
          column_(column) {}

    std::size_t column() const noexcept { return column_; }

private:
    std::size_t column_;
};

class SingularTriangle : public Error {
public:
    explicit SingularTriangle(std::size_t index)
        : Error("singular triangular factor: |r_ii| too small at i = " +
                std::to_string(index + 1)),
          index_(index) {}

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

class Inconsistent : public Error {
public:
    using Error::Error;
};

// Raised by the solver when the maximal residual stalls over a whole window.
class InconsistentSuspected : public Error {
public:
    explicit InconsistentSuspected(std::size_t iteration)
        : Error("system looks inconsistent: max residual stalled up to iteration " +
                std::to_string(iteration)),
          iteration_(iteration) {}

    std::size_t iteration() const noexcept { return iteration_; }

private:
    std::size_t iteration_;
};

class ZeroRow : public Error {
public:
    explicit ZeroRow(std::size_t row)
        : Error("row " + std::to_string(row + 1) + " is identically zero"), row_(row) {}

    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

class MalformedTaus : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& reason)
        : Error("parse error at line " + std::to_string(line) + ": " + reason),
          line_(line), reason_(reason) {}

    std::size_t line() const noexcept { return line_; }
    const std::string& reason() const noexcept { return reason_; }

private:
    std::size_t line_;
    std::string reason_;
};

}  // namespace kaczmarz
