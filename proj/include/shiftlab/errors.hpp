#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace shiftlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Explicit weight data was queried past its trustworthy range.
class IndexOutOfData : public Error {
public:
    IndexOutOfData(std::size_t index, std::size_t max_index)
        : Error("index " + std::to_string(index) + " beyond explicit weight data (max " +
                std::to_string(max_index) + ")"),
          index_(index), max_index_(max_index) {}
    std::size_t index() const noexcept { return index_; }
    std::size_t max_index() const noexcept { return max_index_; }

private:
    std::size_t index_;
    std::size_t max_index_;
};

/// Gram-Schmidt met a vector (numerically) in the span of its predecessors.
class RankDeficient : public Error {
public:
    RankDeficient(std::size_t column, double singular_value)
        : Error("basis is rank deficient at column " + std::to_string(column)),
          column_(column), singular_value_(singular_value) {}
    std::size_t column() const noexcept { return column_; }
    double singular_value() const noexcept { return singular_value_; }

private:
    std::size_t column_;
    double singular_value_;
};

/// T*M_in is not contained in M_out within tolerance.
class InvarianceViolation : public Error {
public:
    explicit InvarianceViolation(double defect)
        : Error("subspace is not invariant (defect " + std::to_string(defect) + ")"),
          defect_(defect) {}
    double defect() const noexcept { return defect_; }

private:
    double defect_;
};

/// Krylov span of the projected cyclic vector has too small a dimension.
class CyclicityFailure : public Error {
public:
    CyclicityFailure(std::size_t achieved, std::size_t expected)
        : Error("cyclic vector generates dimension " + std::to_string(achieved) + " < " +
                std::to_string(expected)),
          achieved_(achieved), expected_(expected) {}
    std::size_t achieved() const noexcept { return achieved_; }
    std::size_t expected() const noexcept { return expected_; }

private:
    std::size_t achieved_;
    std::size_t expected_;
};

/// Bad CLI configuration; carries the offending key.
class ConfigError : public Error {
public:
    ConfigError(std::string key, const std::string& what)
        : Error(key + ": " + what), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

}  // namespace shiftlab
