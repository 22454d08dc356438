#pragma once

#include <stdexcept>
#include <string>

namespace rcurc {

/// Raised when a caller violates a documented precondition (bad shape,
/// out-of-range parameter, inconsistent index sets, ...).
class ArgumentError : public std::invalid_argument {
 public:
  explicit ArgumentError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when serialized input bytes cannot be parsed (bad magic, truncated
/// payload, malformed JSON/PGM). Messages include what was found and where.
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a numeric kernel fails to produce a usable result
/// (e.g. an SVD that does not converge).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised on filesystem-level failures (missing path, unreadable file).
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rcurc
