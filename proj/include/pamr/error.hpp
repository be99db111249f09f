#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pamr {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File could not be opened or read.
class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed lexicon or corpus input. `line` is 1-based, 0 when unknown.
class FormatError : public Error {
 public:
  FormatError(const std::string& message, std::size_t line = 0, const std::string& source = {})
      : Error((source.empty() ? "" : source + ": ") +
              (line == 0 ? "" : "line " + std::to_string(line) + ": ") + message),
        detail_(message),
        line_(line) {}

  std::size_t line() const { return line_; }
  // The message without source and line prefixes.
  const std::string& detail() const { return detail_; }

 private:
  std::string detail_;
  std::size_t line_;
};

// A precondition of an operation was violated (non-wellformed graph,
// oversized exact search, empty input list, ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

}  // namespace pamr
