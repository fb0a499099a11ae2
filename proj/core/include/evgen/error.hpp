#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace evgen {

// Root of every exception thrown by the library. The CLI maps these to the
// data/resource exit code unless a subclass says otherwise.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Errors that carry a 1-based line number of an input file.
class LineError : public Error {
 public:
  LineError(const std::string& what, std::size_t line)
      : Error(what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace evgen
