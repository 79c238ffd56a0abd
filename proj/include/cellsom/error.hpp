#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cellsom {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed matrix text. `line()` is 1-based; 0 means end of input.
class ParseError : public Error {
public:
  ParseError(std::size_t line, const std::string& detail, const std::string& source = "")
      : Error((source.empty() ? "" : source + ": ") +
              (line == 0 ? "end of input: " : "line " + std::to_string(line) + ": ") + detail),
        line_(line),
        detail_(detail) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& detail() const noexcept { return detail_; }

private:
  std::size_t line_;
  std::string detail_;
};

/// Two objects that must agree in size do not.
class DimensionError : public Error {
public:
  using Error::Error;
};

}  // namespace cellsom
