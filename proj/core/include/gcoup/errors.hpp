#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gcoup {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when an evaluation would produce NaN or an undefined extended form.
struct EvalError : Error {
  using Error::Error;
};

struct ParseError : Error {
  std::size_t offset;
  ParseError(const std::string& msg, std::size_t off)
      : Error(msg + " at offset " + std::to_string(off)), offset(off) {}
};

struct GridError : Error {
  using Error::Error;
};

struct SetSpecError : Error {
  using Error::Error;
};

// Problem-file validation failure; `path` points at the offending JSON node.
struct SchemaError : Error {
  std::string path;
  SchemaError(const std::string& msg, std::string p)
      : Error(msg + " (at " + p + ")"), path(std::move(p)) {}
};

}  // namespace gcoup
