#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sqh {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : Error {
  std::size_t position;
  ParseError(std::size_t pos, const std::string& message)
      : Error(message + " (at offset " + std::to_string(pos) + ")"),
        position(pos) {}
};

struct NotQuasiHomogeneous : Error {
  using Error::Error;
};

struct EqualDegrees : Error {
  using Error::Error;
};

struct NotCoprime : Error {
  using Error::Error;
};

struct InsufficientSlots : Error {
  using Error::Error;
};

struct SeriesOrderExhausted : Error {
  using Error::Error;
};

}  // namespace sqh
