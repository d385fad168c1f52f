#pragma once

#include <stdexcept>
#include <string>

namespace neuconj {

// Root of every exception the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised on unreadable/unwritable files and malformed persisted artifacts.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace neuconj
