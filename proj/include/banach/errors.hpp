#pragma once

#include <stdexcept>
#include <string>

namespace banach {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input (vectors, subsets, config, cache files).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A vector's support does not fit the engine's dimension bound.
class DimensionError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A configured size limit would be exceeded; nothing was computed.
class ResourceLimitError : public Error {
 public:
  using Error::Error;
};

/// An internal cross-check (LP duality, certificate, cache identity) failed.
class VerificationError : public Error {
 public:
  using Error::Error;
};

class ChecksumError : public Error {
 public:
  using Error::Error;
};

class VersionError : public Error {
 public:
  using Error::Error;
};

}  // namespace banach
