#pragma once

#include <stdexcept>
#include <string>

namespace pir2 {

// Base class for all library errors.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Invalid user-supplied parameters (system tuple, code sizes, CLI flags).
class ParamError : public Error {
  public:
    using Error::Error;
};

// A linear system that should have been solvable was singular, or an
// inversion of zero was requested.
class SingularMatrixError : public Error {
  public:
    using Error::Error;
};

// Erasure completion was asked to reconstruct a codeword from fewer than k
// coordinates.
class InsufficientDataError : public Error {
  public:
    using Error::Error;
};

// Over-determined data was internally inconsistent (corrupted symbols).
class CorruptionError : public Error {
  public:
    using Error::Error;
};

// Malformed or mismatched wire traffic.
class ProtocolError : public Error {
  public:
    using Error::Error;
};

// Socket-level failures (bind, connect, truncated streams).
class TransportError : public Error {
  public:
    using Error::Error;
};

// A retrieval completed but verification against the stored message failed.
class RetrievalError : public Error {
  public:
    using Error::Error;
};

}  // namespace pir2
