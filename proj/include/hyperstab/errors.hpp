#pragma once

#include <stdexcept>
#include <string>

namespace hyperstab {

/// Base class for all library errors.  Each category maps to a fixed
/// process exit code so the CLI can translate failures uniformly.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
  virtual int exit_code() const { return 70; }
  virtual ~Error() = default;
};

/// Malformed input text (JSON syntax, wrong value types).
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& msg) : Error(msg) {}
  int exit_code() const override { return 2; }
};

/// Structurally invalid data (vertex index out of range, empty hyperedge,
/// duplicate members, shape mismatches between operands).
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& msg) : Error(msg) {}
  int exit_code() const override { return 2; }
};

/// File could not be opened or written.
class IoError : public Error {
 public:
  explicit IoError(const std::string& msg) : Error(msg) {}
  int exit_code() const override { return 2; }
};

/// Operation left its mathematical domain: isolated vertex in a Laplacian,
/// geometric mean of non-positive values, divergent trajectory.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& msg) : Error(msg) {}
  int exit_code() const override { return 3; }
};

/// A trajectory left the finite floating-point range.  Carries the vertex
/// and time at which the blow-up was detected.
class DivergenceError : public DomainError {
 public:
  DivergenceError(int vertex, double t)
      : DomainError("trajectory diverged to non-finite values at vertex " +
                    std::to_string(vertex) + ", t = " + std::to_string(t)),
        vertex_(vertex),
        t_(t) {}
  int vertex() const { return vertex_; }
  double time() const { return t_; }

 private:
  int vertex_;
  double t_;
};

/// Bad command-line usage (unknown dynamics name, malformed grid spec).
class UsageError : public Error {
 public:
  explicit UsageError(const std::string& msg) : Error(msg) {}
  int exit_code() const override { return 64; }
};

/// The spectrum has no zero eigenvalue, so no synchronized (or generalized
/// synchronized) state exists to stabilize.
class SyncPrecludedError : public Error {
 public:
  explicit SyncPrecludedError(const std::string& msg) : Error(msg) {}
  int exit_code() const override { return 4; }
};

/// The spectrum has no nonzero eigenvalue: every mode is neutral and a
/// coupling window is undefined.
class NoTransverseModesError : public Error {
 public:
  explicit NoTransverseModesError(const std::string& msg) : Error(msg) {}
  int exit_code() const override { return 5; }
};

/// Violation of an internal invariant (e.g. a PSD matrix produced a
/// significantly negative eigenvalue).
class InternalError : public Error {
 public:
  explicit InternalError(const std::string& msg) : Error(msg) {}
  int exit_code() const override { return 70; }
};

}  // namespace hyperstab
