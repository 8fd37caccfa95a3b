#pragma once

#include <stdexcept>
#include <string>

namespace ponomarev {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point lies outside the closed cube [-1,1]^n.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A word or request exceeds the depth of a sequence pack.
class DepthError : public Error {
 public:
  using Error::Error;
};

/// Floating-point overflow while evaluating a gauge.
class RangeError : public Error {
 public:
  using Error::Error;
};

class NoRootError : public Error {
 public:
  NoRootError(const std::string& what, int k = -1) : Error(what), k_(k) {}
  /// Depth index of the failing root, or -1 when not part of a sequence.
  int k() const noexcept { return k_; }

 private:
  int k_;
};

class HypothesisViolated : public Error {
 public:
  using Error::Error;
};

/// Invalid sequence pack or gluing residual above tolerance.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

/// The sup-norm argmax is not unique, so the map is not differentiable there.
class RidgeSetError : public Error {
 public:
  using Error::Error;
};

class ToleranceError : public Error {
 public:
  using Error::Error;
};

class CoverageError : public Error {
 public:
  using Error::Error;
};

/// A value that must be a dyadic rational is not one.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

}  // namespace ponomarev
