#pragma once

#include <stdexcept>
#include <string>

namespace qg {

// Base class for all errors raised by the library.
class QgError : public std::runtime_error {
public:
  explicit QgError(const std::string& what) : std::runtime_error(what) {}
};

class NonPositiveDensity : public QgError {
public:
  explicit NonPositiveDensity(const std::string& what) : QgError(what) {}
};

class OneFormViolation : public QgError {
public:
  explicit OneFormViolation(const std::string& what) : QgError(what) {}
};

class SpaceMismatch : public QgError {
public:
  explicit SpaceMismatch(const std::string& what) : QgError(what) {}
};

class NotCompletelyPositive : public QgError {
public:
  explicit NotCompletelyPositive(const std::string& what) : QgError(what) {}
};

class NotSchurIdempotent : public QgError {
public:
  NotSchurIdempotent(const std::string& what, double residual)
      : QgError(what), residual_(residual) {}
  double residual() const { return residual_; }

private:
  double residual_ = 0.0;
};

class NonBinaryEntries : public QgError {
public:
  explicit NonBinaryEntries(const std::string& what) : QgError(what) {}
};

class DimensionOutOfRange : public QgError {
public:
  explicit DimensionOutOfRange(const std::string& what) : QgError(what) {}
};

class BasisNotOrthonormal : public QgError {
public:
  explicit BasisNotOrthonormal(const std::string& what) : QgError(what) {}
};

class NotUndirected : public QgError {
public:
  explicit NotUndirected(const std::string& what) : QgError(what) {}
};

class NotGnsSymmetric : public QgError {
public:
  explicit NotGnsSymmetric(const std::string& what) : QgError(what) {}
};

class NotConnected : public QgError {
public:
  explicit NotConnected(const std::string& what) : QgError(what) {}
};

class NotAHomomorphismOfAlgebras : public QgError {
public:
  explicit NotAHomomorphismOfAlgebras(const std::string& what) : QgError(what) {}
};

// Raised when independent decision procedures disagree; indicates a bug in
// the library rather than bad input.
class MethodDisagreement : public QgError {
public:
  explicit MethodDisagreement(const std::string& what) : QgError(what) {}
};

class ParseError : public QgError {
public:
  explicit ParseError(const std::string& what) : QgError(what) {}
};

}  // namespace qg
