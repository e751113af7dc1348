#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace peer {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownTriplet : public Error {
 public:
  explicit UnknownTriplet(const std::string& name)
      : Error("unknown triplet '" + name + "'"), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

class SingularMatrix : public Error {
 public:
  SingularMatrix(const std::string& what, int index)
      : Error(what + " (index " + std::to_string(index) + ")"), index_(index) {}
  int index() const noexcept { return index_; }

 private:
  int index_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& field, const std::string& detail)
      : Error("coefficient file, field '" + field + "': " + detail), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class Infeasible : public Error {
 public:
  Infeasible(const std::string& what, int constraint)
      : Error(what + " (constraint " + std::to_string(constraint) + ")"),
        constraint_(constraint) {}
  int constraint() const noexcept { return constraint_; }

 private:
  int constraint_;
};

/// Newton or pseudo-time iteration gave up; carries the last residual.
class ConvergenceFailure : public Error {
 public:
  ConvergenceFailure(const std::string& what, double residual)
      : Error(what + " (residual " + format(residual) + ")"), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  static std::string format(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
  }
  double residual_;
};

class DegenerateControl : public Error {
 public:
  using Error::Error;
};

/// A convergence study stopped at the run with N steps.
class StudyFailure : public Error {
 public:
  StudyFailure(int n, const std::string& cause) : Error("run with N = " + std::to_string(n) + " failed: " + cause), n_(n) {}
  int n() const noexcept { return n_; }

 private:
  int n_;
};

}  // namespace peer
