#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace radex {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::size_t expected, std::size_t got)
      : Error("dimension mismatch: expected " + std::to_string(expected) + ", got " +
              std::to_string(got)),
        expected_(expected),
        got_(got) {}
  std::size_t expected() const { return expected_; }
  std::size_t got() const { return got_; }

 private:
  std::size_t expected_;
  std::size_t got_;
};

class EvaluationFault : public Error {
 public:
  EvaluationFault(std::string node, std::string reason)
      : Error("evaluation fault at " + node + ": " + reason),
        node_(std::move(node)),
        reason_(std::move(reason)) {}
  const std::string& node() const { return node_; }
  const std::string& reason() const { return reason_; }

 private:
  std::string node_;
  std::string reason_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t position, std::string expected)
      : Error("parse error at position " + std::to_string(position) + ": expected " + expected),
        position_(position),
        expected_(std::move(expected)) {}
  std::size_t position() const { return position_; }
  const std::string& expected() const { return expected_; }

 private:
  std::size_t position_;
  std::string expected_;
};

class UnknownFunction : public Error {
 public:
  explicit UnknownFunction(const std::string& name) : Error("unknown function: " + name) {}
};

class BasePointInfinite : public Error {
 public:
  BasePointInfinite() : Error("f(x̄) is not finite") {}
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class PieceCoverError : public Error {
 public:
  using Error::Error;
};

class CBudgetExhausted : public Error {
 public:
  explicit CBudgetExhausted(double c_max)
      : Error("c ladder exhausted at c_max = " + std::to_string(c_max)) {}
};

class NotEpidifferentiable : public Error {
 public:
  NotEpidifferentiable() : Error("radial epiderivative is -inf in a probe direction") {}
};

class ZeroComponent : public Error {
 public:
  explicit ZeroComponent(std::size_t index)
      : Error("direction component " + std::to_string(index) + " is zero; Sgn undefined") {}
};

class ReferenceNotAvailable : public Error {
 public:
  using Error::Error;
};

}  // namespace radex
