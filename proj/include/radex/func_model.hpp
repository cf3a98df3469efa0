#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "radex/exprlang.hpp"
#include "radex/extended_real.hpp"
#include "radex/piecewise.hpp"
#include "radex/point.hpp"

namespace radex {

/// Default half-width B of the analysis box [-B, B]^n.
inline constexpr double kDefaultBoxHalfWidth = 1e6;

/// Black-box f: R^n -> R ∪ {+inf}. Immutable and safe to call concurrently.
class FunctionOracle {
 public:
  using EvalFn = std::function<ExtendedReal(std::span<const double>)>;

  FunctionOracle(std::string label, std::size_t dimension, EvalFn fn);

  /// Oracle backed by a parsed expression.
  static FunctionOracle from_expression(std::string label, const expr::Expr& e);

  FunctionOracle with_exact_form(PiecewiseFn1D pw) const;

  /// f(x). Throws DimensionMismatch, or EvaluationFault for NaN / -inf.
  ExtendedReal operator()(std::span<const double> x) const;
  ExtendedReal operator()(const Point& x) const { return (*this)(x.span()); }
  /// Convenience for 1D oracles.
  ExtendedReal at(double x) const { return (*this)(std::span<const double>(&x, 1)); }

  std::size_t dimension() const { return impl_->dimension; }
  const std::string& label() const { return impl_->label; }
  const PiecewiseFn1D* exact_form() const {
    return impl_->exact ? &*impl_->exact : nullptr;
  }
  /// Expression source when the oracle was built from one.
  const std::optional<std::string>& source() const { return impl_->source; }

 private:
  struct Impl {
    std::string label;
    std::size_t dimension = 0;
    EvalFn fn;
    std::optional<PiecewiseFn1D> exact;
    std::optional<std::string> source;
  };
  explicit FunctionOracle(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

ExtendedReal evaluate(const FunctionOracle& oracle, const Point& x);

/// Named oracles. The built-in registry holds the nine example functions f1..f9.
class FunctionRegistry {
 public:
  /// The built-in registry, built once and read-only afterwards.
  static const FunctionRegistry& builtin();

  const FunctionOracle& get(const std::string& name) const;
  bool contains(const std::string& name) const { return entries_.count(name) != 0; }
  std::vector<std::string> names() const;

  /// Parses source and adds it under name (replacing any previous entry).
  const FunctionOracle& register_expression(const std::string& name, const std::string& source,
                                            std::size_t dimension);
  void add(const std::string& name, FunctionOracle oracle);

 private:
  std::map<std::string, FunctionOracle> entries_;
};

const FunctionOracle& get_function(const std::string& name);
FunctionOracle register_expression(const std::string& name, const std::string& source,
                                   std::size_t dimension);

/// Expression sources and exact forms of the built-in functions.
struct BuiltinFunctionInfo {
  const char* name;
  const char* source;
  const char* description;
};
std::span<const BuiltinFunctionInfo> builtin_function_info();

}  // namespace radex
