#include "radex/func_model.hpp"

#include <cmath>

#include "radex/errors.hpp"

namespace radex {

FunctionOracle::FunctionOracle(std::string label, std::size_t dimension, EvalFn fn) {
  if (dimension == 0) throw InvalidArgument("oracle dimension must be >= 1");
  auto impl = std::make_shared<Impl>();
  impl->label = std::move(label);
  impl->dimension = dimension;
  impl->fn = std::move(fn);
  impl_ = std::move(impl);
}

FunctionOracle FunctionOracle::from_expression(std::string label, const expr::Expr& e) {
  FunctionOracle o(std::move(label), e.dimension(),
                   [e](std::span<const double> x) { return e.eval(x); });
  auto impl = std::make_shared<Impl>(*o.impl_);
  impl->source = e.to_string();
  return FunctionOracle(std::shared_ptr<const Impl>(std::move(impl)));
}

FunctionOracle FunctionOracle::with_exact_form(PiecewiseFn1D pw) const {
  if (dimension() != 1) throw InvalidArgument("exact piecewise forms are 1D only");
  auto impl = std::make_shared<Impl>(*impl_);
  impl->exact = std::move(pw);
  return FunctionOracle(std::shared_ptr<const Impl>(std::move(impl)));
}

ExtendedReal FunctionOracle::operator()(std::span<const double> x) const {
  if (x.size() != impl_->dimension) throw DimensionMismatch(impl_->dimension, x.size());
  ExtendedReal v = impl_->fn(x);
  if (v.is_minus_infinity()) throw EvaluationFault(impl_->label, "oracle returned -inf");
  return v;
}

ExtendedReal evaluate(const FunctionOracle& oracle, const Point& x) { return oracle(x); }

namespace {

constexpr double kInf = INFINITY;

Piece piece(double lo, bool lo_closed, double hi, bool hi_closed, double a, double b, double c) {
  return Piece{lo, lo_closed, hi, hi_closed, a, b, c};
}

constexpr BuiltinFunctionInfo kBuiltins[] = {
    {"f1", "piecewise(x1 < 1 ? -x1 + 3 : x1)", "-x+3 for x<1, x for x>=1 (lsc jump at 1)"},
    {"f2", "piecewise(x1 <= 1 ? -x1 + 3 : x1)", "-x+3 for x<=1, x for x>1 (not lsc at 1)"},
    {"f3", "piecewise(x1 <= 0 ? 4*abs(x1 + 1) : abs(x1 - 1) + 3)",
     "4|x+1| for x<=0, |x-1|+3 for x>0"},
    {"f4", "piecewise(x1 == 0 ? 0 : x1*sin(1/x1))", "x sin(1/x), 0 at 0"},
    {"f5", "piecewise(x1 == 0 ? 0 : x1*sin(ln(abs(x1))))", "x sin(ln|x|), 0 at 0"},
    {"f6", "piecewise(x1 == 0 ? 0 : x1^2*sin(1/x1))", "x^2 sin(1/x), 0 at 0"},
    {"f7", "piecewise(x1 == 0 ? 0 : x1^2*sin(1/x1)^2)", "x^2 sin^2(1/x), 0 at 0"},
    {"f8", "piecewise(x1 <= 0 ? x1^2 : -x1 + 1)", "x^2 for x<=0, -x+1 for x>0"},
    {"f9", "piecewise(x1 <= 0 ? x1^2 : x1 + 1)", "x^2 for x<=0, x+1 for x>0"},
};

std::optional<PiecewiseFn1D> exact_form_for(const std::string& name) {
  if (name == "f1")
    return PiecewiseFn1D({piece(-kInf, false, 1, false, 0, -1, 3),
                          piece(1, true, kInf, false, 0, 1, 0)});
  if (name == "f2")
    return PiecewiseFn1D({piece(-kInf, false, 1, true, 0, -1, 3),
                          piece(1, false, kInf, false, 0, 1, 0)});
  if (name == "f3")
    return PiecewiseFn1D({piece(-kInf, false, -1, true, 0, -4, -4),
                          piece(-1, false, 0, true, 0, 4, 4),
                          piece(0, false, 1, true, 0, -1, 4),
                          piece(1, false, kInf, false, 0, 1, 2)});
  if (name == "f8")
    return PiecewiseFn1D({piece(-kInf, false, 0, true, 1, 0, 0),
                          piece(0, false, kInf, false, 0, -1, 1)});
  if (name == "f9")
    return PiecewiseFn1D({piece(-kInf, false, 0, true, 1, 0, 0),
                          piece(0, false, kInf, false, 0, 1, 1)});
  return std::nullopt;
}

}  // namespace

std::span<const BuiltinFunctionInfo> builtin_function_info() { return kBuiltins; }

const FunctionRegistry& FunctionRegistry::builtin() {
  static const FunctionRegistry registry = [] {
    FunctionRegistry r;
    for (const auto& info : kBuiltins) {
      FunctionOracle o = FunctionOracle::from_expression(info.name, expr::parse(info.source, 1));
      if (auto pw = exact_form_for(info.name)) o = o.with_exact_form(std::move(*pw));
      r.add(info.name, std::move(o));
    }
    return r;
  }();
  return registry;
}

const FunctionOracle& FunctionRegistry::get(const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) throw UnknownFunction(name);
  return it->second;
}

std::vector<std::string> FunctionRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : entries_) out.push_back(k);
  return out;
}

const FunctionOracle& FunctionRegistry::register_expression(const std::string& name,
                                                            const std::string& source,
                                                            std::size_t dimension) {
  add(name, FunctionOracle::from_expression(name, expr::parse(source, dimension)));
  return entries_.at(name);
}

void FunctionRegistry::add(const std::string& name, FunctionOracle oracle) {
  entries_.insert_or_assign(name, std::move(oracle));
}

const FunctionOracle& get_function(const std::string& name) {
  return FunctionRegistry::builtin().get(name);
}

FunctionOracle register_expression(const std::string& name, const std::string& source,
                                   std::size_t dimension) {
  return FunctionOracle::from_expression(name, expr::parse(source, dimension));
}

}  // namespace radex
