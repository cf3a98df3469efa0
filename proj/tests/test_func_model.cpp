#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "radex/errors.hpp"
#include "radex/func_model.hpp"
#include "support.hpp"

using namespace radex;
using radex::test::hand_eval;

TEST(Registry, ExampleValues) {
  EXPECT_EQ(get_function("f3").at(0).raw(), 4.0);
  EXPECT_EQ(get_function("f3").at(-1).raw(), 0.0);
  EXPECT_EQ(get_function("f2").at(1).raw(), 2.0);
  EXPECT_EQ(get_function("f1").at(2).raw(), 2.0);
  EXPECT_EQ(get_function("f1").at(1).raw(), 1.0);
  EXPECT_EQ(get_function("f9").at(0).raw(), 0.0);
  EXPECT_THROW(get_function("f0"), UnknownFunction);
}

TEST(Registry, Names) {
  const auto names = FunctionRegistry::builtin().names();
  EXPECT_EQ(names, radex::test::registry_names());
  EXPECT_EQ(builtin_function_info().size(), 9u);
}

TEST(Registry, ExpressionFidelity) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-5, 5);
  for (const auto& name : radex::test::registry_names()) {
    const FunctionOracle& f = get_function(name);
    std::vector<double> xs{-1.0, 0.0, 1.0};
    for (int i = 0; i < 100; ++i) xs.push_back(u(rng));
    for (double x : xs) EXPECT_EQ(f.at(x).raw(), hand_eval(name, x)) << name << " at " << x;
  }
}

TEST(Registry, ExactFormsMatchOracle) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-5, 5);
  for (const char* name : {"f1", "f2", "f3", "f8", "f9"}) {
    const FunctionOracle& f = get_function(name);
    ASSERT_NE(f.exact_form(), nullptr) << name;
    std::vector<double> xs{-1.0, 0.0, 1.0};
    for (int i = 0; i < 100; ++i) xs.push_back(u(rng));
    for (double x : xs)
      EXPECT_NEAR((*f.exact_form())(x), hand_eval(name, x), 1e-12 * (1 + std::abs(x))) << name;
  }
  for (const char* name : {"f4", "f5", "f6", "f7"}) EXPECT_EQ(get_function(name).exact_form(), nullptr);
}

TEST(Registry, BreakpointOwnership) {
  // f1 owns x = 1 on the right piece, f2 on the left one.
  EXPECT_EQ((*get_function("f1").exact_form())(1.0), 1.0);
  EXPECT_EQ((*get_function("f2").exact_form())(1.0), 2.0);
}

TEST(Registry, Determinism) {
  for (const auto& name : radex::test::registry_names()) {
    const FunctionOracle& f = get_function(name);
    const double first = f.at(0.3183).raw();
    for (int i = 0; i < 1000; ++i) ASSERT_EQ(f.at(0.3183).raw(), first) << name;
  }
}

TEST(RegisterExpression, Examples) {
  EXPECT_EQ(register_expression("sq", "x1^2", 1).at(3).raw(), 9.0);
  EXPECT_EQ(register_expression("r", "abs(x1-1)+3", 1).at(1).raw(), 3.0);
  EXPECT_THROW(register_expression("bad", "x1 sin(", 1), ParseError);
}

TEST(Oracle, DimensionAndFaults) {
  const FunctionOracle g = register_expression("g", "x1 + 2*x2", 2);
  EXPECT_EQ(g.dimension(), 2u);
  EXPECT_EQ(evaluate(g, Point{1.0, 2.0}).raw(), 5.0);
  EXPECT_THROW(evaluate(g, Point{1.0}), DimensionMismatch);
  const FunctionOracle h = register_expression("h", "ln(x1)", 1);
  EXPECT_THROW(h.at(-1), EvaluationFault);
}

TEST(Oracle, PlusInfinityIsLegal) {
  const FunctionOracle f("ind", 1, [](std::span<const double> x) {
    return x[0] < 0 ? ExtendedReal::plus_infinity() : ExtendedReal(x[0]);
  });
  EXPECT_TRUE(f.at(-1).is_plus_infinity());
  const FunctionOracle bad("bad", 1, [](std::span<const double>) {
    return ExtendedReal::minus_infinity();
  });
  EXPECT_THROW(bad.at(0), EvaluationFault);
}

TEST(Piecewise, CoverIsChecked) {
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_THROW(PiecewiseFn1D({Piece{-inf, false, 0, false, 0, 0, 0},
                              Piece{0, false, inf, false, 0, 0, 1}}),
               PieceCoverError);
  EXPECT_THROW(PiecewiseFn1D({Piece{-inf, false, 0, true, 0, 0, 0},
                              Piece{0, true, inf, false, 0, 0, 1}}),
               PieceCoverError);
  const PiecewiseFn1D ok({Piece{-inf, false, 0, true, 0, 0, 0}, Piece{0, false, inf, false, 0, 1, 0}});
  EXPECT_EQ(ok(0.0), 0.0);
  EXPECT_EQ(ok(2.0), 2.0);
}
