#include <gtest/gtest.h>

#include "radex/errors.hpp"
#include "radex/regularity.hpp"
#include "support.hpp"

using namespace radex;
using radex::test::fn;

namespace {

const ConditionVerdict& verdict(const RegularityReport& r, ConditionKind k) {
  for (const auto& v : r.verdicts)
    if (v.kind == k) return v;
  throw std::runtime_error("no verdict for " + to_string(k));
}

bool has(const std::set<EqualityFlag>& s, EqualityFlag f) { return s.count(f) != 0; }

}  // namespace

TEST(Chain, SmoothSideOfF3) {
  const ChainReport c = chain_report(fn("f3"), Point{-2}, default_direction_grid(1));
  ASSERT_EQ(c.records.size(), 2u);
  for (const ChainRecord& r : c.records) {
    const double want = -4 * r.h[0];
    for (const DerivativeEstimate* e : {&r.radial, &r.subder, &r.directional, &r.clarke})
      EXPECT_NEAR(e->value.raw(), want, 5e-2);
  }
  EXPECT_TRUE(c.ordering_ok);
  EXPECT_EQ(c.equality_flags.size(), 3u);
}

TEST(Chain, F6StrictGaps) {
  const ChainReport c = chain_report(fn("f6"), Point{0}, {Direction{1}});
  const ChainRecord& r = c.records[0];
  EXPECT_NEAR(r.radial.value.raw(), radex::test::kShellMinimum, 1e-2);
  EXPECT_NEAR(r.subder.value.raw(), 0, 1e-2);
  EXPECT_NEAR(r.directional.value.raw(), 0, 1e-2);
  EXPECT_NEAR(r.clarke.value.raw(), 1, 1e-1);
  EXPECT_FALSE(has(r.equal, EqualityFlag::REqD));
  EXPECT_TRUE(has(r.equal, EqualityFlag::DEqPrime));
  EXPECT_FALSE(has(r.equal, EqualityFlag::PrimeEqCircle));
  EXPECT_TRUE(c.ordering_ok);
}

TEST(Chain, F5DirectionalMissing) {
  const ChainReport c = chain_report(fn("f5"), Point{0}, {Direction{1}});
  const ChainRecord& r = c.records[0];
  EXPECT_NEAR(r.radial.value.raw(), -1, 5e-2);
  EXPECT_NEAR(r.subder.value.raw(), -1, 5e-2);
  EXPECT_EQ(r.directional.status, EstimateStatus::NotConvergent);
  EXPECT_TRUE(has(r.equal, EqualityFlag::REqD));
  EXPECT_FALSE(has(r.comparable, EqualityFlag::DEqPrime));
}

TEST(Support, Examples) {
  const SamplingSchedule s;
  const auto grid = default_direction_grid(1);
  const ChainReport f7 = chain_report(fn("f7"), Point{0}, grid);
  EXPECT_TRUE(check_support_condition(fn("f7"), Point{0}, ConditionKind::DirDerSupport,
                                      reference_for(f7, ConditionKind::DirDerSupport))
                  .holds);
  const ChainReport f3m1 = chain_report(fn("f3"), Point{-1}, grid);
  const ConditionVerdict bad = check_support_condition(
      fn("f3"), Point{-1}, ConditionKind::ClarkeSupport, reference_for(f3m1, ConditionKind::ClarkeSupport));
  EXPECT_FALSE(bad.holds);
  ASSERT_TRUE(bad.witness);
  EXPECT_GT((*bad.witness)[0], -1.0);
  const ChainReport f30 = chain_report(fn("f3"), Point{0}, grid);
  EXPECT_TRUE(check_support_condition(fn("f3"), Point{0}, ConditionKind::DirDerSupport,
                                      reference_for(f30, ConditionKind::DirDerSupport))
                  .holds);
}

TEST(Support, NotConvergentReference) {
  const ChainReport c = chain_report(fn("f4"), Point{0}, {Direction{1}});
  EXPECT_THROW(check_support_condition(fn("f4"), Point{0}, ConditionKind::DirDerSupport,
                                       reference_for(c, ConditionKind::DirDerSupport)),
               ReferenceNotAvailable);
}

TEST(Support, PlusInfinityDirectionsExcluded) {
  const ChainReport c = chain_report(fn("f9"), Point{0}, default_direction_grid(1));
  const ConditionVerdict v = check_support_condition(
      fn("f9"), Point{0}, ConditionKind::ClarkeSupport, reference_for(c, ConditionKind::ClarkeSupport));
  EXPECT_EQ(v.excluded_directions, 1u);
}

TEST(Classify, Examples) {
  const RegularityReport a = classify_regularity(fn("f3"), Point{-2});
  EXPECT_TRUE(verdict(a, ConditionKind::ClarkeSupport).holds);
  EXPECT_EQ(a.chain.equality_flags.size(), 3u);

  const RegularityReport b = classify_regularity(fn("f3"), Point{-1});
  EXPECT_FALSE(verdict(b, ConditionKind::ClarkeSupport).holds);
  EXPECT_TRUE(verdict(b, ConditionKind::ClarkeSupport).witness.has_value());

  const RegularityReport c = classify_regularity(fn("f3"), Point{0});
  EXPECT_TRUE(verdict(c, ConditionKind::DirDerSupport).holds);
  EXPECT_FALSE(has(c.chain.equality_flags, EqualityFlag::PrimeEqCircle));

  const RegularityReport d = classify_regularity(fn("f7"), Point{0});
  EXPECT_TRUE(verdict(d, ConditionKind::DirDerSupport).holds);
  EXPECT_TRUE(has(d.chain.equality_flags, EqualityFlag::REqD));
  EXPECT_TRUE(has(d.chain.equality_flags, EqualityFlag::DEqPrime));
  EXPECT_FALSE(has(d.chain.equality_flags, EqualityFlag::PrimeEqCircle));
}

TEST(Classify, F9SubderSupportOnNonPositiveSide) {
  const RegularityReport r = classify_regularity(fn("f9"), Point{0});
  EXPECT_TRUE(verdict(r, ConditionKind::SubderSupport).holds);
  const ChainRecord& left = r.chain.records[0];
  ASSERT_EQ(left.h, Direction{-1});
  EXPECT_TRUE(has(left.equal, EqualityFlag::REqD));
}

TEST(Classify, ImpliedFlags) {
  EXPECT_EQ(implied_flags(ConditionKind::ClarkeSupport).size(), 3u);
  EXPECT_EQ(implied_flags(ConditionKind::DirDerSupport).size(), 2u);
  EXPECT_EQ(implied_flags(ConditionKind::SubderSupport),
            std::set<EqualityFlag>{EqualityFlag::REqD});
}

// A holding support condition implies its equalities; a missing equality
// forces the corresponding condition to fail.
TEST(Classify, SupportConditionsAgreeWithEqualities) {
  const std::pair<ConditionKind, EqualityFlag> weakest[] = {
      {ConditionKind::SubderSupport, EqualityFlag::REqD},
      {ConditionKind::DirDerSupport, EqualityFlag::DEqPrime},
      {ConditionKind::ClarkeSupport, EqualityFlag::PrimeEqCircle}};
  for (const auto& name : radex::test::registry_names()) {
    for (double x : radex::test::probe_points(name)) {
      const RegularityReport r = classify_regularity(fn(name), Point{x});
      EXPECT_TRUE(r.consistent) << name << " at " << x;
      for (const ConditionVerdict& v : r.verdicts) {
        if (!v.holds || v.excluded_directions > 0) continue;
        for (EqualityFlag f : implied_flags(v.kind))
          if (has(r.chain.comparable_flags, f))
            EXPECT_TRUE(has(r.chain.equality_flags, f)) << name << " " << x << " " << to_string(f);
      }
      for (const auto& [kind, flag] : weakest) {
        if (!has(r.chain.comparable_flags, flag) || has(r.chain.equality_flags, flag)) continue;
        for (const ConditionVerdict& v : r.verdicts)
          if (v.kind == kind) EXPECT_FALSE(v.holds) << name << " " << x << " " << to_string(kind);
      }
    }
  }
}
