#include "relcrypt/cuts.hpp"
#include "relcrypt/error.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace relcrypt;

namespace {

FinitePoset chain(std::size_t n) {
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n));
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) {
    labels.push_back("c" + std::to_string(i));
    for (std::size_t j = 0; j < n; ++j) leq[i][j] = i <= j;
  }
  return FinitePoset(labels, leq);
}

FinitePoset antichain(std::size_t n) {
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n));
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) {
    labels.push_back("a" + std::to_string(i));
    leq[i][i] = true;
  }
  return FinitePoset(labels, leq);
}

FinitePoset canonical_cd() {
  return FinitePoset::from_points({"P", "P'", "Q'", "Q"},
                                  {SpaceTimePoint::at(0), SpaceTimePoint::at(1), SpaceTimePoint::at(3),
                                   SpaceTimePoint::at(4)});
}

}  // namespace

TEST(Poset, RejectsNonPartialOrders) {
  EXPECT_THROW(FinitePoset({"a", "b"}, {{true, true}, {true, true}}), PreconditionError);
  EXPECT_THROW(FinitePoset({"a"}, {{false}}), PreconditionError);
  EXPECT_THROW(FinitePoset({"a", "b", "c"}, {{true, true, false}, {false, true, true}, {false, false, true}}),
               PreconditionError);
}

TEST(Cuts, ChainHasOneCutPerPrefix) {
  EXPECT_EQ(all_cuts(chain(5)).size(), 6u);
}

TEST(Cuts, AntichainHasEverySubset) {
  EXPECT_EQ(all_cuts(antichain(6)).size(), 64u);
}

TEST(Cuts, CanonicalFourPointDiamond) {
  const auto cuts = all_cuts(canonical_cd());
  EXPECT_EQ(cuts.size(), 5u);
  for (const auto& c : cuts) EXPECT_TRUE(is_cut(canonical_cd(), c));
}

TEST(Cuts, MatchAntichainOracle) {
  oracle::Rng rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    std::uniform_int_distribution<std::size_t> n(1, 9);
    const FinitePoset p = oracle::random_poset(rng, n(rng), 0.35);
    EXPECT_EQ(all_cuts(p), oracle::cuts_by_antichains(p)) << "trial " << trial;
  }
}

TEST(Cuts, EnumerationBoundIsEnforced) {
  EXPECT_THROW(all_cuts(antichain(kMaxCutEnumeration + 1)), BoundExceeded);
}

TEST(Cuts, BoundedMeansInsideSomeDownSet) {
  const FinitePoset p = canonical_cd();
  EXPECT_TRUE(p.bounded(Cut{0b0111}));
  EXPECT_TRUE(p.bounded(Cut{}));
  const FinitePoset a = antichain(2);
  EXPECT_FALSE(a.bounded(Cut{0b11}));
  EXPECT_TRUE(a.bounded(Cut{0b01}));
}

TEST(CausalityFunction, StrictPastPasses) {
  oracle::Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const FinitePoset p = oracle::random_poset(rng, 6);
    auto r = validate_causality_function(p, strict_past_function(p));
    EXPECT_TRUE(r.pass);
  }
}

TEST(CausalityFunction, IdentityFailsStrictShrinking) {
  const FinitePoset p = canonical_cd();
  auto r = validate_causality_function(p, [](const Cut& c) { return c; });
  EXPECT_FALSE(r.pass);
  EXPECT_TRUE(r.conditions[0].pass);
  EXPECT_TRUE(r.conditions[1].pass);
  EXPECT_FALSE(r.conditions[2].pass);
  ASSERT_FALSE(r.conditions[2].counterexample.empty());
  EXPECT_FALSE(r.conditions[2].counterexample.front().empty());
  EXPECT_FALSE(r.conditions[3].pass);
}

TEST(CausalityFunction, NonMonotoneIsCaught) {
  const FinitePoset p = chain(3);
  // Empty on the full chain only.
  auto chi = [&](const Cut& c) { return c == p.all() ? Cut{} : strict_past_function(p)(c); };
  auto r = validate_causality_function(p, chi);
  EXPECT_FALSE(r.conditions[1].pass);
}

TEST(CausalityFunction, NonCutImageIsCaught) {
  const FinitePoset p = chain(3);
  auto chi = [](const Cut& c) { return c.contains(2) ? Cut{0b010} : Cut{}; };
  auto r = validate_causality_function(p, chi);
  EXPECT_FALSE(r.conditions[0].pass);
}

TEST(MutualConsistency, CanonicalChannelPasses) {
  const FinitePoset p = canonical_cd();
  for (int k = 2; k <= 4; ++k) {
    auto r = verify_cd_mutual_consistency(p, 0, 3, k, canonical_cd_map(0, 3));
    EXPECT_TRUE(r.pass) << r.message;
    EXPECT_GT(r.pairs_checked, 0u);
  }
}

TEST(MutualConsistency, LeakyMapFails) {
  const FinitePoset p = canonical_cd();
  // Delivers at Q' as well as Q; the restriction to a cut without Q then
  // disagrees with the map on that smaller cut.
  CutMap leaky = [](const Cut& c, const ClassicalState& in) {
    ClassicalState out;
    if (in.message && in.message->second == 0) {
      if (c.contains(3)) out.message = std::make_pair(in.message->first, std::size_t{3});
      else if (c.contains(2) && c.contains(1)) out.message = std::make_pair(in.message->first, std::size_t{2});
    }
    return out;
  };
  auto r = verify_cd_mutual_consistency(p, 0, 3, 2, leaky);
  EXPECT_FALSE(r.pass);
  EXPECT_TRUE(r.c.has_value());
  EXPECT_TRUE(r.d.has_value());
}

TEST(MutualConsistency, RequiresStrictOrder) {
  const FinitePoset p = canonical_cd();
  EXPECT_THROW(verify_cd_mutual_consistency(p, 3, 0, 2, canonical_cd_map(3, 0)), PreconditionError);
}

TEST(PartialOrderLaws, RandomPosets) {
  oracle::Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const FinitePoset p = oracle::random_poset(rng, 7);
    for (std::size_t i = 0; i < p.size(); ++i) {
      EXPECT_TRUE(p.leq(i, i));
      for (std::size_t j = 0; j < p.size(); ++j) {
        if (i != j) EXPECT_FALSE(p.leq(i, j) && p.leq(j, i));
        for (std::size_t k = 0; k < p.size(); ++k)
          if (p.leq(i, j) && p.leq(j, k)) EXPECT_TRUE(p.leq(i, k));
      }
    }
  }
}
