#include "relcrypt/analysis.hpp"
#include "relcrypt/error.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace relcrypt;

namespace {

SpaceTimePoint pt(long long t, long long x = 0) { return SpaceTimePoint::at(t, x); }

const DistinguisherFamily kAdaptive{FamilyKind::adaptive};
const DistinguisherFamily kEnumerated{FamilyKind::causal_enumerated};
const DistinguisherFamily kFixed{FamilyKind::non_adaptive};

// Input "x" at two points, output "y" at two points.
CausalSystem random_box(oracle::Rng& rng, const std::string& name) {
  std::vector<SpaceTimePoint> pts = oracle::random_points(rng, 4, 5);
  std::sort(pts.begin(), pts.end());
  oracle::RandomSystemOptions o{name,
                                 {{"x", Direction::in, 2, {pts[0], pts[2]}},
                                  {"y", Direction::out, 2, {pts[1], pts[3]}}},
                                 1,
                                 false};
  return oracle::random_system(rng, o);
}

// Reads "y" and emits "z" one time unit later.
CausalSystem random_converter(oracle::Rng& rng, const CausalSystem& r) {
  const Port* y = r.find_port("y", Direction::out);
  std::vector<SpaceTimePoint> later;
  for (const auto& p : y->points) later.push_back(shifted(p, 1));
  oracle::RandomSystemOptions o{"alpha", {{"y", Direction::in, 2, y->points}, {"z", Direction::out, 3, later}}, 1,
                                 false};
  return oracle::random_system(rng, o);
}

CausalSystem biased_coin(const Rational& p) {
  SystemBuilder b("coin");
  auto o = b.output("y", bits(), {pt(1)});
  const std::size_t k = b.seed(bernoulli_factor("c", p));
  b.rule(at(o), {}, [k](std::span<const Symbol>, std::span<const std::uint32_t> s) {
    return Symbol::letter(static_cast<int>(s[k]));
  });
  return b.build();
}

}  // namespace

TEST(Advantage, CoinsDifferByStatisticalDistance) {
  CausalSystem a = biased_coin(rat(1, 3)), b = biased_coin(rat(3, 4));
  EXPECT_EQ(advantage_sup(a, b, kAdaptive).advantage, rat(3, 4) - rat(1, 3));
  EXPECT_EQ(statistical_distance(exact_distribution(a), exact_distribution(b)), rat(5, 12));
  auto d = reading_distinguisher("read", {Port{"y", Direction::out, bits(), {pt(1)}}}, pt(2),
                                 [](std::span<const Symbol> v) { return v[0].value(); });
  EXPECT_EQ(advantage_exact(d, a, b), rat(5, 12));
  EXPECT_EQ(guess_zero_probability(d, a), rat(1, 3));
}

TEST(Advantage, InterfaceMismatchThrows) {
  oracle::Rng rng(1);
  CausalSystem a = biased_coin(rat(1, 2));
  CausalSystem b = random_box(rng, "box");
  EXPECT_THROW(advantage_sup(a, b, kAdaptive), InterfaceError);
}

TEST(Advantage, DistinguisherNeedsGuessPort) {
  EXPECT_THROW(Distinguisher(biased_coin(rat(1, 2))), InterfaceError);
}

TEST(Families, NestedByInformation) {
  oracle::Rng rng(33);
  for (int trial = 0; trial < 40; ++trial) {
    CausalSystem r = random_box(rng, "R");
    CausalSystem s = oracle::random_like(rng, r, "S");
    const Rational fixed = advantage_sup(r, s, kFixed).advantage;
    const auto enumerated = advantage_sup(r, s, kEnumerated);
    const Rational adaptive = advantage_sup(r, s, kAdaptive).advantage;
    EXPECT_LE(fixed, enumerated.advantage);
    EXPECT_LE(enumerated.advantage, adaptive);
    EXPECT_GT(enumerated.strategies, 0u);
    EXPECT_LE(adaptive, 1);
  }
}

TEST(Families, EnumeratedMatchesRandomDistinguishers) {
  // No random causal distinguisher beats the enumerated supremum.
  oracle::Rng rng(34);
  for (int trial = 0; trial < 20; ++trial) {
    CausalSystem r = random_box(rng, "R");
    CausalSystem s = oracle::random_like(rng, r, "S");
    const Rational sup = advantage_sup(r, s, kEnumerated).advantage;
    for (int k = 0; k < 10; ++k) {
      Distinguisher d(oracle::random_distinguisher(rng, r));
      EXPECT_LE(advantage_exact(d, r, s), sup);
    }
  }
}

TEST(PseudoMetric, LawsOnRandomTriples) {
  oracle::Rng rng(99);
  for (int trial = 0; trial < 120; ++trial) {
    CausalSystem r = random_box(rng, "R");
    CausalSystem s = oracle::random_like(rng, r, "S");
    CausalSystem t = oracle::random_like(rng, r, "T");
    const Rational rs = advantage_sup(r, s, kAdaptive).advantage;
    const Rational sr = advantage_sup(s, r, kAdaptive).advantage;
    const Rational st = advantage_sup(s, t, kAdaptive).advantage;
    const Rational rt = advantage_sup(r, t, kAdaptive).advantage;
    EXPECT_EQ(advantage_sup(r, r, kAdaptive).advantage, 0);
    EXPECT_EQ(rs, sr);
    EXPECT_GE(rs, 0);
    EXPECT_LE(rt, rs + st) << "trial " << trial;
  }
}

TEST(PseudoMetric, ContractiveUnderConverters) {
  oracle::Rng rng(100);
  for (int trial = 0; trial < 120; ++trial) {
    CausalSystem r = random_box(rng, "R");
    CausalSystem s = oracle::random_like(rng, r, "S");
    CausalSystem alpha = random_converter(rng, r);
    for (const auto& fam : {kAdaptive, kEnumerated}) {
      const Rational before = advantage_sup(r, s, fam).advantage;
      const Rational after = advantage_sup(plug(r, alpha), plug(s, alpha), fam).advantage;
      EXPECT_LE(after, before) << "trial " << trial << " family " << to_string(fam.kind);
    }
  }
}

TEST(MonteCarlo, HalfWidthFormula) {
  EXPECT_NEAR(hoeffding_half_width(1000, 0.05), std::sqrt(std::log(2 / 0.05) / 2000), 1e-15);
}

TEST(MonteCarlo, CoversExactValueAtConfidence) {
  oracle::Rng rng(7);
  CausalSystem r = random_box(rng, "R");
  CausalSystem s = oracle::random_like(rng, r, "S");
  Distinguisher d(oracle::random_distinguisher(rng, r));
  const double exact = to_double(advantage_exact(d, r, s));
  int inside = 0;
  for (std::uint64_t trial = 0; trial < 200; ++trial) {
    McEstimate e = advantage_mc(d, r, s, 400, 0.05, 1000 + trial);
    if (std::abs(e.estimate - exact) <= e.half_width) ++inside;
  }
  EXPECT_GE(inside, 190);
}

TEST(MonteCarlo, SameSeedSameEstimate) {
  oracle::Rng rng(8);
  CausalSystem r = random_box(rng, "R");
  CausalSystem s = oracle::random_like(rng, r, "S");
  Distinguisher d(oracle::random_distinguisher(rng, r));
  EXPECT_EQ(advantage_mc(d, r, s, 5000, 0.05, 3).estimate, advantage_mc(d, r, s, 5000, 0.05, 3).estimate);
}

TEST(ConditionalTable, RowsSumToOne) {
  oracle::Rng rng(9);
  CausalSystem r = random_box(rng, "R");
  ConditionalTable t = conditional_table(r);
  EXPECT_EQ(t.rows.size(), 9u);
  for (const auto& row : t.rows) {
    Rational sum = 0;
    for (const auto& [_, p] : row) sum += p;
    EXPECT_EQ(sum, 1);
  }
}
