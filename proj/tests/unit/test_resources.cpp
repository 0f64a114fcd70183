#include "relcrypt/analysis.hpp"
#include "relcrypt/error.hpp"
#include "relcrypt/protocols.hpp"
#include "relcrypt/resources.hpp"

#include <gtest/gtest.h>

using namespace relcrypt;

namespace {

SpaceTimePoint pt(const Rational& t, long long x = 0) { return SpaceTimePoint::at(t, x); }

CFSpec cf_spec(const Rational& p) {
  CFSpec s;
  s.p = p;
  s.alice_out = pt(3);
  s.bob_out = pt(3, 1);
  s.cheat_B = CheatPoints{pt(0), pt(2)};
  s.cheat_A = CheatPoints{pt(0, 1), pt(2, 1)};
  return s;
}

CDSpec cd_spec(int k = 2) { return CDSpec{pt(0), pt(1), pt(3), pt(4), k, "cd"}; }

// Pr[Alice's coin equals a fixed injected bit].
Rational steer_success(const CausalSystem& dB, int inject) {
  InputAssignment in(dB);
  in.set(portname::bob_bias, Symbol::letter(inject));
  auto d = exact_distribution(dB, in.values());
  const std::size_t col = d.column(portname::alice_coin);
  return d.probability([&](const std::vector<Symbol>& v) { return v[col] == Symbol::letter(inject); });
}

}  // namespace

TEST(CoinFlip, HonestOutputsAgreeAndAreUniform) {
  ResourceTriple t = make_cf(cf_spec(rat(1, 3)));
  auto d = exact_distribution(t.honest);
  ASSERT_EQ(d.probs.size(), 2u);
  for (const auto& [v, p] : d.probs) {
    EXPECT_EQ(v[0], v[1]);
    EXPECT_EQ(p, rat(1, 2));
  }
}

TEST(CoinFlip, InjectionLandsWithBiasProbability) {
  for (const Rational& p : {rat(0), rat(1, 4), rat(1, 2), rat(1)}) {
    ResourceTriple t = make_cf(cf_spec(p));
    EXPECT_EQ(steer_success(t.dishonest_B, 1), p + (1 - p) / 2);
    EXPECT_EQ(steer_success(t.dishonest_B, 0), p + (1 - p) / 2);
  }
}

TEST(CoinFlip, LeakMatchesHonestOutputWithoutInjection) {
  ResourceTriple t = make_cf(cf_spec(rat(1, 2)));
  auto d = exact_distribution(t.dishonest_A, InputAssignment(t.dishonest_A).values());
  const std::size_t leak = d.column(portname::alice_leak), out = d.column(portname::bob_coin);
  EXPECT_EQ(d.probability([&](const auto& v) { return v[leak] == v[out]; }), 1);
}

TEST(CoinFlip, GeometryIsValidated) {
  CFSpec s = cf_spec(rat(1, 2));
  s.cheat_B.inject = pt(4);
  EXPECT_THROW(make_cf(s), PreconditionError);
  s = cf_spec(rat(3, 2));
  EXPECT_THROW(make_cf(s), PreconditionError);
}

TEST(CoinFlip, ResourcesAreCausal) {
  ResourceTriple t = make_cf(cf_spec(rat(1, 4)));
  for (const auto* s : {&t.honest, &t.dishonest_A, &t.dishonest_B}) EXPECT_TRUE(validate_causality(*s).pass);
  ResourceTriple u = make_cf_unfair(cf_spec(0));
  for (const auto* s : {&u.honest, &u.dishonest_A, &u.dishonest_B}) EXPECT_TRUE(validate_causality(*s).pass);
}

TEST(UnfairCoin, AbortReplacesHonestOutput) {
  ResourceTriple t = make_cf_unfair(cf_spec(0));
  InputAssignment in(t.dishonest_B);
  in.set(portname::bob_abort, Symbol::abort());
  auto d = exact_distribution(t.dishonest_B, in.values());
  const std::size_t col = d.column(portname::alice_coin);
  EXPECT_EQ(d.probability([&](const auto& v) { return v[col] == Symbol::abort(); }), 1);
}

TEST(Channel, DeliversAtTheRightPoints) {
  ResourceTriple t = make_cd(cd_spec(3));
  EXPECT_EQ(t.honest.find_port("cd.in", Direction::in)->points.front(), pt(0));
  EXPECT_EQ(t.honest.find_port("cd.out", Direction::out)->points.front(), pt(4));
  EXPECT_EQ(t.dishonest_A.find_port("cd.in", Direction::in)->points.front(), pt(1));
  EXPECT_EQ(t.dishonest_B.find_port("cd.out", Direction::out)->points.front(), pt(3));
  InputAssignment in(t.honest);
  in.set("cd.in", Symbol::letter(2));
  EXPECT_EQ(exact_distribution(t.honest, in.values()).probs.at({Symbol::letter(2)}), 1);
}

TEST(Channel, DeltaConvertersRecoverTheHonestChannel) {
  const CDSpec cd = cd_spec(2);
  ResourceTriple t = make_cd(cd);
  const DistinguisherFamily fam{FamilyKind::adaptive};
  EXPECT_EQ(advantage_sup(plug(delta_converter(cd, Side::A), t.dishonest_A), t.honest, fam).advantage, 0);
  EXPECT_EQ(advantage_sup(plug(t.dishonest_B, delta_converter(cd, Side::B)), t.honest, fam).advantage, 0);
}

TEST(Channel, OrderingIsValidated) {
  EXPECT_THROW(make_cd(CDSpec{pt(0), pt(3), pt(3), pt(4)}), PreconditionError);
  EXPECT_THROW(make_cd(CDSpec{pt(2), pt(1), pt(3), pt(4)}), PreconditionError);
  EXPECT_THROW(make_cd(CDSpec{pt(0), pt(1), pt(3), pt(3, 2)}), PreconditionError);
}

TEST(Channel, TrustedRegionIsTheInnerDiamond) {
  CausalDiamond d = trusted_region(cd_spec());
  EXPECT_EQ(d.lo(), pt(1));
  EXPECT_EQ(d.hi(), pt(3));
}

TEST(AbortChannel, AbortSuppressesDelivery) {
  CDAbortSpec s{cd_spec(2), pt(rat(5, 2))};
  ResourceTriple t = make_cd_abort(s);
  InputAssignment in(t.dishonest_A);
  in.set("cd.in", Symbol::letter(1)).set("cd.abort", Symbol::abort());
  EXPECT_EQ(exact_distribution(t.dishonest_A, in.values()).probs.at({Symbol::vacuum()}), 1);
  InputAssignment keep(t.dishonest_A);
  keep.set("cd.in", Symbol::letter(1));
  EXPECT_EQ(exact_distribution(t.dishonest_A, keep.values()).probs.at({Symbol::letter(1)}), 1);
  EXPECT_THROW(make_cd_abort(CDAbortSpec{cd_spec(2), pt(5)}), PreconditionError);
}

TEST(BitCommitment, RevealsOnlyAfterOpen) {
  BlumGeometry g = canonical_blum_geometry();
  ResourceTriple t = make_bc(g.bc);
  InputAssignment in(t.honest);
  in.set("bc.commit", Symbol::letter(1));
  auto closed = exact_distribution(t.honest, in.values());
  const std::size_t reveal = closed.column("bc.reveal"), comm = closed.column("bc.comm");
  EXPECT_EQ(closed.probability([&](const auto& v) { return v[reveal].is_vacuum() && v[comm] == Symbol::comm(); }), 1);
  in.set("bc.open", Symbol::open());
  auto opened = exact_distribution(t.honest, in.values());
  EXPECT_EQ(opened.probability([&](const auto& v) { return v[reveal] == Symbol::letter(1); }), 1);
}

TEST(Converters, BlockerEmitsVacuumOnBlockedSlots) {
  std::vector<Port> wires{Port{"m", Direction::in, bits(), {pt(1), pt(2)}}};
  CausalSystem b = blocker(wires, [](const std::string&, const SpaceTimePoint& p) { return p == pt(2); });
  std::vector<Symbol> in{Symbol::letter(1), Symbol::letter(0)};
  EXPECT_EQ(exact_distribution(b, in).probs.at({Symbol::letter(1), Symbol::vacuum()}), 1);
  EXPECT_TRUE(b.passthrough());
}

TEST(Converters, UniformSourceIsUniform) {
  CausalSystem u = uniform_source("u", letters(3), pt(1));
  auto d = exact_distribution(u);
  ASSERT_EQ(d.probs.size(), 3u);
  for (const auto& [_, p] : d.probs) EXPECT_EQ(p, rat(1, 3));
}
