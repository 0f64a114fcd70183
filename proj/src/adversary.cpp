#include "relcrypt/adversary.hpp"

#include "relcrypt/error.hpp"

#include <algorithm>

namespace relcrypt {

namespace {

using Seeds = std::span<const std::uint32_t>;
using Vals = std::span<const Symbol>;

Symbol bit(std::uint32_t v) { return Symbol::letter(static_cast<int>(v)); }
Symbol xor_bits(Symbol a, Symbol b) { return Symbol::letter(a.value() ^ b.value()); }
Symbol or_seed(Symbol v, std::uint32_t fallback) { return v.is_letter() ? v : bit(fallback); }
Symbol copy0(Vals d, Seeds) { return d[0]; }

SpaceTimePoint pt(const Rational& t, const Rational& x = 0) { return SpaceTimePoint::at(t, x); }

Alphabet coin_outputs() { return {Symbol::letter(0), Symbol::letter(1), Symbol::abort()}; }

}  // namespace

MitmGeometry canonical_mitm_geometry() {
  return MitmGeometry{pt(0, 0), pt(2, 0), pt(0, 1), pt(Rational(7, 2), 1), pt(3, 0), pt(Rational(9, 2), 1)};
}

CFSpec mitm_cf_spec(const Rational& p, const MitmGeometry& g) {
  return CFSpec{p, g.PA, g.PB, CheatPoints{g.P1, g.P2}, CheatPoints{g.P3, g.P4}};
}

std::string to_string(MitmVar v) {
  switch (v) {
    case MitmVar::C: return "C";
    case MitmVar::Cp: return "C'";
    case MitmVar::B: return "B";
  }
  return "?";
}

MitmStrategy MitmStrategy::copy_c() { return MitmStrategy{{MitmVar::C}, {0, 1}, {MitmVar::C}, {0, 1}}; }

std::string MitmStrategy::describe() const {
  auto one = [](const std::vector<MitmVar>& ps, const std::vector<int>& t) {
    std::string s = "f(";
    for (std::size_t i = 0; i < ps.size(); ++i) s += (i ? "," : "") + to_string(ps[i]);
    s += ")=[";
    for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + std::to_string(t[i]);
    return s + "]";
  };
  return "b=" + one(parents_b, table_b) + " b'=" + one(parents_bp, table_bp);
}

namespace {

int lookup(const std::vector<int>& table, const std::vector<int>& vals) {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < vals.size(); ++i) idx |= static_cast<std::size_t>(vals[i]) << i;
  return table.at(idx);
}

void check_table(const std::vector<MitmVar>& parents, const std::vector<int>& table) {
  if (table.size() != (std::size_t{1} << parents.size()))
    throw PreconditionError("strategy table has " + std::to_string(table.size()) + " entries for " +
                            std::to_string(parents.size()) + " parents");
}

}  // namespace

CausalSystem mitm_sigma(const MitmStrategy& s, const MitmGeometry& g) {
  check_table(s.parents_b, s.table_b);
  check_table(s.parents_bp, s.table_bp);
  auto require = [](const SpaceTimePoint& a, const SpaceTimePoint& b, const std::string& what) {
    if (!strictly_precedes(a, b)) throw PreconditionError("strategy dependency " + what + " is not causal");
  };
  for (MitmVar v : s.parents_b) {
    if (v == MitmVar::B) throw PreconditionError("b cannot depend on itself");
    require(v == MitmVar::C ? g.P1 : g.P3, g.P2, to_string(v) + "->B");
  }
  for (MitmVar v : s.parents_bp)
    require(v == MitmVar::C ? g.P1 : v == MitmVar::Cp ? g.P3 : g.P2, g.P4, to_string(v) + "->B'");

  SystemBuilder b("sigma_MITM");
  auto c = b.input(portname::bob_leak, bits(), {g.P1});
  auto bb = b.output(portname::bob_bias, bits(), {g.P2});
  auto cp = b.input(portname::alice_leak, bits(), {g.P3});
  auto bp = b.output(portname::alice_bias, bits(), {g.P4});

  auto leak_value = [](Symbol v) { return v.is_letter() ? v.value() : 0; };
  auto slot_of = [&](MitmVar v) { return v == MitmVar::C ? at(c) : at(cp); };

  std::vector<SystemBuilder::Slot> deps_b;
  for (MitmVar v : s.parents_b) deps_b.push_back(slot_of(v));
  b.rule(at(bb), deps_b, [table = s.table_b, leak_value](Vals d, Seeds) {
    std::vector<int> vals;
    for (const auto& x : d) vals.push_back(leak_value(x));
    return Symbol::letter(lookup(table, vals));
  });

  // b' reads its leak parents, then the parents of b when b is a parent.
  const bool uses_b = std::find(s.parents_bp.begin(), s.parents_bp.end(), MitmVar::B) != s.parents_bp.end();
  std::vector<SystemBuilder::Slot> deps_bp;
  for (MitmVar v : s.parents_bp)
    if (v != MitmVar::B) deps_bp.push_back(slot_of(v));
  const std::size_t own = deps_bp.size();
  if (uses_b)
    for (MitmVar v : s.parents_b) deps_bp.push_back(slot_of(v));
  b.rule(at(bp), deps_bp, [s, own, uses_b, leak_value](Vals d, Seeds) {
    int b_value = 0;
    if (uses_b) {
      std::vector<int> vb;
      for (std::size_t i = own; i < d.size(); ++i) vb.push_back(leak_value(d[i]));
      b_value = lookup(s.table_b, vb);
    }
    std::vector<int> vals;
    std::size_t k = 0;
    for (MitmVar v : s.parents_bp) vals.push_back(v == MitmVar::B ? b_value : leak_value(d[k++]));
    return Symbol::letter(lookup(s.table_bp, vals));
  });
  return b.build();
}

CausalSystem mitm_composite(const Rational& p, const MitmStrategy& s, const MitmGeometry& g) {
  ResourceTriple cf = make_cf(mitm_cf_spec(p, g));
  return plug({cf.dishonest_B, mitm_sigma(s, g), cf.dishonest_A}).with_name("CF_B.sigma.CF_A");
}

Rational mitm_agreement(const Rational& p, const MitmStrategy& s, const MitmGeometry& g) {
  OutcomeDistribution d = exact_distribution(mitm_composite(p, s, g));
  const std::size_t a = d.column(portname::alice_coin), b = d.column(portname::bob_coin);
  return d.probability([&](const std::vector<Symbol>& v) { return v[a] == v[b]; });
}

Rational mitm_agreement_probability(const Rational& p) { return mitm_agreement(p, MitmStrategy::copy_c()); }

std::vector<MitmStrategy> enumerate_mitm_strategies(bool b_feeds_bp) {
  const std::vector<MitmVar> pb{MitmVar::C, MitmVar::Cp};
  std::vector<MitmVar> pbp{MitmVar::C, MitmVar::Cp};
  if (b_feeds_bp) pbp.push_back(MitmVar::B);
  auto tables = [](std::size_t parents) {
    const std::size_t cells = std::size_t{1} << parents;
    std::vector<std::vector<int>> out;
    for (std::size_t f = 0; f < (std::size_t{1} << cells); ++f) {
      std::vector<int> t(cells);
      for (std::size_t i = 0; i < cells; ++i) t[i] = static_cast<int>((f >> i) & 1u);
      out.push_back(std::move(t));
    }
    return out;
  };
  std::vector<MitmStrategy> all;
  for (const auto& tb : tables(pb.size()))
    for (const auto& tbp : tables(pbp.size())) all.push_back(MitmStrategy{pb, tb, pbp, tbp});
  return all;
}

MitmOptimum mitm_optimum(const Rational& p, bool b_feeds_bp, const MitmGeometry& g) {
  MitmOptimum best{Rational(-1), MitmStrategy::copy_c(), 0};
  for (const auto& s : enumerate_mitm_strategies(b_feeds_bp)) {
    ++best.strategies;
    Rational a = mitm_agreement(p, s, g);
    if (a > best.best) {
      best.best = a;
      best.argmax = s;
    }
  }
  return best;
}

Distinguisher equality_distinguisher(const SpaceTimePoint& a, const SpaceTimePoint& b, EqualityRule rule) {
  SystemBuilder d(rule == EqualityRule::differ_means_real ? "D_eq" : "D_eq_coin");
  auto x = d.input(portname::alice_coin, coin_outputs(), {a});
  auto y = d.input(portname::bob_coin, coin_outputs(), {b});
  const std::vector<SpaceTimePoint> both{a, b};
  auto g = d.output(kGuessPort, bits(), {shifted(common_future(both), 1)});
  if (rule == EqualityRule::coin_on_agreement) d.seed(uniform_factor("coin", 2));
  d.rule(at(g), {at(x), at(y)}, [rule](Vals v, Seeds s) {
    if (v[0] != v[1]) return Symbol::letter(0);
    return rule == EqualityRule::differ_means_real ? Symbol::letter(1) : bit(s[0]);
  });
  return Distinguisher(d.build());
}

TriangleChain impossibility_chain(const CfCandidate& c) {
  ResourceTriple cf = make_cf(c.cf);
  TriangleChain ch{c, cf.honest, cf.honest, cf.honest, cf.honest, cf.honest, cf.honest};
  ch.sigmaA_cfA = plug(c.sigma_A, cf.dishonest_A);
  ch.cfB_sigmaB = plug(cf.dishonest_B, c.sigma_B);
  ch.t0 = plug(ch.cfB_sigmaB, ch.sigmaA_cfA).with_name("T0");
  ch.t1 = plug(c.protocol.pi_A, ch.sigmaA_cfA).with_name("T1");
  ch.t2 = plug(c.protocol.pi_A, c.protocol.pi_B).with_name("T2");
  ch.t3 = cf.honest.with_name("T3");
  return ch;
}

TriangleReport triangle_decompose(const Distinguisher& d, const TriangleChain& ch) {
  const Rational p0 = guess_zero_probability(d, ch.t0);
  const Rational p1 = guess_zero_probability(d, ch.t1);
  const Rational p2 = guess_zero_probability(d, ch.t2);
  const Rational p3 = guess_zero_probability(d, ch.t3);
  TriangleReport r;
  r.composite = abs(p0 - p3);
  r.honest = abs(p2 - p3);
  r.dishonest_A = abs(p1 - p2);
  r.dishonest_B = abs(p0 - p1);

  Distinguisher with_pi_a(plug(d.system(), ch.candidate.protocol.pi_A));
  r.dishonest_A_reduced = advantage_exact(with_pi_a, ch.sigmaA_cfA, ch.candidate.protocol.pi_B);
  Distinguisher with_ideal_a(plug(d.system(), ch.sigmaA_cfA));
  r.dishonest_B_reduced = advantage_exact(with_ideal_a, ch.cfB_sigmaB, ch.candidate.protocol.pi_A);
  r.contractivity_consistent = r.dishonest_A_reduced == r.dishonest_A && r.dishonest_B_reduced == r.dishonest_B;

  r.threshold = r.composite / 3;
  r.worst_case = "honest";
  Rational worst = r.honest;
  if (r.dishonest_A > worst) {
    worst = r.dishonest_A;
    r.worst_case = "dishonest_A";
  }
  if (r.dishonest_B > worst) {
    worst = r.dishonest_B;
    r.worst_case = "dishonest_B";
  }
  r.certifies = worst >= r.threshold;
  return r;
}

namespace {

// Shared geometry of the direct-communication coin-flip candidates.
struct DirectPoints {
  SpaceTimePoint send = pt(0), meet = pt(2), leak = pt(1), inject = pt(Rational(5, 2)), alice_out = pt(3),
                 bob_out = pt(4);
};

CFSpec direct_cf_spec(const Rational& p) {
  DirectPoints q;
  return CFSpec{p, q.alice_out, q.bob_out, CheatPoints{q.leak, q.inject}, CheatPoints{q.leak, q.inject}};
}

}  // namespace

CfCandidate candidate_blocked(const Rational& p) {
  DirectPoints q;
  CfCandidate c{"blocked", direct_cf_spec(p), ProtocolPair{make_cf(direct_cf_spec(p)).honest, make_cf(direct_cf_spec(p)).honest},
                make_cf(direct_cf_spec(p)).honest, make_cf(direct_cf_spec(p)).honest};

  SystemBuilder a("Pi_A.blocked");
  auto am = a.input(kMeetPort, bits(), {q.meet});
  auto ao = a.output(portname::alice_coin, bits(), {q.alice_out});
  a.seed(uniform_factor("a", 2));
  a.seed(uniform_factor("fallback_b", 2));
  a.rule(at(ao), {at(am)}, [](Vals d, Seeds s) { return xor_bits(bit(s[0]), or_seed(d[0], s[1])); });

  SystemBuilder b("Pi_B.blocked");
  auto bm = b.output(kMeetPort, bits(), {q.meet});
  auto bo = b.output(portname::bob_coin, bits(), {q.bob_out});
  b.seed(uniform_factor("b", 2));
  b.seed(uniform_factor("fallback_a", 2));
  b.rule(at(bm), {}, [](Vals, Seeds s) { return bit(s[0]); });
  b.rule(at(bo), {}, [](Vals, Seeds s) { return xor_bits(bit(s[1]), bit(s[0])); });
  c.protocol = ProtocolPair{a.build(), b.build()};

  SystemBuilder sa("sigma_A.blocked");
  sa.input(portname::alice_leak, bits(), {q.leak});
  sa.output(portname::alice_bias, bits(), {q.inject});
  auto sm = sa.output(kMeetPort, bits(), {q.meet});
  sa.seed(uniform_factor("u", 2));
  sa.rule(at(sm), {}, [](Vals, Seeds s) { return bit(s[0]); });
  c.sigma_A = sa.build();

  SystemBuilder sb("sigma_B.blocked");
  sb.input(portname::bob_leak, bits(), {q.leak});
  sb.output(portname::bob_bias, bits(), {q.inject});
  sb.input(kMeetPort, bits(), {q.meet});
  c.sigma_B = sb.build();
  return c;
}

CfCandidate candidate_direct(const Rational& p) {
  DirectPoints q;
  const std::string msg = "x.a";
  CausalSystem placeholder = make_cf(direct_cf_spec(p)).honest;
  CfCandidate c{"direct", direct_cf_spec(p), ProtocolPair{placeholder, placeholder}, placeholder, placeholder};

  SystemBuilder a("Pi_A.direct");
  auto send = a.output(msg, bits(), {q.send});
  auto am = a.input(kMeetPort, bits(), {q.meet});
  auto ao = a.output(portname::alice_coin, bits(), {q.alice_out});
  a.seed(uniform_factor("a", 2));
  a.seed(uniform_factor("fallback_b", 2));
  a.rule(at(send), {}, [](Vals, Seeds s) { return bit(s[0]); });
  a.rule(at(ao), {at(am)}, [](Vals d, Seeds s) { return xor_bits(bit(s[0]), or_seed(d[0], s[1])); });

  SystemBuilder b("Pi_B.direct");
  auto recv = b.input(msg, bits(), {q.send});
  auto bm = b.output(kMeetPort, bits(), {q.meet});
  auto bo = b.output(portname::bob_coin, bits(), {q.bob_out});
  b.seed(uniform_factor("b", 2));
  b.seed(uniform_factor("fallback_a", 2));
  b.rule(at(bm), {}, [](Vals, Seeds s) { return bit(s[0]); });
  b.rule(at(bo), {at(recv)}, [](Vals d, Seeds s) { return xor_bits(or_seed(d[0], s[1]), bit(s[0])); });
  c.protocol = ProtocolPair{a.build(), b.build()};

  // Bob's side: answer a xor c' where c' is the ideal coin's value.
  SystemBuilder sa("sigma_A.direct");
  auto sa_msg = sa.input(msg, bits(), {q.send});
  auto sa_leak = sa.input(portname::alice_leak, bits(), {q.leak});
  auto sa_meet = sa.output(kMeetPort, bits(), {q.meet});
  sa.output(portname::alice_bias, bits(), {q.inject});
  sa.seed(uniform_factor("u", 2));
  sa.rule(at(sa_meet), {at(sa_msg), at(sa_leak)},
          [](Vals d, Seeds s) { return xor_bits(or_seed(d[0], s[0]), d[1]); });
  c.sigma_A = sa.build();

  // Alice's side: a guessed message, then steer the coin to guess xor b.
  SystemBuilder sb("sigma_B.direct");
  sb.input(portname::bob_leak, bits(), {q.leak});
  auto sb_msg = sb.output(msg, bits(), {q.send});
  auto sb_meet = sb.input(kMeetPort, bits(), {q.meet});
  auto sb_bias = sb.output(portname::bob_bias, bits(), {q.inject});
  sb.seed(uniform_factor("u", 2));
  sb.rule(at(sb_msg), {}, [](Vals, Seeds s) { return bit(s[0]); });
  sb.rule(at(sb_bias), {at(sb_meet)}, [](Vals d, Seeds s) {
    return d[0].is_letter() ? xor_bits(bit(s[0]), d[0]) : Symbol::vacuum();
  });
  c.sigma_B = sb.build();
  return c;
}

namespace {

const std::string kMsg = "x.msg";
const std::string kAbortMsg = "x.abort";

struct AbortCandidatePoints {
  SpaceTimePoint msg;    // just after P
  SpaceTimePoint abort;  // just before R
};

AbortCandidatePoints abort_points(const AbortFlipGeometry& g) {
  AbortCandidatePoints q{shifted(g.cd.cd.P, g.eps), shifted(g.cd.R, -g.eps)};
  if (!strictly_precedes(q.msg, g.cd.cd.Pp))
    throw PreconditionError("candidate message point must precede P'");
  return q;
}

}  // namespace

CdAbortCandidate cd_abort_candidate_direct(const AbortFlipGeometry& g) {
  const CDSpec& cd = g.cd.cd;
  const AbortCandidatePoints q = abort_points(g);
  const Alphabet ab{Symbol::abort()};

  SystemBuilder a("PiCD_A.direct");
  auto in = a.input(cd.in_port(), bits(), {cd.P});
  auto m = a.output(kMsg, bits(), {q.msg});
  a.output(kAbortMsg, ab, {q.abort});
  a.rule(at(m), {at(in)}, copy0);

  SystemBuilder b("PiCD_B.direct");
  auto bm = b.input(kMsg, bits(), {q.msg});
  auto ba = b.input(kAbortMsg, ab, {q.abort});
  auto out = b.output(cd.out_port(), bits(), {cd.Q});
  b.rule(at(out), {at(bm), at(ba)}, [](Vals d, Seeds) { return d[1] == Symbol::abort() ? Symbol::vacuum() : d[0]; });

  SystemBuilder sa("sigmaCD_A.direct");
  auto sm = sa.input(kMsg, bits(), {q.msg});
  auto sab = sa.input(kAbortMsg, ab, {q.abort});
  auto fwd = sa.output(cd.in_port(), bits(), {cd.Pp});
  auto fab = sa.output(cd.abort_port(), ab, {g.cd.R});
  sa.rule(at(fwd), {at(sm)}, copy0);
  sa.rule(at(fab), {at(sab)}, copy0);

  SystemBuilder sb("sigmaCD_B.direct");
  sb.input(cd.out_port(), bits(), {cd.Qp});
  auto guess = sb.output(kMsg, bits(), {q.msg});
  sb.output(kAbortMsg, ab, {q.abort});
  sb.seed(uniform_factor("guess", 2));
  sb.rule(at(guess), {}, [](Vals, Seeds s) { return bit(s[0]); });

  return CdAbortCandidate{"direct", ProtocolPair{a.build(), b.build()}, sa.build(), sb.build()};
}

CdAbortCandidate cd_abort_candidate_silent(const AbortFlipGeometry& g) {
  const CDSpec& cd = g.cd.cd;
  const AbortCandidatePoints q = abort_points(g);
  const Alphabet ab{Symbol::abort()};

  SystemBuilder a("PiCD_A.silent");
  a.input(cd.in_port(), bits(), {cd.P});
  a.output(kMsg, bits(), {q.msg});
  a.output(kAbortMsg, ab, {q.abort});

  SystemBuilder b("PiCD_B.silent");
  b.input(kMsg, bits(), {q.msg});
  b.input(kAbortMsg, ab, {q.abort});
  b.output(cd.out_port(), bits(), {cd.Q});

  SystemBuilder sa("sigmaCD_A.silent");
  sa.input(kMsg, bits(), {q.msg});
  sa.input(kAbortMsg, ab, {q.abort});
  sa.output(cd.in_port(), bits(), {cd.Pp});
  auto fab = sa.output(cd.abort_port(), ab, {g.cd.R});
  sa.rule(at(fab), {}, [](Vals, Seeds) { return Symbol::abort(); });

  SystemBuilder sb("sigmaCD_B.silent");
  sb.input(cd.out_port(), bits(), {cd.Qp});
  sb.output(kMsg, bits(), {q.msg});
  sb.output(kAbortMsg, ab, {q.abort});

  return CdAbortCandidate{"silent", ProtocolPair{a.build(), b.build()}, sa.build(), sb.build()};
}

std::vector<CdAbortCandidate> bundled_cd_abort_candidates(const AbortFlipGeometry& g) {
  return {cd_abort_candidate_direct(g), cd_abort_candidate_silent(g)};
}

CfCandidate stack_to_half_coin(const CdAbortCandidate& c, const AbortFlipGeometry& g) {
  const CFSpec uf = unfair_cf_spec(g);
  const ProtocolPair l2 = pi_cd_abort_to_cf_unfair(g);
  const ProtocolPair l1 = pi_unfair_to_biased(uf, g.eps);
  CfCandidate out{"stacked(" + c.name + ")", half_biased_spec(uf, g.eps),
                  ProtocolPair{plug({l1.pi_A, l2.pi_A, c.protocol.pi_A}), plug({l1.pi_B, l2.pi_B, c.protocol.pi_B})},
                  plug({sim_biased_A(uf, g.eps), sigma_unfair_A(g), c.sigma_A}),
                  plug({sim_biased_B(uf, g.eps), sigma_unfair_B(g), c.sigma_B})};
  return out;
}

ChainGeometry canonical_chain_geometry(int alphabet) {
  return ChainGeometry{CDSpec{pt(0), pt(1), pt(6), pt(Rational(15, 2)), alphabet, "cdx"},
                       CDSpec{pt(Rational(1, 2)), pt(1), pt(2), pt(3), alphabet, "cd1"},
                       CDSpec{pt(4), pt(5), pt(6), pt(7), alphabet, "cd2"}, pt(Rational(7, 2))};
}

ChannelProtocol naive_chain_protocol(int alphabet) { return naive_chain_protocol(canonical_chain_geometry(alphabet)); }

ChannelProtocol naive_chain_protocol(const ChainGeometry& g) {
  const int alphabet = g.claimed.alphabet;
  if (g.first.alphabet != alphabet || g.second.alphabet != alphabet)
    throw PreconditionError("chained channels must share the claimed channel's alphabet");
  const Alphabet k = letters(alphabet);
  ChannelProtocol p{"naive-chain", g.claimed, {g.first, g.second}, {},
                    {Port{"dir.relay", Direction::in, k, {g.relay}}},
                    make_cd(g.first).honest, make_cd(g.first).honest, false};
  const CDSpec& x = p.claimed;
  const CDSpec& c1 = p.channels[0];
  const CDSpec& c2 = p.channels[1];
  const SpaceTimePoint& relay = g.relay;

  SystemBuilder a("Pi_A.chain");
  auto ain = a.input(x.in_port(), k, {x.P});
  auto a1 = a.output(c1.in_port(), k, {c1.P});
  auto arelay = a.input("dir.relay", k, {relay});
  auto a2 = a.output(c2.in_port(), k, {c2.P});
  a.rule(at(a1), {at(ain)}, copy0);
  a.rule(at(a2), {at(arelay)}, copy0);
  p.pi_A = a.build();

  SystemBuilder b("Pi_B.chain");
  auto b1 = b.input(c1.out_port(), k, {c1.Q});
  auto brelay = b.output("dir.relay", k, {relay});
  auto b2 = b.input(c2.out_port(), k, {c2.Q});
  auto bout = b.output(x.out_port(), k, {x.Q});
  b.seed(uniform_factor("fallback", static_cast<std::size_t>(alphabet)));
  b.rule(at(brelay), {at(b1)}, copy0);
  b.rule(at(bout), {at(b2)}, [](Vals d, Seeds s) { return or_seed(d[0], s[0]); });
  p.pi_B = b.build();
  return p;
}

DelayExtensionReport delay_extension_attack(const ChannelProtocol& proto) {
  DelayExtensionReport r;
  const CDSpec& x = proto.claimed;
  const CausalDiamond region = trusted_region(x);
  for (const auto& ch : proto.channels) {
    if (diamond_subset(region, trusted_region(ch))) {
      r.reason = "claimed trusted region lies inside the region of channel '" + ch.label + "'";
      return r;
    }
  }
  r.applicable = true;
  r.reason = "claimed trusted region is not contained in any channel's region";

  auto triple = [&](const CDSpec& s) {
    return proto.abort_channels ? make_cd_abort(CDAbortSpec{s, s.Qp}) : make_cd(s);
  };
  const ResourceTriple claimed = triple(x);

  // σ_B runs Alice's protocol on a uniform guess through the channels' dishonest-receiver variants.
  CausalSystem sigma = plug(uniform_source(x.in_port(), letters(x.alphabet), x.P), proto.pi_A);
  for (const auto& ch : proto.channels) sigma = plug(sigma, triple(ch).dishonest_B);
  sigma = compose_parallel(sigma, sink({Port{x.out_port(), Direction::in, letters(x.alphabet), {x.Qp}}}))
              .with_name("sigma_B");

  CausalSystem lhs = plug(claimed.dishonest_B, sigma);
  std::vector<Port> wires;
  for (const auto& ch : proto.channels) {
    lhs = plug(lhs, delta_converter(ch, Side::B));
    wires.push_back(Port{ch.out_port(), Direction::in, letters(ch.alphabet), {ch.Q}});
  }
  for (const auto& d : proto.direct_to_B) wires.push_back(d);

  std::map<std::string, const CDSpec*> by_port;
  for (const auto& ch : proto.channels) by_port[ch.out_port()] = &ch;
  auto blocked = [&](const std::string& port, const SpaceTimePoint& point) {
    if (auto it = by_port.find(port); it != by_port.end()) return !precedes(it->second->Pp, x.Pp);
    return !precedes(point, x.Pp);
  };
  for (const auto& w : wires)
    for (const auto& q : w.points)
      if (blocked(w.name, q)) r.blocked.push_back(w.name + "@" + to_string(q));
  lhs = plug(lhs, blocker(wires, blocked));
  lhs = plug(lhs, proto.pi_B).with_name("CD'_B.sigma_B.delta_B.block_B.Pi_B");

  r.advantage = 0;
  for (int m = 0; m < x.alphabet; ++m) {
    SystemBuilder d("D_fixed_" + std::to_string(m));
    auto send = d.output(x.in_port(), letters(x.alphabet), {x.P});
    auto recv = d.input(x.out_port(), letters(x.alphabet), {x.Q});
    auto g = d.output(kGuessPort, bits(), {shifted(x.Q, 1)});
    d.rule(at(send), {}, [m](Vals, Seeds) { return Symbol::letter(m); });
    d.rule(at(g), {at(recv)}, [m](Vals v, Seeds) { return Symbol::letter(v[0] == Symbol::letter(m) ? 0 : 1); });
    r.advantage = std::max(r.advantage, advantage_exact(Distinguisher(d.build()), claimed.honest, lhs));
  }
  r.bound = r.advantage / 4;
  return r;
}

}  // namespace relcrypt
