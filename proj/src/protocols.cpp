#include "relcrypt/protocols.hpp"

#include "relcrypt/error.hpp"

namespace relcrypt {

namespace {

using Seeds = std::span<const std::uint32_t>;
using Vals = std::span<const Symbol>;

Symbol bit(std::uint32_t v) { return Symbol::letter(static_cast<int>(v)); }

Symbol xor_bits(Symbol a, Symbol b) { return Symbol::letter(a.value() ^ b.value()); }

Symbol or_seed(Symbol v, std::uint32_t fallback) { return v.is_letter() ? v : bit(fallback); }

Symbol flip(Symbol v) { return Symbol::letter(1 - v.value()); }

const Alphabet kAbortChoice{Symbol::abort(), Symbol::no_abort()};

Alphabet bits_or_abort() { return {Symbol::letter(0), Symbol::letter(1), Symbol::abort()}; }

void require(bool ok, const std::string& what) {
  if (!ok) throw PreconditionError(what);
}

void require_strict(const SpaceTimePoint& a, const SpaceTimePoint& b, const std::string& what) {
  require(strictly_precedes(a, b), what + ": " + to_string(a) + " must strictly precede " + to_string(b));
}

// Alice: sends a over the channel at P, reads b at M, outputs a xor b.
CausalSystem alice_xor(const CDSpec& cd, const SpaceTimePoint& meet, const SpaceTimePoint& out) {
  SystemBuilder b("Pi_A");
  auto send = b.output(cd.in_port(), bits(), {cd.P});
  auto m = b.input(kMeetPort, bits(), {meet});
  auto o = b.output(portname::alice_coin, bits(), {out});
  b.seed(uniform_factor("a", 2));
  b.seed(uniform_factor("fallback_b", 2));
  b.rule(at(send), {}, [](Vals, Seeds s) { return bit(s[0]); });
  b.rule(at(o), {at(m)}, [](Vals d, Seeds s) { return xor_bits(bit(s[0]), or_seed(d[0], s[1])); });
  return b.build();
}

// Bob: announces b at M, reads a from the channel at Q, outputs a xor b.
// With `abort_on_silence` a missing message yields "abort".
CausalSystem bob_xor(const CDSpec& cd, const SpaceTimePoint& meet, const SpaceTimePoint& out, bool abort_on_silence) {
  SystemBuilder b(abort_on_silence ? "Pi_B_abort" : "Pi_B");
  auto recv = b.input(cd.out_port(), bits(), {cd.Q});
  auto m = b.output(kMeetPort, bits(), {meet});
  auto o = b.output(portname::bob_coin, abort_on_silence ? bits_or_abort() : bits(), {out});
  b.seed(uniform_factor("b", 2));
  b.seed(uniform_factor("fallback_a", 2));
  b.rule(at(m), {}, [](Vals, Seeds s) { return bit(s[0]); });
  b.rule(at(o), {at(recv)}, [abort_on_silence](Vals d, Seeds s) {
    if (abort_on_silence && !d[0].is_letter()) return Symbol::abort();
    return xor_bits(or_seed(d[0], s[1]), bit(s[0]));
  });
  return b.build();
}

void check_cf_geometry(const CoinFlipGeometry& g, bool require_trusted_meet) {
  validate(g.cd);
  require(g.cd.alphabet == 2, "coin flip needs a binary channel");
  require(g.eps > 0, "eps must be positive");
  if (require_trusted_meet && !diamond_contains(trusted_region(g.cd), g.meet))
    throw PreconditionError("meeting point " + to_string(g.meet) + " lies outside the trusted region D(" +
                            to_string(g.cd.Pp) + ", " + to_string(g.cd.Qp) + ")");
  // The simulators compute the answer at M from the input at P' and the
  // channel output at Q' from M, so M may not sit on either tip.
  if (require_trusted_meet) {
    require_strict(g.cd.Pp, g.meet, "M must differ from P'");
    require_strict(g.meet, g.cd.Qp, "M must differ from Q'");
  }
  require_strict(g.meet, g.alice_out, "Alice's output must follow M");
  require_strict(g.meet, g.bob_out, "Bob's output must follow M");
  require_strict(g.cd.Q, g.bob_out, "Bob's output must follow the channel output");
}

}  // namespace

const ConstructionCase& Construction::find(const std::string& label) const {
  for (const auto& c : cases)
    if (c.label == label) return c;
  throw PreconditionError("construction '" + name + "' has no case '" + label + "'");
}

CoinFlipGeometry make_cf_geometry(const CDSpec& cd, const SpaceTimePoint& meet, const Rational& eps) {
  return CoinFlipGeometry{cd, meet, shifted(meet, eps), shifted(cd.Q, eps), eps};
}

CoinFlipGeometry canonical_cf_geometry() {
  CDSpec cd{SpaceTimePoint::at(0), SpaceTimePoint::at(1), SpaceTimePoint::at(3), SpaceTimePoint::at(4), 2, "cd"};
  return make_cf_geometry(cd, SpaceTimePoint::at(2));
}

CFSpec ideal_cf_spec(const CoinFlipGeometry& g) {
  const SpaceTimePoint leak = shifted(g.meet, -g.eps);
  return CFSpec{0, g.alice_out, g.bob_out, CheatPoints{leak, g.meet}, CheatPoints{leak, g.meet}};
}

ProtocolPair pi_cd_to_cf(const CoinFlipGeometry& g, bool require_trusted_meet) {
  check_cf_geometry(g, require_trusted_meet);
  return ProtocolPair{alice_xor(g.cd, g.meet, g.alice_out), bob_xor(g.cd, g.meet, g.bob_out, false)};
}

CausalSystem sigma_cf_A(const CoinFlipGeometry& g) {
  const CFSpec cf = ideal_cf_spec(g);
  SystemBuilder b("sigma_A");
  auto a = b.input(g.cd.in_port(), bits(), {g.cd.Pp});
  auto leak = b.input(portname::alice_leak, bits(), {cf.cheat_A.leak});
  auto m = b.output(kMeetPort, bits(), {g.meet});
  b.output(portname::alice_bias, bits(), {cf.cheat_A.inject});  // never steers
  b.seed(uniform_factor("u", 2));
  b.rule(at(m), {at(a), at(leak)}, [](Vals d, Seeds s) { return xor_bits(or_seed(d[0], s[0]), d[1]); });
  return b.build();
}

CausalSystem sigma_cf_B(const CoinFlipGeometry& g) {
  const CFSpec cf = ideal_cf_spec(g);
  SystemBuilder b("sigma_B");
  auto leak = b.input(portname::bob_leak, bits(), {cf.cheat_B.leak});
  auto m = b.input(kMeetPort, bits(), {g.meet});
  auto out = b.output(g.cd.out_port(), bits(), {g.cd.Qp});
  b.output(portname::bob_bias, bits(), {cf.cheat_B.inject});
  b.seed(uniform_factor("u", 2));
  b.rule(at(out), {at(m), at(leak)}, [](Vals d, Seeds s) { return xor_bits(or_seed(d[0], s[0]), d[1]); });
  return b.build();
}

Construction construct_cf_from_cd(const CoinFlipGeometry& g, bool require_trusted_meet) {
  ProtocolPair pi = pi_cd_to_cf(g, require_trusted_meet);
  ResourceTriple cd = make_cd(g.cd);
  ResourceTriple cf = make_cf(ideal_cf_spec(g));
  Construction c{"CF from CD", pi, {}};
  c.cases.push_back({"honest", plug({pi.pi_A, cd.honest, pi.pi_B}), cf.honest});
  c.cases.push_back({"dishonest_A", plug(cd.dishonest_A, pi.pi_B), plug(sigma_cf_A(g), cf.dishonest_A)});
  c.cases.push_back({"dishonest_B", plug(pi.pi_A, cd.dishonest_B), plug(cf.dishonest_B, sigma_cf_B(g))});
  return c;
}

CFSpec half_biased_spec(const CFSpec& unfair, const Rational& eps) {
  return CFSpec{Rational(1, 2), shifted(unfair.alice_out, eps), shifted(unfair.bob_out, eps),
                CheatPoints{shifted(unfair.cheat_B.leak, -eps), unfair.alice_out},
                CheatPoints{shifted(unfair.cheat_A.leak, -eps), unfair.bob_out}};
}

namespace {

CausalSystem forward_or_fresh(const std::string& name, const std::string& port, const SpaceTimePoint& in_at,
                              const SpaceTimePoint& out_at) {
  SystemBuilder b(name);
  auto in = b.input(port, bits_or_abort(), {in_at});
  auto out = b.output(port, bits(), {out_at});
  b.seed(uniform_factor("fresh", 2));
  b.rule(at(out), {at(in)}, [](Vals d, Seeds s) { return or_seed(d[0], s[0]); });
  return b.build();
}

// Re-emits the leaked coin for the unfair interface and converts the
// cheater's abort decision into a bias: abort sends the complement, which
// the half-biased coin delivers half of the time.
CausalSystem abort_to_bias(const std::string& name, const std::string& leak_port, const std::string& abort_port,
                           const std::string& bias_port, const CheatPoints& unfair, const CheatPoints& biased) {
  SystemBuilder b(name);
  auto inner_leak = b.input(leak_port, bits(), {biased.leak});
  auto outer_leak = b.output(leak_port, bits(), {unfair.leak});
  auto ab = b.input(abort_port, kAbortChoice, {unfair.inject});
  auto bias = b.output(bias_port, bits(), {biased.inject});
  b.rule(at(outer_leak), {at(inner_leak)}, [](Vals d, Seeds) { return d[0]; });
  b.rule(at(bias), {at(inner_leak), at(ab)}, [](Vals d, Seeds) {
    if (!d[0].is_letter()) return Symbol::vacuum();
    return d[1] == Symbol::abort() ? flip(d[0]) : d[0];
  });
  return b.build();
}

}  // namespace

ProtocolPair pi_unfair_to_biased(const CFSpec& unfair, const Rational& eps) {
  require(eps > 0, "eps must be positive");
  const CFSpec biased = half_biased_spec(unfair, eps);
  return ProtocolPair{
      forward_or_fresh("Pi'_A", portname::alice_coin, unfair.alice_out, biased.alice_out),
      forward_or_fresh("Pi'_B", portname::bob_coin, unfair.bob_out, biased.bob_out),
  };
}

CausalSystem sim_biased_A(const CFSpec& unfair, const Rational& eps) {
  const CFSpec biased = half_biased_spec(unfair, eps);
  return abort_to_bias("Sim'_A", portname::alice_leak, portname::alice_abort, portname::alice_bias, unfair.cheat_A,
                       biased.cheat_A);
}

CausalSystem sim_biased_B(const CFSpec& unfair, const Rational& eps) {
  const CFSpec biased = half_biased_spec(unfair, eps);
  return abort_to_bias("Sim'_B", portname::bob_leak, portname::bob_abort, portname::bob_bias, unfair.cheat_B,
                       biased.cheat_B);
}

UnfairToBiased construct_cf_half_from_unfair(const CFSpec& unfair, const Rational& eps) {
  ProtocolPair pi = pi_unfair_to_biased(unfair, eps);
  const CFSpec biased = half_biased_spec(unfair, eps);
  ResourceTriple uf = make_cf_unfair(unfair);
  ResourceTriple bi = make_cf(biased);
  UnfairToBiased r{Construction{"CF[1/2] from CF[uf]", pi, {}}, unfair, biased, 0};
  auto& cases = r.construction.cases;
  cases.push_back({"honest", plug({pi.pi_A, uf.honest, pi.pi_B}), bi.honest});
  cases.push_back({"dishonest_A", plug(uf.dishonest_A, pi.pi_B), plug(sim_biased_A(unfair, eps), bi.dishonest_A)});
  cases.push_back({"dishonest_B", plug(pi.pi_A, uf.dishonest_B), plug(bi.dishonest_B, sim_biased_B(unfair, eps))});

  const CausalSystem& real_b = cases.back().real;
  InputAssignment in(real_b);
  in.set(portname::bob_abort, Symbol::abort());
  OutcomeDistribution d = exact_distribution(real_b, in.values());
  const std::size_t out = d.column(portname::alice_coin);
  const std::size_t leak = d.column(portname::bob_leak);
  r.abort_agreement = d.probability([&](const std::vector<Symbol>& v) { return v[out] == v[leak]; });
  return r;
}

AbortFlipGeometry make_abort_geometry(const CDAbortSpec& cd, const SpaceTimePoint& meet, const Rational& eps) {
  return AbortFlipGeometry{cd, meet, shifted(meet, eps), shifted(cd.cd.Q, eps), eps};
}

AbortFlipGeometry canonical_abort_geometry() {
  const CoinFlipGeometry g = canonical_cf_geometry();
  return make_abort_geometry(CDAbortSpec{g.cd, SpaceTimePoint::at(Rational(5, 2))}, g.meet, g.eps);
}

CFSpec unfair_cf_spec(const AbortFlipGeometry& g) {
  const SpaceTimePoint leak = shifted(g.meet, -g.eps);
  return CFSpec{0, g.alice_out, g.bob_out, CheatPoints{leak, g.meet}, CheatPoints{leak, g.cd.cd.Q}};
}

namespace {

CoinFlipGeometry as_cf(const AbortFlipGeometry& g) { return CoinFlipGeometry{g.cd.cd, g.meet, g.alice_out, g.bob_out, g.eps}; }

}  // namespace

ProtocolPair pi_cd_abort_to_cf_unfair(const AbortFlipGeometry& g) {
  validate(g.cd);
  check_cf_geometry(as_cf(g), true);
  require_strict(g.meet, g.cd.R, "the abort point must follow M");
  return ProtocolPair{alice_xor(g.cd.cd, g.meet, g.alice_out), bob_xor(g.cd.cd, g.meet, g.bob_out, true)};
}

CausalSystem sigma_unfair_A(const AbortFlipGeometry& g) {
  const CFSpec cf = unfair_cf_spec(g);
  const CDSpec& cd = g.cd.cd;
  SystemBuilder b("sigma_A_abort");
  auto a = b.input(cd.in_port(), bits(), {cd.Pp});
  auto ab = b.input(cd.abort_port(), {Symbol::abort()}, {g.cd.R});
  auto leak = b.input(portname::alice_leak, bits(), {cf.cheat_A.leak});
  auto m = b.output(kMeetPort, bits(), {g.meet});
  auto out = b.output(portname::alice_abort, kAbortChoice, {cf.cheat_A.inject});
  b.seed(uniform_factor("u", 2));
  b.rule(at(m), {at(a), at(leak)}, [](Vals d, Seeds s) { return xor_bits(or_seed(d[0], s[0]), d[1]); });
  b.rule(at(out), {at(a), at(ab)}, [](Vals d, Seeds) {
    return !d[0].is_letter() || d[1] == Symbol::abort() ? Symbol::abort() : Symbol::no_abort();
  });
  return b.build();
}

CausalSystem sigma_unfair_B(const AbortFlipGeometry& g) {
  const CFSpec cf = unfair_cf_spec(g);
  const CDSpec& cd = g.cd.cd;
  SystemBuilder b("sigma_B_abort");
  auto leak = b.input(portname::bob_leak, bits(), {cf.cheat_B.leak});
  auto m = b.input(kMeetPort, bits(), {g.meet});
  auto out = b.output(cd.out_port(), bits(), {cd.Qp});
  b.output(portname::bob_abort, kAbortChoice, {cf.cheat_B.inject});
  b.seed(uniform_factor("u", 2));
  b.rule(at(out), {at(m), at(leak)}, [](Vals d, Seeds s) { return xor_bits(or_seed(d[0], s[0]), d[1]); });
  return b.build();
}

Construction construct_cf_unfair_from_cd_abort(const AbortFlipGeometry& g) {
  ProtocolPair pi = pi_cd_abort_to_cf_unfair(g);
  ResourceTriple cd = make_cd_abort(g.cd);
  ResourceTriple uf = make_cf_unfair(unfair_cf_spec(g));
  Construction c{"CF[uf] from CD[abort]", pi, {}};
  c.cases.push_back({"honest", plug({pi.pi_A, cd.honest, pi.pi_B}), uf.honest});
  c.cases.push_back({"dishonest_A", plug(cd.dishonest_A, pi.pi_B), plug(sigma_unfair_A(g), uf.dishonest_A)});
  c.cases.push_back({"dishonest_B", plug(pi.pi_A, cd.dishonest_B), plug(uf.dishonest_B, sigma_unfair_B(g))});
  return c;
}

BlumGeometry canonical_blum_geometry() {
  BCSpec bc{SpaceTimePoint::at(0), SpaceTimePoint::at(1), SpaceTimePoint::at(3), SpaceTimePoint::at(4)};
  return BlumGeometry{bc, SpaceTimePoint::at(2), SpaceTimePoint::at(5), SpaceTimePoint::at(5, 1)};
}

BlumReport blum_cf_from_bc(const BlumGeometry& g) {
  validate(g.bc);
  require_strict(g.bc.notify, g.announce, "Bob must announce after learning of the commitment");
  require_strict(g.announce, g.bc.open, "Bob must announce before Alice opens");
  require_strict(g.announce, g.alice_out, "Alice's output must follow the announcement");
  require_strict(g.bc.reveal, g.bob_out, "Bob's output must follow the reveal");

  SystemBuilder a("Blum_A");
  auto commit = a.output("bc.commit", bits(), {g.bc.commit});
  auto bin = a.input(kMeetPort, bits(), {g.announce});
  auto open = a.output("bc.open", {Symbol::open()}, {g.bc.open});
  auto ao = a.output(portname::alice_coin, bits(), {g.alice_out});
  a.seed(uniform_factor("a", 2));
  a.seed(uniform_factor("fallback_b", 2));
  a.rule(at(commit), {}, [](Vals, Seeds s) { return bit(s[0]); });
  a.rule(at(open), {}, [](Vals, Seeds) { return Symbol::open(); });
  a.rule(at(ao), {at(bin)}, [](Vals d, Seeds s) { return xor_bits(bit(s[0]), or_seed(d[0], s[1])); });

  SystemBuilder b("Blum_B");
  b.input("bc.comm", {Symbol::comm()}, {g.bc.notify});
  auto bout = b.output(kMeetPort, bits(), {g.announce});
  auto reveal = b.input("bc.reveal", bits(), {g.bc.reveal});
  auto bo = b.output(portname::bob_coin, bits(), {g.bob_out});
  b.seed(uniform_factor("b", 2));
  b.seed(uniform_factor("fallback_a", 2));
  b.rule(at(bout), {}, [](Vals, Seeds s) { return bit(s[0]); });
  b.rule(at(bo), {at(reveal)}, [](Vals d, Seeds s) { return xor_bits(or_seed(d[0], s[1]), bit(s[0])); });

  ResourceTriple bc = make_bc(g.bc);
  BlumReport r{ProtocolPair{a.build(), b.build()}, bc.honest, bc.honest, bc.honest, 0, 0, 0};
  r.honest = plug({r.protocol.pi_A, bc.honest, r.protocol.pi_B});
  r.dishonest_A = plug(bc.dishonest_A, r.protocol.pi_B);
  r.dishonest_B = plug(r.protocol.pi_A, bc.dishonest_B);

  {
    OutcomeDistribution d = exact_distribution(r.honest);
    const std::size_t x = d.column(portname::alice_coin), y = d.column(portname::bob_coin);
    r.honest_agreement = d.probability([&](const std::vector<Symbol>& v) { return v[x] == v[y]; });
  }
  for (int av = 0; av < 2; ++av) {
    InputAssignment in(r.dishonest_A);
    in.set("bc.commit", Symbol::letter(av));
    OutcomeDistribution d = exact_distribution(r.dishonest_A, in.values());
    const std::size_t m = d.column(kMeetPort), y = d.column(portname::bob_coin);
    r.refuse_agreement = std::max(r.refuse_agreement, d.probability([&](const std::vector<Symbol>& v) {
      return v[y].is_letter() && v[y].value() == (av ^ v[m].value());
    }));
  }
  for (Symbol bv : {Symbol::vacuum(), Symbol::letter(0), Symbol::letter(1)}) {
    InputAssignment in(r.dishonest_B);
    in.set(kMeetPort, bv);
    OutcomeDistribution d = exact_distribution(r.dishonest_B, in.values());
    const std::size_t x = d.column(portname::alice_coin);
    for (int target = 0; target < 2; ++target)
      r.bob_max_bias = std::max(
          r.bob_max_bias, d.probability([&](const std::vector<Symbol>& v) { return v[x] == Symbol::letter(target); }));
  }
  return r;
}

}  // namespace relcrypt
