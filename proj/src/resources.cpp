#include "relcrypt/resources.hpp"

#include "relcrypt/error.hpp"

namespace relcrypt {

namespace {

void require_strict(const SpaceTimePoint& a, const SpaceTimePoint& b, const std::string& what) {
  if (!strictly_precedes(a, b))
    throw PreconditionError(what + ": " + to_string(a) + " must strictly precede " + to_string(b));
}

void require_weak(const SpaceTimePoint& a, const SpaceTimePoint& b, const std::string& what) {
  if (!precedes(a, b)) throw PreconditionError(what + ": " + to_string(a) + " must precede " + to_string(b));
}

Alphabet with_abort(Alphabet a) {
  a.push_back(Symbol::abort());
  return a;
}

// Honest coin flip with the given output alphabet.
CausalSystem honest_coin(const std::string& name, const CFSpec& spec, const Alphabet& out_alpha) {
  SystemBuilder b(name);
  auto a = b.output(portname::alice_coin, out_alpha, {spec.alice_out});
  auto o = b.output(portname::bob_coin, out_alpha, {spec.bob_out});
  b.seed(uniform_factor("c", 2));
  auto coin = [](std::span<const Symbol>, std::span<const std::uint32_t> s) {
    return Symbol::letter(static_cast<int>(s[0]));
  };
  b.rule(at(a), {}, coin);
  b.rule(at(o), {}, coin);
  return b.build();
}

struct CheatView {
  const std::string& honest_port;
  const SpaceTimePoint& honest_point;
  const std::string& leak_port;
  const std::string& steer_port;
  const CheatPoints& cheat;
};

CausalSystem biased_coin(const std::string& name, const CFSpec& spec, const CheatView& v) {
  SystemBuilder b(name);
  auto h = b.output(v.honest_port, bits(), {v.honest_point});
  auto leak = b.output(v.leak_port, bits(), {v.cheat.leak});
  auto steer = b.input(v.steer_port, bits(), {v.cheat.inject});
  b.seed(uniform_factor("c", 2));
  b.seed(bernoulli_factor("bias", spec.p));
  b.rule(at(leak), {}, [](std::span<const Symbol>, std::span<const std::uint32_t> s) {
    return Symbol::letter(static_cast<int>(s[0]));
  });
  b.rule(at(h), {at(steer)}, [](std::span<const Symbol> d, std::span<const std::uint32_t> s) {
    if (s[1] == 0 && d[0].is_letter()) return d[0];
    return Symbol::letter(static_cast<int>(s[0]));
  });
  return b.build();
}

CausalSystem unfair_coin(const std::string& name, const CheatView& v) {
  SystemBuilder b(name);
  auto h = b.output(v.honest_port, with_abort(bits()), {v.honest_point});
  auto leak = b.output(v.leak_port, bits(), {v.cheat.leak});
  auto ab = b.input(v.steer_port, {Symbol::abort(), Symbol::no_abort()}, {v.cheat.inject});
  b.seed(uniform_factor("c", 2));
  b.rule(at(leak), {}, [](std::span<const Symbol>, std::span<const std::uint32_t> s) {
    return Symbol::letter(static_cast<int>(s[0]));
  });
  b.rule(at(h), {at(ab)}, [](std::span<const Symbol> d, std::span<const std::uint32_t> s) {
    if (d[0] == Symbol::abort()) return Symbol::abort();
    return Symbol::letter(static_cast<int>(s[0]));
  });
  return b.build();
}

Symbol copy_first(std::span<const Symbol> d, std::span<const std::uint32_t>) { return d[0]; }

}  // namespace

void validate(const CFSpec& spec) {
  if (spec.p < 0 || spec.p > 1) throw PreconditionError("bias probability " + to_string(spec.p) + " outside [0, 1]");
  require_strict(spec.cheat_B.leak, spec.cheat_B.inject, "coin flip, Bob's leak/inject");
  require_strict(spec.cheat_B.inject, spec.alice_out, "coin flip, Bob's inject/Alice's output");
  require_strict(spec.cheat_A.leak, spec.cheat_A.inject, "coin flip, Alice's leak/inject");
  require_strict(spec.cheat_A.inject, spec.bob_out, "coin flip, Alice's inject/Bob's output");
}

ResourceTriple make_cf(const CFSpec& spec) {
  validate(spec);
  const std::string tag = "CF[" + to_string(spec.p) + "]";
  return ResourceTriple{
      honest_coin(tag, spec, bits()),
      biased_coin(tag + "_A", spec,
                  CheatView{portname::bob_coin, spec.bob_out, portname::alice_leak, portname::alice_bias,
                            spec.cheat_A}),
      biased_coin(tag + "_B", spec,
                  CheatView{portname::alice_coin, spec.alice_out, portname::bob_leak, portname::bob_bias,
                            spec.cheat_B}),
  };
}

ResourceTriple make_cf_unfair(const CFSpec& spec) {
  CFSpec s = spec;
  s.p = 0;
  validate(s);
  return ResourceTriple{
      honest_coin("CFuf", spec, with_abort(bits())),
      unfair_coin("CFuf_A", CheatView{portname::bob_coin, spec.bob_out, portname::alice_leak, portname::alice_abort,
                                      spec.cheat_A}),
      unfair_coin("CFuf_B", CheatView{portname::alice_coin, spec.alice_out, portname::bob_leak, portname::bob_abort,
                                      spec.cheat_B}),
  };
}

void validate(const BCSpec& spec) {
  require_strict(spec.commit, spec.notify, "bit commitment commit/notify");
  require_strict(spec.commit, spec.open, "bit commitment commit/open");
  require_strict(spec.open, spec.reveal, "bit commitment open/reveal");
}

ResourceTriple make_bc(const BCSpec& spec) {
  validate(spec);
  SystemBuilder b("BC");
  auto commit = b.input("bc.commit", bits(), {spec.commit});
  auto comm = b.output("bc.comm", {Symbol::comm()}, {spec.notify});
  auto open = b.input("bc.open", {Symbol::open()}, {spec.open});
  auto reveal = b.output("bc.reveal", bits(), {spec.reveal});
  b.rule(at(comm), {at(commit)}, [](std::span<const Symbol> d, std::span<const std::uint32_t>) {
    return d[0].is_letter() ? Symbol::comm() : Symbol::vacuum();
  });
  b.rule(at(reveal), {at(commit), at(open)}, [](std::span<const Symbol> d, std::span<const std::uint32_t>) {
    return d[0].is_letter() && d[1] == Symbol::open() ? d[0] : Symbol::vacuum();
  });
  CausalSystem bc = b.build();
  return ResourceTriple{bc, bc.with_name("BC_A"), bc.with_name("BC_B")};
}

void validate(const CDSpec& spec) {
  if (spec.alphabet < 1) throw PreconditionError("channel alphabet must be nonempty");
  require_weak(spec.P, spec.Pp, "channel P/P'");
  require_strict(spec.Pp, spec.Qp, "channel P'/Q'");
  require_weak(spec.Qp, spec.Q, "channel Q'/Q");
}

namespace {

CausalSystem channel(const std::string& name, const CDSpec& spec, const SpaceTimePoint& in_at,
                     const SpaceTimePoint& out_at) {
  SystemBuilder b(name);
  auto in = b.input(spec.in_port(), letters(spec.alphabet), {in_at});
  auto out = b.output(spec.out_port(), letters(spec.alphabet), {out_at});
  b.rule(at(out), {at(in)}, copy_first);
  return b.build();
}

}  // namespace

ResourceTriple make_cd(const CDSpec& spec) {
  validate(spec);
  const std::string tag = "CD<" + spec.label + ">";
  return ResourceTriple{channel(tag, spec, spec.P, spec.Q), channel(tag + "_A", spec, spec.Pp, spec.Q),
                        channel(tag + "_B", spec, spec.P, spec.Qp)};
}

void validate(const CDAbortSpec& spec) {
  validate(spec.cd);
  require_weak(spec.cd.Pp, spec.R, "abort channel P'/R");
  require_strict(spec.R, spec.cd.Q, "abort channel R/Q");
}

ResourceTriple make_cd_abort(const CDAbortSpec& spec) {
  validate(spec);
  const CDSpec& cd = spec.cd;
  const std::string tag = "CDab<" + cd.label + ">";
  SystemBuilder b(tag + "_A");
  auto in = b.input(cd.in_port(), letters(cd.alphabet), {cd.Pp});
  auto ab = b.input(cd.abort_port(), {Symbol::abort()}, {spec.R});
  auto out = b.output(cd.out_port(), letters(cd.alphabet), {cd.Q});
  b.rule(at(out), {at(in), at(ab)}, [](std::span<const Symbol> d, std::span<const std::uint32_t>) {
    return d[1] == Symbol::abort() ? Symbol::vacuum() : d[0];
  });
  return ResourceTriple{channel(tag, cd, cd.P, cd.Q), b.build(), channel(tag + "_B", cd, cd.P, cd.Qp)};
}

CausalDiamond trusted_region(const CDSpec& spec) {
  validate(spec);
  return CausalDiamond(spec.Pp, spec.Qp);
}

CausalSystem delta_converter(const CDSpec& spec, Side side) {
  validate(spec);
  const bool a = side == Side::A;
  const std::string port = a ? spec.in_port() : spec.out_port();
  const SpaceTimePoint& from = a ? spec.P : spec.Qp;
  const SpaceTimePoint& to = a ? spec.Pp : spec.Q;
  SystemBuilder b(std::string("delta_") + (a ? "A" : "B") + "<" + spec.label + ">");
  auto in = b.input(port, letters(spec.alphabet), {from});
  auto out = b.output(port, letters(spec.alphabet), {to});
  b.rule(at(out), {at(in)}, copy_first);
  if (from == to) b.passthrough();
  return b.build();
}

CausalSystem blocker(const std::vector<Port>& wires,
                     const std::function<bool(const std::string&, const SpaceTimePoint&)>& blocked, std::string name) {
  SystemBuilder b(std::move(name));
  b.passthrough();
  for (const auto& w : wires) {
    auto in = b.input(w.name, w.alphabet, w.points);
    auto out = b.output(w.name, w.alphabet, w.points);
    for (std::size_t k = 0; k < w.points.size(); ++k) {
      if (blocked(w.name, w.points[k]))
        b.rule(at(out, k), {}, [](std::span<const Symbol>, std::span<const std::uint32_t>) { return Symbol::vacuum(); });
      else
        b.rule(at(out, k), {at(in, k)}, copy_first);
    }
  }
  return b.build();
}

CausalSystem identity_converter(const std::vector<Port>& wires) {
  return blocker(wires, [](const std::string&, const SpaceTimePoint&) { return false; }, "identity");
}

CausalSystem uniform_source(const std::string& port, const Alphabet& alphabet, const SpaceTimePoint& point) {
  SystemBuilder b("uniform<" + port + ">");
  auto o = b.output(port, alphabet, {point});
  b.seed(uniform_factor("u", alphabet.size()));
  Alphabet alpha = alphabet;
  b.rule(at(o), {}, [alpha](std::span<const Symbol>, std::span<const std::uint32_t> s) { return alpha[s[0]]; });
  return b.build();
}

CausalSystem sink(const std::vector<Port>& ports, std::string name) {
  SystemBuilder b(std::move(name));
  for (const auto& p : ports) b.input(p.name, p.alphabet, p.points);
  return b.build();
}

}  // namespace relcrypt
