#pragma once

#include "relcrypt/causal.hpp"

#include <functional>
#include <string>

namespace relcrypt {

// Port names shared by the resources, protocols and attacks.
namespace portname {
inline const std::string alice_coin = "A.c";
inline const std::string bob_coin = "B.c";
inline const std::string alice_leak = "A.leak";
inline const std::string alice_bias = "A.bias";
inline const std::string alice_abort = "A.abort";
inline const std::string bob_leak = "B.leak";
inline const std::string bob_bias = "B.bias";
inline const std::string bob_abort = "B.abort";
}  // namespace portname

// Honest system plus the variants exposing a dishonest party's interface.
struct ResourceTriple {
  CausalSystem honest;
  CausalSystem dishonest_A;
  CausalSystem dishonest_B;
};

// Where a cheating party learns the coin and where it may steer it.
struct CheatPoints {
  SpaceTimePoint leak;
  SpaceTimePoint inject;
};

struct CFSpec {
  Rational p = 0;               // bias probability
  SpaceTimePoint alice_out;     // P
  SpaceTimePoint bob_out;       // P'
  CheatPoints cheat_B;          // dishonest Bob steers Alice's output
  CheatPoints cheat_A;          // dishonest Alice steers Bob's output
};

// Checks leak ≺ inject ≺ (honest output of the other party) for both sides.
void validate(const CFSpec& spec);

// Coin flip with bias p. Honest: both outputs carry a uniform c. A cheating
// party sees c at `leak` and may send a bit b at `inject`; the honest party
// then receives b with probability p and c otherwise (c when nothing is
// sent).
ResourceTriple make_cf(const CFSpec& spec);

// Unfair coin flip: a cheating party sees c and may send abort ("abort") or
// no-abort ("noabort"); abort turns the honest output into "abort". The
// coin outputs use the alphabet {0, 1, abort}; `spec.p` is ignored.
ResourceTriple make_cf_unfair(const CFSpec& spec);

struct BCSpec {
  SpaceTimePoint commit;   // t1: Alice inputs the bit
  SpaceTimePoint notify;   // t1': Bob learns that a commitment exists
  SpaceTimePoint open;     // t2: Alice may open
  SpaceTimePoint reveal;   // t2': Bob learns the bit
};
void validate(const BCSpec& spec);

// Bit commitment over ports "bc.commit", "bc.comm", "bc.open", "bc.reveal".
// All three variants expose the same ports.
ResourceTriple make_bc(const BCSpec& spec);

struct CDSpec {
  SpaceTimePoint P;     // honest input
  SpaceTimePoint Pp;    // P': input of a dishonest sender
  SpaceTimePoint Qp;    // Q': output for a dishonest receiver
  SpaceTimePoint Q;     // honest output
  int alphabet = 2;
  std::string label = "cd";  // ports "<label>.in" and "<label>.out"

  std::string in_port() const { return label + ".in"; }
  std::string out_port() const { return label + ".out"; }
  std::string abort_port() const { return label + ".abort"; }
};
// P ≼ P' ≺ Q' ≼ Q.
void validate(const CDSpec& spec);

// Channel with delay. Honest: input at P, output at Q. Dishonest sender
// variant: input at P'. Dishonest receiver variant: output at Q'.
ResourceTriple make_cd(const CDSpec& spec);

struct CDAbortSpec {
  CDSpec cd;
  SpaceTimePoint R;  // where a dishonest sender may abort; P' ≺ R ≺ Q'
};
void validate(const CDAbortSpec& spec);

// As make_cd, but the dishonest-sender variant has an extra input
// "<label>.abort" at R; "abort" there suppresses delivery.
ResourceTriple make_cd_abort(const CDAbortSpec& spec);

CausalDiamond trusted_region(const CDSpec& spec);

enum class Side { A, B };

// δ_A: shifts the honest input from P to P'. δ_B: shifts the dishonest
// output from Q' to Q. Plugging them onto the matching dishonest variant
// yields the honest channel.
CausalSystem delta_converter(const CDSpec& spec, Side side);

// Zero-delay wire converter: one input and one output port per listed port,
// same name and points. Blocked (port, point) slots emit vacuum.
CausalSystem blocker(const std::vector<Port>& wires,
                     const std::function<bool(const std::string& port, const SpaceTimePoint&)>& blocked,
                     std::string name = "blocker");
CausalSystem identity_converter(const std::vector<Port>& wires);

// Emits a uniformly random letter of `alphabet` on `port` at `at`.
CausalSystem uniform_source(const std::string& port, const Alphabet& alphabet, const SpaceTimePoint& at);

// Accepts anything on the listed ports and emits nothing.
CausalSystem sink(const std::vector<Port>& ports, std::string name = "sink");

}  // namespace relcrypt
