#pragma once

#include "relcrypt/analysis.hpp"
#include "relcrypt/protocols.hpp"

#include <string>
#include <vector>

namespace relcrypt {

// Two biased coin flips, Alice–Bob and Charlie–Danielle, with one adversary
// playing Bob and Charlie. It learns c at P1 and c' at P3 and steers Alice
// at P2 ≺ P^A and Danielle at P4 ≺ P^B.
struct MitmGeometry {
  SpaceTimePoint P1, P2, P3, P4, PA, PB;
};
// P1 = (0,0), P3 = (0,1), P2 = (2,0), P4 = (7/2,1), PA = (3,0), PB = (9/2,1).
// Here P2 ≺ P4, so the adversary's second bit may depend on its first.
MitmGeometry canonical_mitm_geometry();
CFSpec mitm_cf_spec(const Rational& p, const MitmGeometry& g);

// Variables the adversary's bits may depend on: the two leaks and, for the
// second bit, the first bit.
enum class MitmVar { C, Cp, B };
std::string to_string(MitmVar v);

// Deterministic rule per injected bit: a truth table over the parents,
// first parent least significant.
struct MitmStrategy {
  std::vector<MitmVar> parents_b;
  std::vector<int> table_b;
  std::vector<MitmVar> parents_bp;
  std::vector<int> table_bp;

  // b = b' = c.
  static MitmStrategy copy_c();
  std::string describe() const;
};

CausalSystem mitm_sigma(const MitmStrategy& s, const MitmGeometry& g = canonical_mitm_geometry());
// CF^p_B . σ . CF^p_A, exposing Alice's and Danielle's outputs on "A.c" and "B.c".
CausalSystem mitm_composite(const Rational& p, const MitmStrategy& s, const MitmGeometry& g = canonical_mitm_geometry());
Rational mitm_agreement(const Rational& p, const MitmStrategy& s, const MitmGeometry& g = canonical_mitm_geometry());
// Agreement of the copy-c strategy.
Rational mitm_agreement_probability(const Rational& p);

// Every deterministic strategy whose dependencies follow the edges
// C→B, C'→B, C→B', C'→B' (and B→B' when `b_feeds_bp`).
std::vector<MitmStrategy> enumerate_mitm_strategies(bool b_feeds_bp);

struct MitmOptimum {
  Rational best;
  MitmStrategy argmax;
  std::uint64_t strategies = 0;
};
MitmOptimum mitm_optimum(const Rational& p, bool b_feeds_bp, const MitmGeometry& g = canonical_mitm_geometry());

enum class EqualityRule {
  // Guess "real" exactly when the two outputs differ.
  differ_means_real,
  // Guess "real" when they differ, a fair coin otherwise.
  coin_on_agreement,
};

// Reads "A.c" at `a` and "B.c" at `b` (alphabet {0, 1, abort}).
Distinguisher equality_distinguisher(const SpaceTimePoint& a, const SpaceTimePoint& b,
                                     EqualityRule rule = EqualityRule::differ_means_real);

// A candidate coin-flip protocol from direct communication, with simulators
// for both cheating parties against the biased coin flip `cf`.
struct CfCandidate {
  std::string name;
  CFSpec cf;
  ProtocolPair protocol;
  CausalSystem sigma_A;  // Π_B ≈ σ_A CF_A
  CausalSystem sigma_B;  // Π_A ≈ CF_B σ_B
};

// Hybrid chain T0 = CF_B σ_B σ_A CF_A, T1 = Π_A σ_A CF_A, T2 = Π_A Π_B,
// T3 = CF, plus the reduced pairs used for the contractivity cross-check.
struct TriangleChain {
  CfCandidate candidate;
  CausalSystem t0, t1, t2, t3;
  CausalSystem sigmaA_cfA;  // σ_A CF_A
  CausalSystem cfB_sigmaB;  // CF_B σ_B
};
TriangleChain impossibility_chain(const CfCandidate& c);

struct TriangleReport {
  Rational composite;     // d(T0, T3)
  Rational honest;        // d(T2, T3)
  Rational dishonest_A;   // d(T1, T2)
  Rational dishonest_B;   // d(T0, T1)
  // d^{D Π_A}(σ_A CF_A, Π_B) and d^{D σ_A CF_A}(CF_B σ_B, Π_A).
  Rational dishonest_A_reduced;
  Rational dishonest_B_reduced;
  Rational threshold;     // composite / 3
  std::string worst_case;
  bool certifies = false; // max case ≥ threshold
  bool contractivity_consistent = false;
};
TriangleReport triangle_decompose(const Distinguisher& d, const TriangleChain& chain);

// Bob's answer is never sent; each party outputs its own bit xor a fresh
// uniform bit. Fails the honest condition.
CfCandidate candidate_blocked(const Rational& p);
// Alice sends a directly at time 0; Bob answers at M. Fails the
// dishonest-Bob condition.
CfCandidate candidate_direct(const Rational& p);

// A candidate for the channel with abort built from direct communication,
// in the interface of CDAbortSpec: Alice's side reads "<cd>.in" at P,
// Bob's side writes "<cd>.out" at Q.
struct CdAbortCandidate {
  std::string name;
  ProtocolPair protocol;
  CausalSystem sigma_A;  // Π_B ≈ σ_A CD_A
  CausalSystem sigma_B;  // Π_A ≈ CD_B σ_B
};
// Sends the message directly just after P, with an optional abort message
// shortly before R.
CdAbortCandidate cd_abort_candidate_direct(const AbortFlipGeometry& g);
// Never delivers anything.
CdAbortCandidate cd_abort_candidate_silent(const AbortFlipGeometry& g);
std::vector<CdAbortCandidate> bundled_cd_abort_candidates(const AbortFlipGeometry& g);

// Stacks candidate, abort-to-unfair and unfair-to-biased layers into a
// CF^{1/2} candidate with composed simulators.
CfCandidate stack_to_half_coin(const CdAbortCandidate& c, const AbortFlipGeometry& g);

// A protocol claiming to build channel `claimed` from channels `channels`
// and direct communication on `direct` ports. Π_A reads claimed.in at
// claimed.P and writes each channel input; Π_B reads each channel output and
// writes claimed.out at claimed.Q.
struct ChannelProtocol {
  std::string name;
  CDSpec claimed;
  std::vector<CDSpec> channels;
  std::vector<Port> direct_to_B;  // Alice → Bob messages, as Π_B's inputs
  std::vector<Port> direct_to_A;  // Bob → Alice messages, as Π_A's inputs
  CausalSystem pi_A;
  CausalSystem pi_B;
  bool abort_channels = false;
};

// Two channels chained by a relay: Π_A forwards its input on the first
// channel, Π_B relays what arrives back to Alice over direct communication,
// Alice forwards it on the second channel and Π_B outputs the result.
struct ChainGeometry {
  CDSpec claimed;
  CDSpec first;
  CDSpec second;
  SpaceTimePoint relay;
};
// CD1 = (1/2, 1, 2, 3), CD2 = (4, 5, 6, 7), relay at 7/2, claimed (0, 1, 6, 15/2).
ChainGeometry canonical_chain_geometry(int alphabet = 2);
ChannelProtocol naive_chain_protocol(const ChainGeometry& g);
ChannelProtocol naive_chain_protocol(int alphabet = 2);

struct DelayExtensionReport {
  bool applicable = false;
  std::string reason;
  Rational advantage;  // d(CD'_B σ_B δ_B ⊥_B Π_B, CD') for the fixed-message distinguisher
  Rational bound;      // advantage / 4
  std::vector<std::string> blocked;
};

DelayExtensionReport delay_extension_attack(const ChannelProtocol& protocol);

}  // namespace relcrypt
