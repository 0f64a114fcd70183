#pragma once

#include "relcrypt/resources.hpp"

#include <string>
#include <vector>

namespace relcrypt {

inline const std::string kMeetPort = "meet";

struct ProtocolPair {
  CausalSystem pi_A;
  CausalSystem pi_B;
};

// One security condition: the real system must be indistinguishable from
// the ideal one.
struct ConstructionCase {
  std::string label;  // "honest", "dishonest_A", "dishonest_B"
  CausalSystem real;
  CausalSystem ideal;
};

struct Construction {
  std::string name;
  ProtocolPair protocol;
  std::vector<ConstructionCase> cases;
  const ConstructionCase& find(const std::string& label) const;
};

// Geometry of the coin flip built from a channel with delay.
struct CoinFlipGeometry {
  CDSpec cd;                 // A = P, A' = P', B' = Q', B = Q
  SpaceTimePoint meet;       // M: Bob's bit reaches Alice
  SpaceTimePoint alice_out;  // P_F^A
  SpaceTimePoint bob_out;    // P_F^B
  Rational eps;              // smallest time step used for auxiliary points
};

// Outputs at M + eps and B + eps; eps defaults to 1/1000.
CoinFlipGeometry make_cf_geometry(const CDSpec& cd, const SpaceTimePoint& meet, const Rational& eps = Rational(1, 1000));
// A = 0, A' = 1, B' = 3, B = 4, M = 2, all at the spatial origin.
CoinFlipGeometry canonical_cf_geometry();

// Unbiased ideal coin flip the simulators talk to: leaks at M - eps,
// injection points at M.
CFSpec ideal_cf_spec(const CoinFlipGeometry& g);

// Alice sends a uniform a over the channel; Bob answers a uniform b at M;
// both output a xor b, substituting a uniform bit for a missing message.
// Throws PreconditionError unless M lies in the trusted region, when
// `require_trusted_meet` is set.
ProtocolPair pi_cd_to_cf(const CoinFlipGeometry& g, bool require_trusted_meet = true);
CausalSystem sigma_cf_A(const CoinFlipGeometry& g);
CausalSystem sigma_cf_B(const CoinFlipGeometry& g);

// Perfect coin flip from one channel with delay: honest, dishonest-Alice and
// dishonest-Bob conditions.
Construction construct_cf_from_cd(const CoinFlipGeometry& g, bool require_trusted_meet = true);

// The CF^{1/2} specification obtained from an unfair coin flip: outputs one
// eps later, leaks one eps earlier, injection at the unfair outputs.
CFSpec half_biased_spec(const CFSpec& unfair, const Rational& eps);

struct UnfairToBiased {
  Construction construction;
  CFSpec unfair;
  CFSpec biased;
  // Pr[Alice's output equals the leaked coin] when dishonest Bob aborts.
  Rational abort_agreement;
};

// Each party outputs the unfair coin's value, or a fresh uniform bit on
// abort. Realises CF^{1/2}.
UnfairToBiased construct_cf_half_from_unfair(const CFSpec& unfair, const Rational& eps = Rational(1, 1000));

// Geometry of the unfair coin flip built from a channel with abort.
struct AbortFlipGeometry {
  CDAbortSpec cd;
  SpaceTimePoint meet;
  SpaceTimePoint alice_out;
  SpaceTimePoint bob_out;
  Rational eps;
};
AbortFlipGeometry make_abort_geometry(const CDAbortSpec& cd, const SpaceTimePoint& meet,
                                      const Rational& eps = Rational(1, 1000));
// Canonical channel with abort point R = 5/2.
AbortFlipGeometry canonical_abort_geometry();
// Unfair ideal: leaks at M - eps, Bob injects at M, Alice injects at Q.
CFSpec unfair_cf_spec(const AbortFlipGeometry& g);

ProtocolPair pi_cd_abort_to_cf_unfair(const AbortFlipGeometry& g);
CausalSystem sigma_unfair_A(const AbortFlipGeometry& g);
CausalSystem sigma_unfair_B(const AbortFlipGeometry& g);
Construction construct_cf_unfair_from_cd_abort(const AbortFlipGeometry& g);

// Simulators of the unfair-to-biased step, exposed for composition.
CausalSystem sim_biased_A(const CFSpec& unfair, const Rational& eps);
CausalSystem sim_biased_B(const CFSpec& unfair, const Rational& eps);
ProtocolPair pi_unfair_to_biased(const CFSpec& unfair, const Rational& eps);

struct BlumGeometry {
  BCSpec bc;
  SpaceTimePoint announce;   // Bob's bit, between notify and open
  SpaceTimePoint alice_out;
  SpaceTimePoint bob_out;
};
BlumGeometry canonical_blum_geometry();

struct BlumReport {
  ProtocolPair protocol;
  CausalSystem honest;            // Π_A BC Π_B
  CausalSystem dishonest_A;       // BC Π_B: Alice's interface exposed
  CausalSystem dishonest_B;       // Π_A BC: Bob's interface exposed
  Rational honest_agreement;
  // Alice commits but never opens: Pr[Bob's output = a xor b].
  Rational refuse_agreement;
  // Largest Pr[Alice outputs 0] over Bob's strategies.
  Rational bob_max_bias;
};
BlumReport blum_cf_from_bc(const BlumGeometry& g);

}  // namespace relcrypt
