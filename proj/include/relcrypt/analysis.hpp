#pragma once

#include "relcrypt/causal.hpp"

#include <optional>
#include <string>

namespace relcrypt {

inline constexpr const char* kGuessPort = "guess";

// A system that closes another system's interface and emits one bit on the
// output port "guess" (0 means "real"). The guess point must not precede any
// other slot of the distinguisher.
class Distinguisher {
 public:
  explicit Distinguisher(CausalSystem system);
  const CausalSystem& system() const noexcept { return sys_; }
  const std::string& name() const noexcept { return sys_.name(); }

 private:
  CausalSystem sys_;
};

// Builds a distinguisher that reads the given output ports of the system
// under test and computes the guess at `guess_point` from their values.
// `guess` receives values in the order of `reads` (vacuum when absent).
Distinguisher reading_distinguisher(std::string name, const std::vector<Port>& reads,
                                    const SpaceTimePoint& guess_point,
                                    std::function<int(std::span<const Symbol>)> guess);

// Pr[D(R) = 0]. Throws InterfaceError unless D closes R exactly.
Rational guess_zero_probability(const Distinguisher& d, const CausalSystem& r);

// d^D(R, S) = |Pr[D(R)=0] - Pr[D(S)=0]|.
Rational advantage_exact(const Distinguisher& d, const CausalSystem& r, const CausalSystem& s);

Rational statistical_distance(const OutcomeDistribution& a, const OutcomeDistribution& b);

enum class FamilyKind {
  // Fixed input transcript.
  non_adaptive,
  // Inputs at time t may depend on every output observed before t. Solved
  // exactly by backward induction over observation histories.
  adaptive,
  // Every deterministic strategy whose input at X reads only outputs at
  // points strictly preceding X, enumerated one by one.
  causal_enumerated,
};
std::string to_string(FamilyKind k);

struct DistinguisherFamily {
  FamilyKind kind = FamilyKind::adaptive;
};

struct SupResult {
  Rational advantage;
  std::uint64_t strategies = 0;  // strategies examined; 0 for the backward induction
};

// Exact supremum of d^D(R, S) over a finite family. Randomised strategies
// cannot do better than the best deterministic one, so they are omitted.
SupResult advantage_sup(const CausalSystem& r, const CausalSystem& s, const DistinguisherFamily& family);
Rational advantage_sup_enumerated(const CausalSystem& r, const CausalSystem& s,
                                  const DistinguisherFamily& family = {});

struct McEstimate {
  double p_real = 0;
  double p_ideal = 0;
  double estimate = 0;
  // Hoeffding half-width on the advantage: twice the per-branch width.
  double half_width = 0;
  std::uint64_t n = 0;
  double delta = 0;
};

double hoeffding_half_width(std::uint64_t n, double delta);

// Samples D(R) and D(S) n times each. Samples are drawn in fixed batches
// whose generators derive from rng_seed and the batch number, so the result
// does not depend on the thread count.
McEstimate advantage_mc(const Distinguisher& d, const CausalSystem& r, const CausalSystem& s,
                        std::uint64_t n, double delta, std::uint64_t rng_seed);

namespace kernels {
// Number of runs of a closed system whose "guess" output is 0.
std::uint64_t count_guess_zero_serial(const CausalSystem& closed, std::uint64_t n, std::uint64_t rng_seed);
std::uint64_t count_guess_zero_parallel(const CausalSystem& closed, std::uint64_t n, std::uint64_t rng_seed);
}  // namespace kernels

struct AdvantageReport {
  std::string distinguisher;
  std::string real;
  std::string ideal;
  std::optional<Rational> exact;
  std::optional<McEstimate> mc;
};

// Conditional output distributions of an open system, one per input
// transcript (inputs enumerated mixed-radix, first slot fastest, digit 0 is
// vacuum).
struct ConditionalTable {
  std::vector<SlotLabel> input_labels;
  std::vector<SlotLabel> output_labels;
  std::vector<std::uint32_t> radix;
  std::vector<std::map<std::vector<Symbol>, Rational>> rows;
};
ConditionalTable conditional_table(const CausalSystem& s);

}  // namespace relcrypt
