#pragma once

#include "relcrypt/spacetime.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace relcrypt {

// Largest poset the cut machinery accepts; cuts are stored as bit sets.
inline constexpr std::size_t kMaxPosetSize = 64;
// Largest poset for which all_cuts enumerates.
inline constexpr std::size_t kMaxCutEnumeration = 20;

// A subset of a finite poset, one bit per element.
struct Cut {
  std::uint64_t bits = 0;

  bool contains(std::size_t i) const { return (bits >> i) & 1u; }
  bool subset_of(const Cut& other) const { return (bits & ~other.bits) == 0; }
  bool empty() const { return bits == 0; }
  std::size_t size() const;

  friend auto operator<=>(const Cut&, const Cut&) = default;
};

class FinitePoset {
 public:
  // leq[i][j] means element i ≼ element j. Throws PreconditionError if the
  // relation is not reflexive, antisymmetric and transitive.
  FinitePoset(std::vector<std::string> labels, std::vector<std::vector<bool>> leq);

  // The order induced on labelled spacetime points by `precedes`.
  static FinitePoset from_points(std::vector<std::string> labels,
                                 const std::vector<SpaceTimePoint>& points);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  bool leq(std::size_t i, std::size_t j) const { return leq_[i][j]; }
  bool lt(std::size_t i, std::size_t j) const { return i != j && leq_[i][j]; }

  // {j : j ≼ i}
  Cut down_set(std::size_t i) const { return Cut{down_[i]}; }
  Cut all() const;
  Cut maximal_elements(const Cut& c) const;
  // C ⊆ T^{≼t} for some element t.
  bool bounded(const Cut& c) const;
  std::optional<std::size_t> index_of(const std::string& label) const;
  std::string describe(const Cut& c) const;

 private:
  std::vector<std::string> labels_;
  std::vector<std::vector<bool>> leq_;
  std::vector<std::uint64_t> down_;
};

// A cut is a down-set: closed under going to the past.
bool is_cut(const FinitePoset& poset, const Cut& c);

// All cuts in increasing numeric order of their bit sets.
std::vector<Cut> all_cuts(const FinitePoset& poset);

namespace kernels {
std::vector<Cut> all_cuts_serial(const FinitePoset& poset);
std::vector<Cut> all_cuts_parallel(const FinitePoset& poset);
}  // namespace kernels

// A causality function given extensionally on the cuts of a poset.
using CausalityFunction = std::function<Cut(const Cut&)>;

struct ConditionResult {
  bool pass = true;
  std::string message;
  std::vector<Cut> counterexample;
};

struct CausalityFunctionReport {
  bool pass = true;
  // Index k holds the result of condition k+1.
  std::array<ConditionResult, 4> conditions;
};

// Checks the four causality-function conditions over all cuts:
//   1. χ(C) is a cut and χ(C) ⊆ C,
//   2. C ⊆ D implies χ(C) ⊆ χ(D),
//   3. χ(C) ≠ C for nonempty bounded C,
//   4. χ^n(C) is eventually empty for bounded C.
CausalityFunctionReport validate_causality_function(const FinitePoset& poset,
                                                    const CausalityFunction& chi);

// Drops the maximal elements; the strict causal past within the poset.
CausalityFunction strict_past_function(const FinitePoset& poset);

// A classical state on a set of positions: vacuum, or a single message.
struct ClassicalState {
  std::optional<std::pair<int, std::size_t>> message;  // (symbol, position)

  friend bool operator==(const ClassicalState&, const ClassicalState&) = default;
};

std::string to_string(const ClassicalState& s, const FinitePoset& poset);

// Φ^C : states on χ(C) → states on C.
using CutMap = std::function<ClassicalState(const Cut& c, const ClassicalState& input)>;

struct MutualConsistencyReport {
  bool pass = true;
  std::size_t pairs_checked = 0;
  std::string message;
  std::optional<Cut> c;
  std::optional<Cut> d;
  std::optional<ClassicalState> input;
  std::optional<ClassicalState> lhs;
  std::optional<ClassicalState> rhs;
};

// Keeps only messages whose position lies in `keep`.
ClassicalState restrict_state(const ClassicalState& s, const Cut& keep);

// The message-at-A, delivered-at-B channel: emits the message at B iff
// B ∈ C and the input holds it at A ∈ χ(C).
CutMap canonical_cd_map(std::size_t a, std::size_t b);

// Checks tr_{D\C} ∘ Φ^D = Φ^C ∘ tr_{T\χ(C)} for every pair of bounded cuts
// C ⊆ D and every classical input state over the given alphabet size. χ is
// the strict causal past. Throws PreconditionError unless a ≺ b.
MutualConsistencyReport verify_cd_mutual_consistency(const FinitePoset& poset, std::size_t a,
                                                     std::size_t b, int alphabet,
                                                     const CutMap& map);

}  // namespace relcrypt
