#pragma once

#include "relcrypt/rational.hpp"
#include "relcrypt/spacetime.hpp"

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace relcrypt {

// A value carried by one slot. Non-negative values are alphabet letters;
// the named negative values are protocol control symbols.
class Symbol {
 public:
  constexpr Symbol() = default;

  static constexpr Symbol vacuum() { return Symbol(-1); }
  static constexpr Symbol abort() { return Symbol(-2); }
  static constexpr Symbol no_abort() { return Symbol(-3); }
  static constexpr Symbol comm() { return Symbol(-4); }
  static constexpr Symbol open() { return Symbol(-5); }
  static constexpr Symbol letter(int v) { return Symbol(v); }

  constexpr std::int32_t raw() const { return v_; }
  constexpr bool is_vacuum() const { return v_ == -1; }
  constexpr bool is_letter() const { return v_ >= 0; }
  constexpr int value() const { return v_; }

  friend constexpr auto operator<=>(const Symbol&, const Symbol&) = default;

 private:
  constexpr explicit Symbol(std::int32_t v) : v_(v) {}
  std::int32_t v_ = -1;
};

std::string to_string(Symbol s);
// Inverse of to_string: "vac", "abort", "noabort", "comm", "open" or a letter.
Symbol parse_symbol(std::string_view text);

using Alphabet = std::vector<Symbol>;
Alphabet letters(int k);
inline Alphabet bits() { return letters(2); }

enum class Direction { in, out };
std::string to_string(Direction d);

// A named port carries one slot per point. A system may have an input and an
// output port of the same name; (name, direction) is unique.
struct Port {
  std::string name;
  Direction dir = Direction::in;
  Alphabet alphabet;
  std::vector<SpaceTimePoint> points;
};

struct SlotLabel {
  std::string port;
  Direction dir = Direction::in;
  SpaceTimePoint point;

  friend bool operator==(const SlotLabel&, const SlotLabel&) = default;
  friend bool operator<(const SlotLabel& a, const SlotLabel& b);
};
std::string to_string(const SlotLabel& s);

// One independent source of randomness with exact weights.
struct SeedFactor {
  std::string label;
  std::vector<Rational> weights;
};

SeedFactor uniform_factor(std::string label, std::size_t n);
SeedFactor bernoulli_factor(std::string label, const Rational& p_first);

// Product of independent factors; a seed is one digit per factor.
class SeedSpace {
 public:
  SeedSpace() = default;
  explicit SeedSpace(std::vector<SeedFactor> factors);

  const std::vector<SeedFactor>& factors() const noexcept { return factors_; }
  std::size_t digits() const noexcept { return factors_.size(); }
  // Number of seeds; throws BoundExceeded past 2^62.
  std::uint64_t size() const;
  void decode(std::uint64_t index, std::span<std::uint32_t> out) const;
  Rational weight(std::span<const std::uint32_t> digits) const;
  SeedSpace concat(const SeedSpace& other) const;

 private:
  std::vector<SeedFactor> factors_;
};

using ReactFn = std::function<void(std::span<const Symbol> in, std::span<const std::uint32_t> seed,
                                   std::span<Symbol> out)>;

namespace detail {
struct CompositePlan;
struct PlanAccess;
}

// A finite classical causal system: fixed ports, a weighted seed space and a
// total deterministic reaction from (input transcript, seed) to the output
// transcript. Slots are ordered port-major, inputs and outputs separately.
class CausalSystem {
 public:
  struct Spec {
    std::string name;
    std::vector<Port> ports;
    SeedSpace seeds;
    // deps[o] lists input slot indices output slot o may read.
    std::vector<std::vector<std::size_t>> deps;
    ReactFn react;
    // Zero-delay wire converters (identity, blockers): deps may sit at the
    // same point as the output they feed.
    bool passthrough = false;
  };

  // Checks structure only: unique (name, direction), nonempty alphabets,
  // distinct points per port, dependency indices in range. Whether the
  // reaction respects causality is validate_causality's job.
  explicit CausalSystem(Spec spec);

  const std::string& name() const noexcept { return name_; }
  const std::vector<Port>& ports() const noexcept { return ports_; }
  const SeedSpace& seeds() const noexcept { return seeds_; }
  bool passthrough() const noexcept { return passthrough_; }

  std::size_t input_count() const noexcept { return in_slots_.size(); }
  std::size_t output_count() const noexcept { return out_slots_.size(); }
  SlotLabel input_label(std::size_t i) const;
  SlotLabel output_label(std::size_t o) const;
  const SpaceTimePoint& input_point(std::size_t i) const;
  const SpaceTimePoint& output_point(std::size_t o) const;
  const Alphabet& input_alphabet(std::size_t i) const;
  const Alphabet& output_alphabet(std::size_t o) const;
  const std::vector<std::size_t>& deps(std::size_t o) const { return deps_[o]; }

  const Port* find_port(const std::string& name, Direction dir) const;
  std::optional<std::size_t> input_index(const std::string& port, const SpaceTimePoint& p) const;
  std::optional<std::size_t> output_index(const std::string& port, const SpaceTimePoint& p) const;
  // First slot of a port; convenient for single-point ports.
  std::size_t input_index(const std::string& port) const;
  std::size_t output_index(const std::string& port) const;

  void react(std::span<const Symbol> in, std::span<const std::uint32_t> seed,
             std::span<Symbol> out) const;

  bool is_composite() const noexcept { return plan_ != nullptr; }
  const std::shared_ptr<const detail::CompositePlan>& plan() const noexcept { return plan_; }

  // Same system with ports renamed; keys are (old name, direction).
  CausalSystem renamed(const std::map<std::pair<std::string, Direction>, std::string>& names,
                       std::string new_name = {}) const;
  CausalSystem with_name(std::string new_name) const;

 private:
  friend struct detail::PlanAccess;
  CausalSystem() = default;
  struct SlotRef {
    std::size_t port;
    std::size_t point;
  };
  void index_slots();

  std::string name_;
  std::vector<Port> ports_;
  SeedSpace seeds_;
  std::vector<std::vector<std::size_t>> deps_;
  std::shared_ptr<const ReactFn> react_;
  bool passthrough_ = false;
  std::shared_ptr<const detail::CompositePlan> plan_;
  std::vector<SlotRef> in_slots_;
  std::vector<SlotRef> out_slots_;
};

// Fluent construction of primitive systems from per-output rules. A rule
// sees only the values of the slots it declares, so declared dependencies
// are respected by construction.
class SystemBuilder {
 public:
  struct PortRef {
    std::size_t index;
  };
  struct Slot {
    std::size_t port;
    std::size_t point = 0;
  };
  using Rule = std::function<Symbol(std::span<const Symbol> deps, std::span<const std::uint32_t> seed)>;

  explicit SystemBuilder(std::string name);

  PortRef input(std::string name, Alphabet alphabet, std::vector<SpaceTimePoint> points);
  PortRef output(std::string name, Alphabet alphabet, std::vector<SpaceTimePoint> points);
  // Returns the digit index of the new factor.
  std::size_t seed(SeedFactor factor);
  void rule(Slot out, std::vector<Slot> deps, Rule rule);
  void passthrough(bool on = true) { passthrough_ = on; }

  CausalSystem build() const;

 private:
  struct RuleEntry {
    Slot out;
    std::vector<Slot> deps;
    Rule fn;
  };
  std::string name_;
  std::vector<Port> ports_;
  std::vector<SeedFactor> seeds_;
  std::vector<RuleEntry> rules_;
  bool passthrough_ = false;
};

inline SystemBuilder::Slot at(SystemBuilder::PortRef p, std::size_t point = 0) {
  return SystemBuilder::Slot{p.index, point};
}

// Juxtaposition. Throws InterfaceError if (name, direction) pairs clash.
CausalSystem compose_parallel(const CausalSystem& s1, const CausalSystem& s2);

// Wires output ports to input ports of the same system. Alphabets of the
// source must be contained in the destination's; every source point must be
// a point of the destination port. Destination slots with no source stay
// vacuum. Both ports leave the interface. Throws PreconditionError on a
// zero-delay cycle.
CausalSystem connect(const CausalSystem& s,
                     const std::vector<std::pair<std::string, std::string>>& out_to_in);

// Parallel composition followed by wiring every output port of one side to
// the same-named input port of the other.
CausalSystem plug(const CausalSystem& s1, const CausalSystem& s2);
CausalSystem plug(std::initializer_list<CausalSystem> chain);

// Same port names, directions and points, and equal input alphabets.
bool same_interface(const CausalSystem& a, const CausalSystem& b, std::string* why = nullptr);

// Outputs-only distribution of a system for a fixed input transcript.
struct OutcomeDistribution {
  std::vector<SlotLabel> labels;
  std::map<std::vector<Symbol>, Rational> probs;

  Rational total() const;
  Rational probability(const std::function<bool(const std::vector<Symbol>&)>& event) const;
  // Column of a labelled slot; throws InterfaceError if absent.
  std::size_t column(const std::string& port, const SpaceTimePoint& p) const;
  std::size_t column(const std::string& port) const;
  OutcomeDistribution marginal(const std::vector<std::size_t>& columns) const;
};

// Input transcript builder keyed by port name.
class InputAssignment {
 public:
  explicit InputAssignment(const CausalSystem& s);
  InputAssignment& set(const std::string& port, const SpaceTimePoint& p, Symbol v);
  InputAssignment& set(const std::string& port, Symbol v);
  const std::vector<Symbol>& values() const noexcept { return values_; }

 private:
  const CausalSystem* sys_;
  std::vector<Symbol> values_;
};

// Maximum number of enumerated items (input transcripts, seeds, strategies).
// Defaults to 2^20; the RELCRYPT_MAX_ENUM environment variable overrides it.
std::uint64_t enumeration_bound();

OutcomeDistribution exact_distribution(const CausalSystem& s, std::span<const Symbol> inputs);
OutcomeDistribution exact_distribution(const CausalSystem& s);

struct SampledTranscript {
  std::vector<SlotLabel> labels;
  std::vector<Symbol> values;
};
SampledTranscript sample(const CausalSystem& s, std::span<const Symbol> inputs, std::uint64_t rng_seed);

enum class ViolationKind {
  acausal,            // output changes with an input outside its strict past
  undeclared,         // output changes with an input it did not declare
  nonstrict_declared, // a declared dependency does not strictly precede
  alphabet,           // emitted value outside alphabet ∪ {vacuum}
};
std::string to_string(ViolationKind k);

struct CausalityViolation {
  ViolationKind kind = ViolationKind::acausal;
  SlotLabel output;
  std::string detail;
  std::vector<std::uint32_t> seed;
  std::vector<Symbol> input_a;
  std::vector<Symbol> input_b;
  Symbol value_a;
  Symbol value_b;
};

struct CausalityReport {
  bool pass = true;
  std::uint64_t transcripts_checked = 0;
  std::vector<CausalityViolation> violations;
};

// Enumerates all input transcripts and seeds. For each output slot, two
// transcripts that agree on the slot's strict past must give the same value.
CausalityReport validate_causality(const CausalSystem& s);

namespace kernels {
// Serial reference implementations and their OpenMP counterparts.
std::map<std::vector<Symbol>, Rational> distribution_serial(const CausalSystem& s,
                                                            std::span<const Symbol> inputs);
std::map<std::vector<Symbol>, Rational> distribution_parallel(const CausalSystem& s,
                                                              std::span<const Symbol> inputs);
CausalityReport causality_serial(const CausalSystem& s);
CausalityReport causality_parallel(const CausalSystem& s);
}  // namespace kernels

// Exact sampler for one factor: a uniform integer below the common
// denominator of its weights.
class FactorSampler {
 public:
  explicit FactorSampler(const SeedFactor& f);
  template <class Rng>
  std::uint32_t operator()(Rng& rng) const;

 private:
  std::uint64_t denominator_ = 1;
  std::vector<std::uint64_t> cumulative_;
  std::vector<double> fallback_;  // used when the denominator exceeds 2^62
};

}  // namespace relcrypt

#include "relcrypt/detail/sampler_impl.hpp"
