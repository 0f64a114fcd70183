#pragma once

#include "relcrypt/causal.hpp"

#include <memory>
#include <vector>

namespace relcrypt::detail {

struct PartRef {
  std::size_t part = 0;
  std::size_t slot = 0;
};

enum class SourceKind { external, wire, none };

struct Source {
  SourceKind kind = SourceKind::none;
  std::size_t a = 0;  // external: composite input index; wire: source part
  std::size_t b = 0;  // wire: source output slot
};

// A flattened network of primitive systems.
struct CompositePlan {
  std::vector<CausalSystem> parts;
  std::vector<std::size_t> seed_offset;
  std::vector<std::vector<Source>> sources;  // per part, per input slot
  std::vector<PartRef> output_map;           // composite output -> part output

  // Derived by finalize().
  std::vector<std::vector<std::vector<PartRef>>> fanout;  // per part output
  struct Step {
    std::size_t part;
    std::vector<std::size_t> outs;
  };
  std::vector<Step> schedule;
  std::size_t input_count = 0;

  // Builds fanout and the evaluation order. Outputs are evaluated in time
  // order and, within one time, after the same-time outputs they depend on.
  // Throws PreconditionError on a zero-delay cycle.
  void finalize(std::size_t composite_inputs);
  void evaluate(std::span<const Symbol> in, std::span<const std::uint32_t> seed,
                std::span<Symbol> out) const;
  std::vector<std::vector<std::size_t>> composite_deps() const;
};

struct PlanAccess {
  // Plan view of any system; primitives become a one-part plan.
  static std::shared_ptr<CompositePlan> plan_of(const CausalSystem& s);
  static CausalSystem make(std::string name, std::vector<Port> ports,
                           std::shared_ptr<CompositePlan> plan);
  static CausalSystem with_ports(const CausalSystem& s, std::vector<Port> ports, std::string name);
};

}  // namespace relcrypt::detail
