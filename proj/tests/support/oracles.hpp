#pragma once

#include "relcrypt/causal.hpp"
#include "relcrypt/cuts.hpp"

#include <map>
#include <random>
#include <string>
#include <vector>

namespace relcrypt::oracle {

using Rng = std::mt19937_64;

// Cuts as down-closures of antichains; independent of the mask scan.
std::vector<Cut> cuts_by_antichains(const FinitePoset& poset);

// Transitive closure of a random DAG on n labelled elements.
FinitePoset random_poset(Rng& rng, std::size_t n, double edge_probability = 0.3);

// Points on the grid t in [0, span], x in [0, span / 2] in 1+1 dimensions.
std::vector<SpaceTimePoint> random_points(Rng& rng, std::size_t n, int span = 6);

struct PortSpec {
  std::string name;
  Direction dir;
  int alphabet;
  std::vector<SpaceTimePoint> points;
};

struct RandomSystemOptions {
  std::string name = "rand";
  std::vector<PortSpec> ports;
  int seed_factors = 1;
  // Allow rules to read inputs outside the output's strict past.
  bool acausal = false;
};

// Rules read a random subset of the allowed inputs and look their output up
// in a random table over (dependency values, seed digits). Values may be
// vacuum.
CausalSystem random_system(Rng& rng, const RandomSystemOptions& opts);

// Two systems wired both ways on the ports "w" (s1 -> s2) and "v" (s2 -> s1),
// each with one external input and one external output.
struct RandomPair {
  CausalSystem s1;
  CausalSystem s2;
};
RandomPair random_pair(Rng& rng);

// Same interface as `like`, fresh random rules.
CausalSystem random_like(Rng& rng, const CausalSystem& like, const std::string& name);

// Output distribution of plug(s1, s2) for the composite input transcript
// `inputs`, computed by iterating both reactions to a fixed point from an
// all-vacuum start. `composite` only supplies the slot order.
std::map<std::vector<Symbol>, Rational> brute_force_plug(const CausalSystem& s1, const CausalSystem& s2,
                                                         const CausalSystem& composite,
                                                         const std::vector<Symbol>& inputs);

// Every input transcript of s in mixed radix (vacuum first).
std::vector<std::vector<Symbol>> all_inputs(const CausalSystem& s);

// Distinguisher given by a random deterministic table: each input slot
// reads the outputs strictly before it; the guess reads everything.
// Attaches to systems with the interface of `like`.
CausalSystem random_distinguisher(Rng& rng, const CausalSystem& like);

}  // namespace relcrypt::oracle
