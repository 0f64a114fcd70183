#include "relcrypt/causal.hpp"

#include "relcrypt/error.hpp"

#include <omp.h>
#include <random>

namespace relcrypt {

namespace {

using Table = std::map<std::vector<Symbol>, Rational>;

std::uint64_t checked_seed_count(const CausalSystem& s) {
  const std::uint64_t n = s.seeds().size();
  if (n > enumeration_bound())
    throw BoundExceeded("system '" + s.name() + "' has " + std::to_string(n) +
                        " seeds; enumeration bound is " + std::to_string(enumeration_bound()));
  return n;
}

void check_inputs(const CausalSystem& s, std::span<const Symbol> inputs) {
  if (inputs.size() != s.input_count())
    throw InterfaceError("system '" + s.name() + "' expects " + std::to_string(s.input_count()) +
                         " input slots, got " + std::to_string(inputs.size()));
}

void accumulate_range(const CausalSystem& s, std::span<const Symbol> inputs, std::uint64_t lo,
                      std::uint64_t hi, Table& into) {
  std::vector<std::uint32_t> digits(s.seeds().digits());
  std::vector<Symbol> out(s.output_count());
  for (std::uint64_t k = lo; k < hi; ++k) {
    s.seeds().decode(k, digits);
    Rational w = s.seeds().weight(digits);
    if (w == 0) continue;
    s.react(inputs, digits, out);
    into[out] += w;
  }
}

}  // namespace

namespace kernels {

Table distribution_serial(const CausalSystem& s, std::span<const Symbol> inputs) {
  check_inputs(s, inputs);
  Table t;
  accumulate_range(s, inputs, 0, checked_seed_count(s), t);
  return t;
}

Table distribution_parallel(const CausalSystem& s, std::span<const Symbol> inputs) {
  check_inputs(s, inputs);
  const std::uint64_t n = checked_seed_count(s);
  constexpr std::uint64_t kChunk = 64;
  const std::int64_t chunks = static_cast<std::int64_t>((n + kChunk - 1) / kChunk);
  std::vector<Table> partial(static_cast<std::size_t>(chunks));
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t c = 0; c < chunks; ++c) {
    const std::uint64_t lo = static_cast<std::uint64_t>(c) * kChunk;
    accumulate_range(s, inputs, lo, std::min(n, lo + kChunk), partial[static_cast<std::size_t>(c)]);
  }
  Table t;
  for (auto& p : partial)
    for (auto& [k, v] : p) t[k] += v;
  return t;
}

}  // namespace kernels

OutcomeDistribution exact_distribution(const CausalSystem& s, std::span<const Symbol> inputs) {
  OutcomeDistribution d;
  for (std::size_t o = 0; o < s.output_count(); ++o) d.labels.push_back(s.output_label(o));
  d.probs = kernels::distribution_parallel(s, inputs);
  return d;
}

OutcomeDistribution exact_distribution(const CausalSystem& s) {
  std::vector<Symbol> vac(s.input_count(), Symbol::vacuum());
  return exact_distribution(s, vac);
}

SampledTranscript sample(const CausalSystem& s, std::span<const Symbol> inputs, std::uint64_t rng_seed) {
  check_inputs(s, inputs);
  std::mt19937_64 rng(rng_seed);
  std::vector<std::uint32_t> digits;
  for (const auto& f : s.seeds().factors()) digits.push_back(FactorSampler(f)(rng));
  SampledTranscript t;
  for (std::size_t o = 0; o < s.output_count(); ++o) t.labels.push_back(s.output_label(o));
  t.values.resize(s.output_count());
  s.react(inputs, digits, t.values);
  return t;
}

}  // namespace relcrypt
