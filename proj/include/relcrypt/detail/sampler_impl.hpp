#pragma once

#include <algorithm>
#include <random>

namespace relcrypt {

template <class Rng>
std::uint32_t FactorSampler::operator()(Rng& rng) const {
  if (!fallback_.empty()) {
    std::discrete_distribution<std::uint32_t> d(fallback_.begin(), fallback_.end());
    return d(rng);
  }
  std::uniform_int_distribution<std::uint64_t> u(0, denominator_ - 1);
  const std::uint64_t r = u(rng);
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), r);
  return static_cast<std::uint32_t>(it - cumulative_.begin());
}

}  // namespace relcrypt
