#pragma once

#include "relcrypt/rational.hpp"

#include <array>
#include <span>
#include <string>

namespace relcrypt {

// A point of Minkowski space with c = 1. Coordinates are exact.
struct SpaceTimePoint {
  Rational t;
  std::array<Rational, 3> x{};

  static SpaceTimePoint at(const Rational& t, const Rational& x0 = 0,
                           const Rational& x1 = 0, const Rational& x2 = 0);

  friend bool operator==(const SpaceTimePoint& a, const SpaceTimePoint& b) {
    return a.t == b.t && a.x == b.x;
  }
  // Lexicographic on (t, x0, x1, x2); used for containers only.
  friend bool operator<(const SpaceTimePoint& a, const SpaceTimePoint& b);
};

// Same position, time moved by dt.
SpaceTimePoint shifted(const SpaceTimePoint& p, const Rational& dt);

// Squared spatial distance.
Rational spatial_distance_sq(const SpaceTimePoint& p, const SpaceTimePoint& q);

// p ≼ q: q lies in the closed future light cone of p. Reflexive.
bool precedes(const SpaceTimePoint& p, const SpaceTimePoint& q);
// p ≺ q: p ≼ q and p != q.
bool strictly_precedes(const SpaceTimePoint& p, const SpaceTimePoint& q);
bool spacelike(const SpaceTimePoint& p, const SpaceTimePoint& q);

// D(lo, hi) = { X : lo ≼ X ≼ hi }.
class CausalDiamond {
 public:
  // Throws PreconditionError unless lo ≼ hi.
  CausalDiamond(SpaceTimePoint lo, SpaceTimePoint hi);

  const SpaceTimePoint& lo() const noexcept { return lo_; }
  const SpaceTimePoint& hi() const noexcept { return hi_; }

  friend bool operator==(const CausalDiamond&, const CausalDiamond&) = default;

 private:
  SpaceTimePoint lo_;
  SpaceTimePoint hi_;
};

bool diamond_contains(const CausalDiamond& d, const SpaceTimePoint& p);
// inner ⊆ outer as point sets.
bool diamond_subset(const CausalDiamond& inner, const CausalDiamond& outer);

// Some point R with every input point ≼ R. Throws on an empty input.
SpaceTimePoint common_future(std::span<const SpaceTimePoint> points);

// Rescales a point given in units where the signal speed is c to c = 1.
SpaceTimePoint normalize_speed(const SpaceTimePoint& p, const Rational& c);

std::string to_string(const SpaceTimePoint& p);

}  // namespace relcrypt
