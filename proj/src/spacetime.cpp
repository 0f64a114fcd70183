#include "relcrypt/spacetime.hpp"

#include "relcrypt/error.hpp"

#include <algorithm>

namespace relcrypt {

SpaceTimePoint SpaceTimePoint::at(const Rational& t, const Rational& x0,
                                  const Rational& x1, const Rational& x2) {
  return SpaceTimePoint{t, {x0, x1, x2}};
}

bool operator<(const SpaceTimePoint& a, const SpaceTimePoint& b) {
  if (a.t != b.t) return a.t < b.t;
  for (std::size_t i = 0; i < 3; ++i)
    if (a.x[i] != b.x[i]) return a.x[i] < b.x[i];
  return false;
}

SpaceTimePoint shifted(const SpaceTimePoint& p, const Rational& dt) {
  SpaceTimePoint q = p;
  q.t += dt;
  return q;
}

Rational spatial_distance_sq(const SpaceTimePoint& p, const SpaceTimePoint& q) {
  Rational s = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    Rational d = q.x[i] - p.x[i];
    s += d * d;
  }
  return s;
}

bool precedes(const SpaceTimePoint& p, const SpaceTimePoint& q) {
  Rational dt = q.t - p.t;
  if (dt < 0) return false;
  return spatial_distance_sq(p, q) <= dt * dt;
}

bool strictly_precedes(const SpaceTimePoint& p, const SpaceTimePoint& q) {
  return !(p == q) && precedes(p, q);
}

bool spacelike(const SpaceTimePoint& p, const SpaceTimePoint& q) {
  return !precedes(p, q) && !precedes(q, p);
}

CausalDiamond::CausalDiamond(SpaceTimePoint lo, SpaceTimePoint hi)
    : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (!precedes(lo_, hi_))
    throw PreconditionError("diamond lower tip " + to_string(lo_) +
                            " does not precede upper tip " + to_string(hi_));
}

bool diamond_contains(const CausalDiamond& d, const SpaceTimePoint& p) {
  return precedes(d.lo(), p) && precedes(p, d.hi());
}

bool diamond_subset(const CausalDiamond& inner, const CausalDiamond& outer) {
  // Both tips belong to the inner diamond; conversely the light-cone
  // order is transitive, so containing both tips is enough.
  return precedes(outer.lo(), inner.lo()) && precedes(inner.hi(), outer.hi());
}

SpaceTimePoint common_future(std::span<const SpaceTimePoint> points) {
  if (points.empty()) throw PreconditionError("common_future of an empty set");
  const SpaceTimePoint& anchor = points.front();
  Rational t = anchor.t;
  Rational reach = 0;
  for (const auto& p : points) {
    t = std::max(t, p.t);
    // The L1 norm bounds the Euclidean one and stays rational.
    Rational l1 = 0;
    for (std::size_t i = 0; i < 3; ++i) l1 += abs(p.x[i] - anchor.x[i]);
    reach = std::max(reach, l1);
  }
  SpaceTimePoint r = anchor;
  r.t = t + reach;
  return r;
}

SpaceTimePoint normalize_speed(const SpaceTimePoint& p, const Rational& c) {
  if (c <= 0) throw PreconditionError("signal speed must be positive");
  SpaceTimePoint q = p;
  q.t = p.t * c;
  return q;
}

std::string to_string(const SpaceTimePoint& p) {
  std::string s = "(" + to_string(p.t);
  for (const auto& xi : p.x) s += ", " + to_string(xi);
  return s + ")";
}

}  // namespace relcrypt
