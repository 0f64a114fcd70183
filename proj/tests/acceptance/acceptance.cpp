// One PASS/FAIL line per acceptance criterion. Exit status is nonzero if any
// criterion fails.

#include "relcrypt/adversary.hpp"
#include "relcrypt/cuts.hpp"
#include "relcrypt/protocols.hpp"
#include "relcrypt/qsmall.hpp"

#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace relcrypt;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream why;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) why << what;
    ok = ok && cond;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void criterion(const std::string& id, const std::string& title, double limit_s,
               const std::function<void(Check&)>& body) {
  Check c;
  const auto t0 = Clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.ok = false;
    c.why << "exception: " << e.what();
  }
  const double dt = seconds_since(t0);
  if (limit_s > 0 && dt >= limit_s) c.require(false, "runtime over limit");
  if (!c.ok) ++failures;
  char limit[32] = "no limit";
  if (limit_s > 0) std::snprintf(limit, sizeof limit, "limit %.0f s", limit_s);
  std::printf("%s %s: %s (%.3f s, %s)%s%s\n", c.ok ? "PASS" : "FAIL", id.c_str(), title.c_str(), dt, limit,
              c.ok ? "" : " -- ", c.ok ? "" : c.why.str().c_str());
  std::fflush(stdout);
}

const std::vector<Rational> kGrid{rat(0), rat(1, 4), rat(1, 2), rat(3, 4), rat(1)};

// Input "x" at two points, output "y" at two points.
CausalSystem random_box(oracle::Rng& rng, const std::string& name) {
  std::vector<SpaceTimePoint> pts = oracle::random_points(rng, 4, 5);
  std::sort(pts.begin(), pts.end());
  oracle::RandomSystemOptions o{
      name, {{"x", Direction::in, 2, {pts[0], pts[2]}}, {"y", Direction::out, 2, {pts[1], pts[3]}}}, 1, false};
  return oracle::random_system(rng, o);
}

CausalSystem random_converter(oracle::Rng& rng, const CausalSystem& r) {
  const Port* y = r.find_port("y", Direction::out);
  std::vector<SpaceTimePoint> later;
  for (const auto& p : y->points) later.push_back(shifted(p, 1));
  oracle::RandomSystemOptions o{"alpha", {{"y", Direction::in, 2, y->points}, {"z", Direction::out, 3, later}}, 1,
                                 false};
  return oracle::random_system(rng, o);
}

void c1(Check& c) {
  const Construction con = construct_cf_from_cd(canonical_cf_geometry());
  for (const auto& k : con.cases) {
    SupResult r = advantage_sup(k.real, k.ideal, DistinguisherFamily{FamilyKind::causal_enumerated});
    c.require(r.advantage == 0, k.label + " advantage " + to_string(r.advantage));
    c.require(r.strategies > 0, k.label + " enumerated no strategies");
  }
}

void c2(Check& c) {
  const MitmGeometry g = canonical_mitm_geometry();
  for (const auto& p : kGrid) {
    const auto t0 = Clock::now();
    const std::string at = " at p=" + to_string(p);
    c.require(mitm_agreement_probability(p) == (1 + p) / 2, "agreement" + at);
    const CausalSystem attack = mitm_composite(p, MitmStrategy::copy_c(), g);
    const CausalSystem ideal = make_cf(mitm_cf_spec(p, g)).honest;
    const Rational adv = advantage_exact(equality_distinguisher(g.PA, g.PB), attack, ideal);
    c.require(adv == (1 - p) / 2, "equality advantage " + to_string(adv) + at);
    for (const auto& cand : {candidate_direct(p), candidate_blocked(p)}) {
      TriangleReport r = triangle_decompose(equality_distinguisher(cand.cf.alice_out, cand.cf.bob_out),
                                            impossibility_chain(cand));
      const Rational worst = std::max({r.honest, r.dishonest_A, r.dishonest_B});
      c.require(r.certifies && worst >= (1 - p) / 6, cand.name + " not certified" + at);
    }
    c.require(seconds_since(t0) < 5, "over 5 s" + at);
  }
}

void c3(Check& c) {
  const AbortFlipGeometry g = canonical_abort_geometry();
  UnfairToBiased u = construct_cf_half_from_unfair(unfair_cf_spec(g), g.eps);
  for (const auto& k : u.construction.cases) {
    const Rational a = advantage_sup(k.real, k.ideal, DistinguisherFamily{FamilyKind::causal_enumerated}).advantage;
    c.require(a == 0, k.label + " advantage " + to_string(a));
  }
  c.require(u.abort_agreement == rat(1, 2), "abort agreement " + to_string(u.abort_agreement));
}

void c4(Check& c) {
  const AbortFlipGeometry g = canonical_abort_geometry();
  const Construction con = construct_cf_unfair_from_cd_abort(g);
  for (const auto& k : con.cases) {
    const Rational a = advantage_sup(k.real, k.ideal, DistinguisherFamily{FamilyKind::causal_enumerated}).advantage;
    c.require(a == 0, k.label + " advantage " + to_string(a));
  }
  for (const auto& cand : bundled_cd_abort_candidates(g)) {
    CfCandidate stacked = stack_to_half_coin(cand, g);
    TriangleReport r = triangle_decompose(equality_distinguisher(stacked.cf.alice_out, stacked.cf.bob_out),
                                          impossibility_chain(stacked));
    const Rational worst = std::max({r.honest, r.dishonest_A, r.dishonest_B});
    c.require(r.certifies && worst >= rat(1, 12), cand.name + " worst case " + to_string(worst));
  }
}

void c5(Check& c) {
  for (int k = 2; k <= 4; ++k) {
    DelayExtensionReport r = delay_extension_attack(naive_chain_protocol(k));
    c.require(r.applicable, "not applicable for k=" + std::to_string(k));
    c.require(r.advantage == 1 - rat(1, k), "advantage " + to_string(r.advantage) + " for k=" + std::to_string(k));
    if (k == 2) c.require(r.advantage >= rat(1, 2), "binary advantage below 1/2");
  }
  const ChainGeometry g = canonical_chain_geometry();
  const CausalDiamond claimed = trusted_region(g.claimed);
  c.require(!diamond_subset(claimed, trusted_region(g.first)) && !diamond_subset(claimed, trusted_region(g.second)),
            "claimed region unexpectedly inside a channel region");
  ChainGeometry inside = g;
  inside.claimed = CDSpec{SpaceTimePoint::at(0), SpaceTimePoint::at(rat(3, 2)), SpaceTimePoint::at(rat(5, 2)),
                          SpaceTimePoint::at(3), 2, g.claimed.label};
  inside.first = CDSpec{SpaceTimePoint::at(0), SpaceTimePoint::at(1), SpaceTimePoint::at(3), SpaceTimePoint::at(4), 2,
                        g.first.label};
  inside.second = CDSpec{SpaceTimePoint::at(5), SpaceTimePoint::at(6), SpaceTimePoint::at(7), SpaceTimePoint::at(8), 2,
                         g.second.label};
  inside.relay = SpaceTimePoint::at(rat(9, 2));
  c.require(diamond_subset(trusted_region(inside.claimed), trusted_region(inside.first)), "containment not detected");
  c.require(!delay_extension_attack(naive_chain_protocol(inside)).applicable, "attack applied to a contained region");
}

void c6(Check& c) {
  constexpr double tol = 1e-9;
  c.require(std::abs(q::epr_test_success(q::identity_channel(2)) - 1) <= tol, "identity");
  for (std::uint64_t s = 0; s < 10; ++s) {
    const double v = q::epr_test_success(q::replacement_channel(q::random_state(2, s)));
    c.require(std::abs(v - 0.25) <= tol, "replacement state " + std::to_string(s));
    const q::EprDistinguisherResult r = q::epr_distinguisher(2, q::random_state(2, s));
    c.require(std::abs(r.advantage - 0.75) <= tol, "advantage for state " + std::to_string(s));
  }
}

void c7(Check& c) {
  oracle::Rng rng(77);
  std::uniform_int_distribution<std::size_t> size(1, 8);
  for (int i = 0; i < 30; ++i) {
    const FinitePoset p = oracle::random_poset(rng, size(rng));
    c.require(all_cuts(p) == oracle::cuts_by_antichains(p), "cuts differ on poset " + std::to_string(i));
  }
  const FinitePoset cd = FinitePoset::from_points(
      {"P", "P'", "Q'", "Q"},
      {SpaceTimePoint::at(0), SpaceTimePoint::at(1), SpaceTimePoint::at(3), SpaceTimePoint::at(4)});
  c.require(validate_causality_function(cd, strict_past_function(cd)).pass, "strict past rejected");
  auto id = validate_causality_function(cd, [](const Cut& x) { return x; });
  bool has_counterexample = false;
  for (const auto& cond : id.conditions)
    if (!cond.pass && !cond.counterexample.empty()) has_counterexample = true;
  c.require(!id.pass && has_counterexample, "identity accepted or no counterexample");
  for (int k = 2; k <= 4; ++k) {
    auto r = verify_cd_mutual_consistency(cd, 0, 3, k, canonical_cd_map(0, 3));
    c.require(r.pass, "mutual consistency, alphabet " + std::to_string(k) + ": " + r.message);
  }
}

void c8(Check& c) {
  oracle::Rng rng(88);
  // Partial-order laws on light-cone order and random posets.
  for (int i = 0; i < 300; ++i) {
    auto p = oracle::random_points(rng, 3, 6);
    if (precedes(p[0], p[1]) && precedes(p[1], p[2])) c.require(precedes(p[0], p[2]), "transitivity");
    if (precedes(p[0], p[1]) && precedes(p[1], p[0])) c.require(p[0] == p[1], "antisymmetry");
    c.require(precedes(p[0], p[0]), "reflexivity");
  }
  for (int i = 0; i < 30; ++i) {
    const FinitePoset p = oracle::random_poset(rng, 6);
    for (std::size_t a = 0; a < p.size(); ++a)
      for (std::size_t b = 0; b < p.size(); ++b)
        for (std::size_t d = 0; d < p.size(); ++d)
          if (p.leq(a, b) && p.leq(b, d)) c.require(p.leq(a, d), "poset transitivity");
  }

  // Composition preserves causality and matches the fixed-point oracle.
  int systems = 0;
  for (int i = 0; i < 260; ++i) {
    auto pair = oracle::random_pair(rng);
    systems += 2;
    CausalSystem comp = plug(pair.s1, pair.s2);
    c.require(validate_causality(comp).pass, "composite acausal");
    for (const auto& in : oracle::all_inputs(comp)) {
      auto want = oracle::brute_force_plug(pair.s1, pair.s2, comp, in);
      auto got = exact_distribution(comp, in).probs;
      std::erase_if(want, [](const auto& kv) { return kv.second == 0; });
      std::erase_if(got, [](const auto& kv) { return kv.second == 0; });
      c.require(got == want, "composite distribution differs from oracle");
    }
  }
  c.require(systems >= 500, "fewer than 500 systems");

  // Pseudo-metric laws and contractivity.
  const DistinguisherFamily fam{FamilyKind::adaptive};
  for (int i = 0; i < 100; ++i) {
    CausalSystem r = random_box(rng, "R");
    CausalSystem s = oracle::random_like(rng, r, "S");
    CausalSystem t = oracle::random_like(rng, r, "T");
    const Rational rs = advantage_sup(r, s, fam).advantage;
    c.require(advantage_sup(r, r, fam).advantage == 0, "d(R,R) != 0");
    c.require(rs == advantage_sup(s, r, fam).advantage, "asymmetric");
    c.require(advantage_sup(r, t, fam).advantage <= rs + advantage_sup(s, t, fam).advantage, "triangle inequality");
    CausalSystem alpha = random_converter(rng, r);
    c.require(advantage_sup(plug(r, alpha), plug(s, alpha), fam).advantage <= rs, "not contractive");
  }

  // Monte Carlo coverage.
  CausalSystem r = random_box(rng, "R");
  CausalSystem s = oracle::random_like(rng, r, "S");
  Distinguisher d(oracle::random_distinguisher(rng, r));
  const double exact = to_double(advantage_exact(d, r, s));
  int inside = 0;
  for (std::uint64_t i = 0; i < 200; ++i) {
    McEstimate e = advantage_mc(d, r, s, 400, 0.05, 5000 + i);
    if (std::abs(e.estimate - exact) <= e.half_width) ++inside;
  }
  c.require(inside >= 190, "Hoeffding coverage " + std::to_string(inside) + "/200");
}

}  // namespace

int main() {
  criterion("C1", "perfect coin flip from a channel with delay, all three cases exactly 0", 5, c1);
  criterion("C2", "MITM agreement (1+p)/2, equality advantage (1-p)/2, triangle certifies (1-p)/6, each p under 5 s", 0, c2);
  {
    // The copy strategy is not optimal for 0 < p < 1/2 on the full
    // dependency graph; report the exact optimum next to it.
    const MitmOptimum o = mitm_optimum(rat(1, 4), false);
    std::printf("NOTE C2: at p=1/4 the best deterministic MITM strategy (%s) agrees with probability %s > 5/8; "
                "its bound is %s\n",
                o.argmax.describe().c_str(), to_string(o.best).c_str(),
                to_string((Rational(1) - o.best) / 3).c_str());
  }
  criterion("C3", "unfair to 1/2-biased coin flip exact, abort agreement 1/2", 2, c3);
  criterion("C4", "unfair coin flip from abort channel exact, stacked candidates certify 1/12", 10, c4);
  criterion("C5", "delay extension advantage 1 - 1/k and containment dichotomy", 5, c5);
  criterion("C6", "EPR test: identity 1, replacement 1/4, advantage 3/4", 1, c6);
  criterion("C7", "cuts oracle, causality functions, CD mutual consistency", 10, c7);
  criterion("C8", "partial order, composition fuzz, pseudo-metric, contractivity, Hoeffding coverage", 0, c8);
  std::printf("%s: %d failing criteria\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
