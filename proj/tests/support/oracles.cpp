#include "oracles.hpp"

#include "relcrypt/error.hpp"

#include <algorithm>
#include <set>

namespace relcrypt::oracle {

std::vector<Cut> cuts_by_antichains(const FinitePoset& poset) {
  const std::size_t n = poset.size();
  std::set<std::uint64_t> seen;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    bool antichain = true;
    for (std::size_t i = 0; i < n && antichain; ++i)
      for (std::size_t j = 0; j < n && antichain; ++j)
        if (i != j && ((mask >> i) & 1u) && ((mask >> j) & 1u) && poset.leq(i, j)) antichain = false;
    if (!antichain) continue;
    std::uint64_t closure = 0;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i)
        if (((mask >> i) & 1u) && poset.leq(j, i)) closure |= std::uint64_t{1} << j;
    seen.insert(closure);
  }
  std::vector<Cut> out;
  for (auto b : seen) out.push_back(Cut{b});
  std::sort(out.begin(), out.end());
  return out;
}

FinitePoset random_poset(Rng& rng, std::size_t n, double edge_probability) {
  std::bernoulli_distribution edge(edge_probability);
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) leq[i][i] = true;
  // Edges only go from lower to higher index, then close transitively. A
  // random relabelling hides the index order.
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (edge(rng)) leq[perm[i]][perm[j]] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (leq[i][k] && leq[k][j]) leq[i][j] = true;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("e" + std::to_string(i));
  return FinitePoset(labels, leq);
}

std::vector<SpaceTimePoint> random_points(Rng& rng, std::size_t n, int span) {
  std::uniform_int_distribution<int> t(0, span), x(0, std::max(1, span / 2));
  std::set<std::pair<int, int>> used;
  std::vector<SpaceTimePoint> pts;
  while (pts.size() < n) {
    auto p = std::make_pair(t(rng), x(rng));
    if (!used.insert(p).second) continue;
    pts.push_back(SpaceTimePoint::at(p.first, p.second));
  }
  return pts;
}

namespace {

struct Table {
  std::vector<std::size_t> deps;
  std::vector<std::uint32_t> dep_radix;  // vacuum + alphabet
  std::vector<Symbol> values;
};

std::uint32_t digit_of(Symbol v, const Alphabet& a) {
  if (v.is_vacuum()) return 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] == v) return static_cast<std::uint32_t>(i + 1);
  return 0;
}

}  // namespace

CausalSystem random_system(Rng& rng, const RandomSystemOptions& opts) {
  CausalSystem::Spec spec;
  spec.name = opts.name;
  std::vector<Port> ins, outs;
  for (const auto& p : opts.ports) {
    Port port{p.name, p.dir, letters(p.alphabet), p.points};
    spec.ports.push_back(port);
    (p.dir == Direction::in ? ins : outs).push_back(port);
  }
  std::vector<SeedFactor> factors;
  std::uniform_int_distribution<int> size(2, 3), w(1, 4);
  for (int f = 0; f < opts.seed_factors; ++f) {
    const int k = size(rng);
    std::vector<Rational> weights;
    Rational total = 0;
    for (int i = 0; i < k; ++i) {
      weights.emplace_back(w(rng));
      total += weights.back();
    }
    for (auto& x : weights) x /= total;
    factors.push_back(SeedFactor{"f" + std::to_string(f), weights});
  }
  spec.seeds = SeedSpace(factors);

  struct Slot {
    SpaceTimePoint point;
    Alphabet alphabet;
  };
  std::vector<Slot> in_slots, out_slots;
  for (const auto& p : ins)
    for (const auto& q : p.points) in_slots.push_back({q, p.alphabet});
  for (const auto& p : outs)
    for (const auto& q : p.points) out_slots.push_back({q, p.alphabet});

  std::bernoulli_distribution coin(0.6);
  std::vector<Table> tables;
  for (const auto& o : out_slots) {
    Table t;
    for (std::size_t i = 0; i < in_slots.size(); ++i) {
      const bool allowed = opts.acausal || strictly_precedes(in_slots[i].point, o.point);
      if (allowed && coin(rng)) {
        t.deps.push_back(i);
        t.dep_radix.push_back(static_cast<std::uint32_t>(in_slots[i].alphabet.size() + 1));
      }
    }
    std::size_t cells = 1;
    for (auto r : t.dep_radix) cells *= r;
    for (const auto& f : factors) cells *= f.weights.size();
    std::uniform_int_distribution<std::size_t> pick(0, o.alphabet.size());
    for (std::size_t c = 0; c < cells; ++c) {
      const std::size_t v = pick(rng);
      t.values.push_back(v == 0 ? Symbol::vacuum() : o.alphabet[v - 1]);
    }
    spec.deps.push_back(t.deps);
    tables.push_back(std::move(t));
  }

  std::vector<Alphabet> in_alpha;
  for (const auto& s : in_slots) in_alpha.push_back(s.alphabet);
  std::vector<std::size_t> seed_radix;
  for (const auto& f : factors) seed_radix.push_back(f.weights.size());
  spec.react = [tables, in_alpha, seed_radix](std::span<const Symbol> in, std::span<const std::uint32_t> seed,
                                             std::span<Symbol> out) {
    for (std::size_t o = 0; o < tables.size(); ++o) {
      const Table& t = tables[o];
      std::size_t idx = 0, mul = 1;
      for (std::size_t k = 0; k < t.deps.size(); ++k) {
        idx += digit_of(in[t.deps[k]], in_alpha[t.deps[k]]) * mul;
        mul *= t.dep_radix[k];
      }
      for (std::size_t f = 0; f < seed_radix.size(); ++f) {
        idx += seed[f] * mul;
        mul *= seed_radix[f];
      }
      out[o] = t.values[idx];
    }
  };
  return CausalSystem(std::move(spec));
}

RandomPair random_pair(Rng& rng) {
  auto pts = random_points(rng, 6, 6);
  std::uniform_int_distribution<int> alpha(2, 3);
  std::sort(pts.begin(), pts.end());
  // Both directions of wiring on distinct points; time order keeps the pair
  // from needing a zero-delay cycle.
  const int wa = alpha(rng), va = alpha(rng);
  RandomSystemOptions o1{"S1",
                         {{"a", Direction::in, 2, {pts[0]}},
                          {"v", Direction::in, va, {pts[3]}},
                          {"w", Direction::out, wa, {pts[1], pts[2]}},
                          {"o1", Direction::out, 2, {pts[4], pts[5]}}},
                         1,
                         false};
  RandomSystemOptions o2{"S2",
                         {{"b", Direction::in, 2, {pts[1]}},
                          {"w", Direction::in, wa, {pts[1], pts[2]}},
                          {"v", Direction::out, va, {pts[3]}},
                          {"o2", Direction::out, 2, {pts[5]}}},
                         1,
                         false};
  return RandomPair{random_system(rng, o1), random_system(rng, o2)};
}

CausalSystem random_like(Rng& rng, const CausalSystem& like, const std::string& name) {
  RandomSystemOptions o;
  o.name = name;
  for (const auto& p : like.ports())
    o.ports.push_back(PortSpec{p.name, p.dir, static_cast<int>(p.alphabet.size()), p.points});
  o.seed_factors = static_cast<int>(like.seeds().digits());
  return random_system(rng, o);
}

std::vector<std::vector<Symbol>> all_inputs(const CausalSystem& s) {
  std::vector<std::vector<Symbol>> out{std::vector<Symbol>(s.input_count(), Symbol::vacuum())};
  for (std::size_t i = 0; i < s.input_count(); ++i) {
    std::vector<std::vector<Symbol>> next;
    for (const auto& row : out) {
      next.push_back(row);
      for (const auto& v : s.input_alphabet(i)) {
        auto r = row;
        r[i] = v;
        next.push_back(std::move(r));
      }
    }
    out = std::move(next);
  }
  return out;
}

std::map<std::vector<Symbol>, Rational> brute_force_plug(const CausalSystem& s1, const CausalSystem& s2,
                                                         const CausalSystem& composite,
                                                         const std::vector<Symbol>& inputs) {
  // Where each component input comes from: composite input, or the other
  // component's output of the same name and point, or nothing.
  struct Src {
    int kind = 0;  // 0 none, 1 external, 2 other component
    std::size_t index = 0;
  };
  auto sources = [&](const CausalSystem& me, const CausalSystem& other) {
    std::vector<Src> src(me.input_count());
    for (std::size_t i = 0; i < me.input_count(); ++i) {
      const SlotLabel l = me.input_label(i);
      if (auto j = other.output_index(l.port, l.point)) {
        src[i] = {2, *j};
      } else if (auto k = composite.input_index(l.port, l.point)) {
        src[i] = {1, *k};
      }
    }
    return src;
  };
  const auto src1 = sources(s1, s2), src2 = sources(s2, s1);

  std::vector<std::pair<int, std::size_t>> outs;
  for (std::size_t o = 0; o < composite.output_count(); ++o) {
    const SlotLabel l = composite.output_label(o);
    if (auto j = s1.output_index(l.port, l.point)) outs.emplace_back(1, *j);
    else if (auto k = s2.output_index(l.port, l.point)) outs.emplace_back(2, *k);
    else throw InterfaceError("oracle: composite output " + to_string(l) + " not found");
  }

  std::map<std::vector<Symbol>, Rational> dist;
  const std::uint64_t n1 = s1.seeds().size(), n2 = s2.seeds().size();
  std::vector<std::uint32_t> d1(s1.seeds().digits()), d2(s2.seeds().digits());
  for (std::uint64_t a = 0; a < n1; ++a) {
    s1.seeds().decode(a, d1);
    const Rational w1 = s1.seeds().weight(d1);
    if (w1 == 0) continue;
    for (std::uint64_t b = 0; b < n2; ++b) {
      s2.seeds().decode(b, d2);
      const Rational w2 = s2.seeds().weight(d2);
      if (w2 == 0) continue;
      std::vector<Symbol> in1(s1.input_count()), in2(s2.input_count());
      std::vector<Symbol> out1(s1.output_count()), out2(s2.output_count());
      auto fill = [&](std::vector<Symbol>& in, const std::vector<Src>& src, const std::vector<Symbol>& other) {
        for (std::size_t i = 0; i < in.size(); ++i)
          in[i] = src[i].kind == 1 ? inputs[src[i].index]
                  : src[i].kind == 2 ? other[src[i].index]
                                     : Symbol::vacuum();
      };
      const std::size_t rounds = s1.output_count() + s2.output_count() + 2;
      for (std::size_t r = 0; r < rounds; ++r) {
        fill(in1, src1, out2);
        fill(in2, src2, out1);
        auto prev1 = out1, prev2 = out2;
        s1.react(in1, d1, out1);
        s2.react(in2, d2, out2);
        if (r > 0 && prev1 == out1 && prev2 == out2) break;
      }
      std::vector<Symbol> v;
      for (auto [side, j] : outs) v.push_back(side == 1 ? out1[j] : out2[j]);
      dist[v] += w1 * w2;
    }
  }
  return dist;
}

CausalSystem random_distinguisher(Rng& rng, const CausalSystem& like) {
  RandomSystemOptions o;
  o.name = "Drand";
  std::vector<SpaceTimePoint> all;
  for (const auto& p : like.ports()) {
    o.ports.push_back(PortSpec{p.name, p.dir == Direction::in ? Direction::out : Direction::in,
                               static_cast<int>(p.alphabet.size()), p.points});
    all.insert(all.end(), p.points.begin(), p.points.end());
  }
  o.ports.push_back(PortSpec{"guess", Direction::out, 2, {shifted(common_future(all), 1)}});
  o.seed_factors = 0;
  return random_system(rng, o);
}

}  // namespace relcrypt::oracle
