#include "relcrypt/analysis.hpp"

#include "relcrypt/error.hpp"

#include <algorithm>
#include <cmath>
#include <omp.h>
#include <random>
#include <set>

namespace relcrypt {

Distinguisher::Distinguisher(CausalSystem system) : sys_(std::move(system)) {
  const Port* g = sys_.find_port(kGuessPort, Direction::out);
  if (!g) throw InterfaceError("distinguisher '" + sys_.name() + "' has no output port 'guess'");
  if (g->points.size() != 1)
    throw InterfaceError("distinguisher '" + sys_.name() + "': 'guess' must carry exactly one point");
}

Distinguisher reading_distinguisher(std::string name, const std::vector<Port>& reads,
                                    const SpaceTimePoint& guess_point,
                                    std::function<int(std::span<const Symbol>)> guess) {
  SystemBuilder b(std::move(name));
  std::vector<SystemBuilder::Slot> deps;
  for (const auto& p : reads) {
    Alphabet alpha = p.alphabet;
    auto ref = b.input(p.name, std::move(alpha), p.points);
    for (std::size_t k = 0; k < p.points.size(); ++k) deps.push_back(at(ref, k));
  }
  auto g = b.output(kGuessPort, bits(), {guess_point});
  b.rule(at(g), deps, [guess](std::span<const Symbol> v, std::span<const std::uint32_t>) {
    return Symbol::letter(guess(v) == 0 ? 0 : 1);
  });
  return Distinguisher(b.build());
}

namespace {

CausalSystem close_with(const Distinguisher& d, const CausalSystem& r) {
  CausalSystem closed = plug(d.system(), r);
  std::string dangling;
  for (const auto& p : closed.ports())
    if (!(p.name == kGuessPort && p.dir == Direction::out))
      dangling += (dangling.empty() ? "" : ", ") + to_string(p.dir) + ":" + p.name;
  if (!dangling.empty())
    throw InterfaceError("distinguisher '" + d.name() + "' does not close '" + r.name() +
                         "'; dangling ports: " + dangling);
  return closed;
}

}  // namespace

Rational guess_zero_probability(const Distinguisher& d, const CausalSystem& r) {
  CausalSystem closed = close_with(d, r);
  OutcomeDistribution dist = exact_distribution(closed);
  const std::size_t g = dist.column(kGuessPort);
  return dist.probability([g](const std::vector<Symbol>& v) { return v[g] == Symbol::letter(0); });
}

Rational advantage_exact(const Distinguisher& d, const CausalSystem& r, const CausalSystem& s) {
  return abs(guess_zero_probability(d, r) - guess_zero_probability(d, s));
}

Rational statistical_distance(const OutcomeDistribution& a, const OutcomeDistribution& b) {
  if (a.labels.size() != b.labels.size()) throw InterfaceError("distributions over different slots");
  // Align b's columns to a's.
  std::vector<std::size_t> perm;
  for (const auto& l : a.labels) {
    auto it = std::find(b.labels.begin(), b.labels.end(), l);
    if (it == b.labels.end()) throw InterfaceError("slot " + to_string(l) + " missing from second distribution");
    perm.push_back(static_cast<std::size_t>(it - b.labels.begin()));
  }
  std::map<std::vector<Symbol>, Rational> diff = a.probs;
  for (const auto& [k, v] : b.probs) {
    std::vector<Symbol> key(k.size());
    for (std::size_t c = 0; c < perm.size(); ++c) key[c] = k[perm[c]];
    diff[key] -= v;
  }
  Rational sum = 0;
  for (const auto& [k, v] : diff) sum += abs(v);
  return sum / 2;
}

std::string to_string(FamilyKind k) {
  switch (k) {
    case FamilyKind::non_adaptive: return "non_adaptive";
    case FamilyKind::adaptive: return "adaptive";
    case FamilyKind::causal_enumerated: return "causal_enumerated";
  }
  return "?";
}

namespace {

using Row = std::map<std::vector<Symbol>, Rational>;

// Rows of `s` indexed by the input enumeration of `ref`, outputs reordered
// to `ref`'s output order.
std::vector<Row> aligned_rows(const CausalSystem& ref, const CausalSystem& s, const std::vector<std::uint32_t>& radix,
                              std::uint64_t total) {
  std::vector<std::size_t> in_perm(ref.input_count()), out_perm(ref.output_count());
  for (std::size_t i = 0; i < ref.input_count(); ++i) {
    const auto l = ref.input_label(i);
    auto j = s.input_index(l.port, l.point);
    if (!j) throw InterfaceError("'" + s.name() + "' lacks input slot " + to_string(l));
    in_perm[i] = *j;
  }
  for (std::size_t o = 0; o < ref.output_count(); ++o) {
    const auto l = ref.output_label(o);
    auto j = s.output_index(l.port, l.point);
    if (!j) throw InterfaceError("'" + s.name() + "' lacks output slot " + to_string(l));
    out_perm[o] = *j;
  }
  std::vector<Row> rows(total);
  for (std::uint64_t n = 0; n < total; ++n) {
    std::vector<Symbol> in(s.input_count());
    std::uint64_t rest = n;
    for (std::size_t i = 0; i < ref.input_count(); ++i) {
      const std::uint32_t dgt = static_cast<std::uint32_t>(rest % radix[i]);
      rest /= radix[i];
      in[in_perm[i]] = dgt == 0 ? Symbol::vacuum() : ref.input_alphabet(i)[dgt - 1];
    }
    for (const auto& [k, v] : kernels::distribution_parallel(s, in)) {
      std::vector<Symbol> key(k.size());
      for (std::size_t o = 0; o < out_perm.size(); ++o) key[o] = k[out_perm[o]];
      rows[n][key] += v;
    }
  }
  return rows;
}

struct Tables {
  std::vector<std::uint32_t> radix;
  std::uint64_t total = 1;
  std::vector<Row> r, s;
};

Tables build_tables(const CausalSystem& r, const CausalSystem& s) {
  std::string why;
  if (!same_interface(r, s, &why))
    throw InterfaceError("cannot compare '" + r.name() + "' with '" + s.name() + "': " + why);
  Tables t;
  for (std::size_t i = 0; i < r.input_count(); ++i) {
    t.radix.push_back(static_cast<std::uint32_t>(r.input_alphabet(i).size() + 1));
    t.total *= t.radix.back();
    if (t.total > enumeration_bound())
      throw BoundExceeded("input transcripts of '" + r.name() + "' exceed the enumeration bound");
  }
  t.r = aligned_rows(r, r, t.radix, t.total);
  t.s = aligned_rows(r, s, t.radix, t.total);
  return t;
}

Rational row_distance(const Row& a, const Row& b) {
  Row diff = a;
  for (const auto& [k, v] : b) diff[k] -= v;
  Rational sum = 0;
  for (const auto& [k, v] : diff) sum += abs(v);
  return sum / 2;
}

class AdaptiveSolver {
 public:
  AdaptiveSolver(const CausalSystem& sys, const Tables& t) : t_(t) {
    std::set<Rational> times;
    for (std::size_t i = 0; i < sys.input_count(); ++i) times.insert(sys.input_point(i).t);
    stage_times_.assign(times.begin(), times.end());
    stages_.resize(stage_times_.size());
    for (std::size_t i = 0; i < sys.input_count(); ++i) {
      auto it = std::find(stage_times_.begin(), stage_times_.end(), sys.input_point(i).t);
      stages_[static_cast<std::size_t>(it - stage_times_.begin())].push_back(i);
    }
    groups_.resize(stage_times_.size() + 1);
    for (std::size_t o = 0; o < sys.output_count(); ++o) {
      const Rational& t = sys.output_point(o).t;
      std::size_t g = 0;
      while (g < stage_times_.size() && stage_times_[g] <= t) ++g;
      groups_[g].push_back(o);
    }
    stride_.resize(t.radix.size());
    std::uint64_t st = 1;
    for (std::size_t i = 0; i < t.radix.size(); ++i) {
      stride_[i] = st;
      st *= t.radix[i];
    }
    n_out_ = sys.output_count();
  }

  Rational solve() {
    std::vector<std::uint32_t> digits(t_.radix.size(), 0);
    std::vector<std::optional<Symbol>> obs(n_out_);
    return observe(0, digits, obs) / 2;
  }

 private:
  std::uint64_t index(const std::vector<std::uint32_t>& d) const {
    std::uint64_t n = 0;
    for (std::size_t i = 0; i < d.size(); ++i) n += d[i] * stride_[i];
    return n;
  }

  static bool consistent(const std::vector<Symbol>& o, const std::vector<std::optional<Symbol>>& obs) {
    for (std::size_t k = 0; k < o.size(); ++k)
      if (obs[k] && *obs[k] != o[k]) return false;
    return true;
  }

  Rational observe(std::size_t k, std::vector<std::uint32_t>& digits, std::vector<std::optional<Symbol>>& obs) {
    const std::uint64_t n = index(digits);
    const auto& group = groups_[k];
    std::set<std::vector<Symbol>> branches;
    for (const Row* row : {&t_.r[n], &t_.s[n]})
      for (const auto& [o, p] : *row) {
        if (p == 0 || !consistent(o, obs)) continue;
        std::vector<Symbol> v;
        for (std::size_t c : group) v.push_back(o[c]);
        branches.insert(std::move(v));
      }
    Rational sum = 0;
    for (const auto& v : branches) {
      for (std::size_t j = 0; j < group.size(); ++j) obs[group[j]] = v[j];
      if (k == stages_.size()) {
        std::vector<Symbol> full(n_out_);
        for (std::size_t c = 0; c < n_out_; ++c) full[c] = *obs[c];
        auto pr = t_.r[n].find(full);
        auto ps = t_.s[n].find(full);
        Rational a = pr == t_.r[n].end() ? Rational(0) : pr->second;
        Rational b = ps == t_.s[n].end() ? Rational(0) : ps->second;
        sum += abs(a - b);
      } else {
        sum += choose(k, digits, obs);
      }
    }
    for (std::size_t c : group) obs[c].reset();
    return sum;
  }

  Rational choose(std::size_t k, std::vector<std::uint32_t>& digits, std::vector<std::optional<Symbol>>& obs) {
    const auto& slots = stages_[k];
    std::uint64_t combos = 1;
    for (std::size_t i : slots) combos *= t_.radix[i];
    Rational best = -1;
    for (std::uint64_t c = 0; c < combos; ++c) {
      std::uint64_t rest = c;
      for (std::size_t i : slots) {
        digits[i] = static_cast<std::uint32_t>(rest % t_.radix[i]);
        rest /= t_.radix[i];
      }
      best = std::max(best, observe(k + 1, digits, obs));
    }
    for (std::size_t i : slots) digits[i] = 0;
    return best;
  }

  const Tables& t_;
  std::vector<Rational> stage_times_;
  std::vector<std::vector<std::size_t>> stages_;
  std::vector<std::vector<std::size_t>> groups_;
  std::vector<std::uint64_t> stride_;
  std::size_t n_out_ = 0;
};

SupResult causal_enumeration(const CausalSystem& sys, const Tables& t) {
  const std::uint64_t bound = enumeration_bound();
  // Observation space of each input slot.
  struct Decision {
    std::size_t slot;
    std::vector<std::size_t> observed;
    std::vector<std::vector<Symbol>> values;  // per observed output: vacuum + alphabet
    std::uint64_t cells = 1;
  };
  std::vector<Decision> decisions;
  std::uint64_t entries = 0;
  long double log_count = 0;
  for (std::size_t i = 0; i < sys.input_count(); ++i) {
    Decision d{i, {}, {}, 1};
    for (std::size_t o = 0; o < sys.output_count(); ++o) {
      if (!strictly_precedes(sys.output_point(o), sys.input_point(i))) continue;
      d.observed.push_back(o);
      std::vector<Symbol> vals{Symbol::vacuum()};
      for (const auto& s : sys.output_alphabet(o)) vals.push_back(s);
      d.cells *= vals.size();
      d.values.push_back(std::move(vals));
      if (d.cells > bound) throw BoundExceeded("causal strategy table too large");
    }
    entries += d.cells;
    log_count += static_cast<long double>(d.cells) * std::log2(static_cast<long double>(t.radix[i]));
    decisions.push_back(std::move(d));
  }
  if (log_count > std::log2(static_cast<long double>(bound)))
    throw BoundExceeded("causal strategy family of '" + sys.name() + "' exceeds the enumeration bound " +
                        std::to_string(bound));

  std::set<std::vector<Symbol>> support;
  for (const auto* rows : {&t.r, &t.s})
    for (const auto& row : *rows)
      for (const auto& [o, p] : row)
        if (p != 0) support.insert(o);

  std::vector<std::uint64_t> stride(t.radix.size());
  std::uint64_t st = 1;
  for (std::size_t i = 0; i < t.radix.size(); ++i) {
    stride[i] = st;
    st *= t.radix[i];
  }

  // One flat digit vector holds every table entry.
  std::vector<std::uint32_t> table(entries, 0);
  std::vector<std::size_t> offset;
  std::vector<std::uint32_t> radix_of_entry;
  for (const auto& d : decisions) {
    offset.push_back(radix_of_entry.size());
    for (std::uint64_t c = 0; c < d.cells; ++c) radix_of_entry.push_back(t.radix[d.slot]);
  }

  SupResult best{Rational(0), 0};
  while (true) {
    ++best.strategies;
    Rational sum = 0;
    for (const auto& o : support) {
      std::uint64_t n = 0;
      for (std::size_t k = 0; k < decisions.size(); ++k) {
        const auto& d = decisions[k];
        std::uint64_t cell = 0, mul = 1;
        for (std::size_t j = 0; j < d.observed.size(); ++j) {
          const auto& vals = d.values[j];
          auto it = std::find(vals.begin(), vals.end(), o[d.observed[j]]);
          std::uint64_t pos = it == vals.end() ? 0 : static_cast<std::uint64_t>(it - vals.begin());
          cell += pos * mul;
          mul *= vals.size();
        }
        n += table[offset[k] + cell] * stride[d.slot];
      }
      auto pr = t.r[n].find(o);
      auto ps = t.s[n].find(o);
      Rational a = pr == t.r[n].end() ? Rational(0) : pr->second;
      Rational b = ps == t.s[n].end() ? Rational(0) : ps->second;
      sum += abs(a - b);
    }
    best.advantage = std::max(best.advantage, Rational(sum / 2));
    std::size_t k = 0;
    for (; k < table.size(); ++k) {
      if (++table[k] < radix_of_entry[k]) break;
      table[k] = 0;
    }
    if (k == table.size()) break;
  }
  return best;
}

}  // namespace

ConditionalTable conditional_table(const CausalSystem& s) {
  ConditionalTable ct;
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < s.input_count(); ++i) {
    ct.input_labels.push_back(s.input_label(i));
    ct.radix.push_back(static_cast<std::uint32_t>(s.input_alphabet(i).size() + 1));
    total *= ct.radix.back();
    if (total > enumeration_bound()) throw BoundExceeded("input transcripts exceed the enumeration bound");
  }
  for (std::size_t o = 0; o < s.output_count(); ++o) ct.output_labels.push_back(s.output_label(o));
  ct.rows = aligned_rows(s, s, ct.radix, total);
  return ct;
}

SupResult advantage_sup(const CausalSystem& r, const CausalSystem& s, const DistinguisherFamily& family) {
  Tables t = build_tables(r, s);
  switch (family.kind) {
    case FamilyKind::non_adaptive: {
      SupResult res{Rational(0), t.total};
      for (std::uint64_t n = 0; n < t.total; ++n) res.advantage = std::max(res.advantage, row_distance(t.r[n], t.s[n]));
      return res;
    }
    case FamilyKind::adaptive:
      return SupResult{AdaptiveSolver(r, t).solve(), 0};
    case FamilyKind::causal_enumerated:
      return causal_enumeration(r, t);
  }
  throw PreconditionError("unknown distinguisher family");
}

Rational advantage_sup_enumerated(const CausalSystem& r, const CausalSystem& s, const DistinguisherFamily& family) {
  return advantage_sup(r, s, family).advantage;
}

double hoeffding_half_width(std::uint64_t n, double delta) {
  if (n == 0) return std::numeric_limits<double>::infinity();
  return std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(n)));
}

namespace kernels {

namespace {

constexpr std::uint64_t kBatch = 1024;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t run_batch(const CausalSystem& closed, const std::vector<FactorSampler>& samplers, std::size_t guess,
                        std::uint64_t rng_seed, std::uint64_t batch, std::uint64_t count) {
  std::mt19937_64 rng(splitmix64(rng_seed ^ splitmix64(batch)));
  std::vector<std::uint32_t> digits(samplers.size());
  std::vector<Symbol> out(closed.output_count());
  std::uint64_t zeros = 0;
  for (std::uint64_t k = 0; k < count; ++k) {
    for (std::size_t f = 0; f < samplers.size(); ++f) digits[f] = samplers[f](rng);
    closed.react({}, digits, out);
    if (out[guess] == Symbol::letter(0)) ++zeros;
  }
  return zeros;
}

struct Prepared {
  std::vector<FactorSampler> samplers;
  std::size_t guess;
};

Prepared prepare(const CausalSystem& closed) {
  if (closed.input_count() != 0) throw InterfaceError("Monte Carlo needs a closed system");
  Prepared p{{}, closed.output_index(kGuessPort)};
  for (const auto& f : closed.seeds().factors()) p.samplers.emplace_back(f);
  return p;
}

}  // namespace

std::uint64_t count_guess_zero_serial(const CausalSystem& closed, std::uint64_t n, std::uint64_t rng_seed) {
  const Prepared p = prepare(closed);
  std::uint64_t zeros = 0;
  for (std::uint64_t b = 0; b * kBatch < n; ++b)
    zeros += run_batch(closed, p.samplers, p.guess, rng_seed, b, std::min(kBatch, n - b * kBatch));
  return zeros;
}

std::uint64_t count_guess_zero_parallel(const CausalSystem& closed, std::uint64_t n, std::uint64_t rng_seed) {
  const Prepared p = prepare(closed);
  const std::int64_t batches = static_cast<std::int64_t>((n + kBatch - 1) / kBatch);
  std::uint64_t zeros = 0;
#pragma omp parallel for reduction(+ : zeros) schedule(dynamic)
  for (std::int64_t b = 0; b < batches; ++b) {
    const std::uint64_t ub = static_cast<std::uint64_t>(b);
    zeros += run_batch(closed, p.samplers, p.guess, rng_seed, ub, std::min(kBatch, n - ub * kBatch));
  }
  return zeros;
}

}  // namespace kernels

McEstimate advantage_mc(const Distinguisher& d, const CausalSystem& r, const CausalSystem& s, std::uint64_t n,
                        double delta, std::uint64_t rng_seed) {
  if (n == 0) throw PreconditionError("Monte Carlo needs at least one sample");
  if (!(delta > 0 && delta < 1)) throw PreconditionError("confidence parameter must lie in (0, 1)");
  CausalSystem cr = close_with(d, r);
  CausalSystem cs = close_with(d, s);
  McEstimate e;
  e.n = n;
  e.delta = delta;
  e.p_real = static_cast<double>(kernels::count_guess_zero_parallel(cr, n, rng_seed)) / static_cast<double>(n);
  e.p_ideal =
      static_cast<double>(kernels::count_guess_zero_parallel(cs, n, rng_seed ^ 0x5bd1e995ULL)) / static_cast<double>(n);
  e.estimate = std::abs(e.p_real - e.p_ideal);
  e.half_width = 2 * hoeffding_half_width(n, delta);
  return e;
}

}  // namespace relcrypt
