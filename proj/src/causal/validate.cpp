#include "relcrypt/causal.hpp"

#include "relcrypt/error.hpp"

#include <algorithm>
#include <limits>
#include <omp.h>

namespace relcrypt {

std::string to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::acausal: return "acausal";
    case ViolationKind::undeclared: return "undeclared";
    case ViolationKind::nonstrict_declared: return "nonstrict_declared";
    case ViolationKind::alphabet: return "alphabet";
  }
  return "?";
}

namespace {

constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();

struct KeySpec {
  std::vector<std::size_t> slots;
  std::vector<std::uint64_t> strides;
  std::uint64_t size = 1;
};

struct Setup {
  std::vector<std::uint32_t> radix;
  std::uint64_t transcripts = 1;
  std::vector<KeySpec> past;
  std::vector<KeySpec> declared;
};

KeySpec make_key(std::vector<std::size_t> slots, const std::vector<std::uint32_t>& radix) {
  KeySpec k;
  k.slots = std::move(slots);
  for (std::size_t i : k.slots) {
    k.strides.push_back(k.size);
    k.size *= radix[i];
  }
  return k;
}

Setup prepare(const CausalSystem& s) {
  Setup st;
  const std::uint64_t bound = enumeration_bound();
  for (std::size_t i = 0; i < s.input_count(); ++i) {
    st.radix.push_back(static_cast<std::uint32_t>(s.input_alphabet(i).size() + 1));
    st.transcripts *= st.radix.back();
    if (st.transcripts > bound)
      throw BoundExceeded("system '" + s.name() + "': input transcripts exceed the enumeration bound " +
                          std::to_string(bound));
  }
  if (st.transcripts >= kUnset) throw BoundExceeded("too many input transcripts");
  if (s.seeds().size() > bound)
    throw BoundExceeded("system '" + s.name() + "': seed space exceeds the enumeration bound");
  for (std::size_t o = 0; o < s.output_count(); ++o) {
    std::vector<std::size_t> past;
    for (std::size_t i = 0; i < s.input_count(); ++i) {
      const bool same = s.input_point(i) == s.output_point(o);
      if (strictly_precedes(s.input_point(i), s.output_point(o)) || (same && s.passthrough())) past.push_back(i);
    }
    st.past.push_back(make_key(std::move(past), st.radix));
    st.declared.push_back(make_key(s.deps(o), st.radix));
  }
  return st;
}

Symbol value_of(const CausalSystem& s, std::size_t i, std::uint32_t d) {
  return d == 0 ? Symbol::vacuum() : s.input_alphabet(i)[d - 1];
}

std::vector<Symbol> decode_inputs(const CausalSystem& s, const Setup& st, std::uint64_t n) {
  std::vector<Symbol> v(s.input_count());
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = value_of(s, i, static_cast<std::uint32_t>(n % st.radix[i]));
    n /= st.radix[i];
  }
  return v;
}

struct Found {
  bool any = false;
  std::uint64_t seed = 0;
  std::uint64_t n1 = 0, n2 = 0;
  Symbol v1, v2;
};

// found[o * 3 + kind] for kinds acausal, undeclared, alphabet.
void check_seed(const CausalSystem& s, const Setup& st, std::uint64_t seed_index, std::vector<Found>& found) {
  std::vector<std::uint32_t> digits(s.seeds().digits());
  s.seeds().decode(seed_index, digits);
  if (s.seeds().weight(digits) == 0) return;
  const std::size_t n_out = s.output_count();
  std::vector<std::vector<std::uint32_t>> past_first(n_out), decl_first(n_out);
  std::vector<std::vector<Symbol>> past_val(n_out), decl_val(n_out);
  for (std::size_t o = 0; o < n_out; ++o) {
    past_first[o].assign(st.past[o].size, kUnset);
    past_val[o].resize(st.past[o].size);
    decl_first[o].assign(st.declared[o].size, kUnset);
    decl_val[o].resize(st.declared[o].size);
  }
  std::vector<std::uint32_t> d(s.input_count(), 0);
  std::vector<Symbol> in(s.input_count(), Symbol::vacuum());
  std::vector<Symbol> out(n_out);

  auto note = [&](std::size_t slot, std::uint64_t n1, std::uint64_t n2, Symbol v1, Symbol v2) {
    Found& f = found[slot];
    if (f.any) return;
    f = Found{true, seed_index, n1, n2, v1, v2};
  };

  for (std::uint64_t n = 0; n < st.transcripts; ++n) {
    s.react(in, digits, out);
    for (std::size_t o = 0; o < n_out; ++o) {
      const Symbol v = out[o];
      if (!v.is_vacuum()) {
        const auto& alpha = s.output_alphabet(o);
        if (std::find(alpha.begin(), alpha.end(), v) == alpha.end()) note(o * 3 + 2, n, n, v, v);
      }
      auto probe = [&](const KeySpec& k, std::vector<std::uint32_t>& first, std::vector<Symbol>& val,
                       std::size_t slot) {
        std::uint64_t key = 0;
        for (std::size_t j = 0; j < k.slots.size(); ++j) key += d[k.slots[j]] * k.strides[j];
        if (first[key] == kUnset) {
          first[key] = static_cast<std::uint32_t>(n);
          val[key] = v;
        } else if (val[key] != v) {
          note(slot, first[key], n, val[key], v);
        }
      };
      probe(st.past[o], past_first[o], past_val[o], o * 3 + 0);
      probe(st.declared[o], decl_first[o], decl_val[o], o * 3 + 1);
    }
    // Odometer step over input digits, first slot fastest.
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (++d[i] < st.radix[i]) {
        in[i] = value_of(s, i, d[i]);
        break;
      }
      d[i] = 0;
      in[i] = Symbol::vacuum();
    }
  }
}

CausalityReport assemble(const CausalSystem& s, const Setup& st, const std::vector<Found>& found,
                         std::uint64_t seeds) {
  CausalityReport r;
  r.transcripts_checked = st.transcripts * seeds;
  for (std::size_t o = 0; o < s.output_count(); ++o) {
    for (std::size_t i : s.deps(o)) {
      const bool same = s.input_point(i) == s.output_point(o);
      if (strictly_precedes(s.input_point(i), s.output_point(o)) || (same && s.passthrough())) continue;
      CausalityViolation v;
      v.kind = ViolationKind::nonstrict_declared;
      v.output = s.output_label(o);
      v.detail = "declared dependency on " + to_string(s.input_label(i)) + " does not strictly precede " +
                 to_string(v.output);
      r.violations.push_back(std::move(v));
    }
    static constexpr ViolationKind kinds[] = {ViolationKind::acausal, ViolationKind::undeclared,
                                              ViolationKind::alphabet};
    for (std::size_t k = 0; k < 3; ++k) {
      const Found& f = found[o * 3 + k];
      if (!f.any) continue;
      CausalityViolation v;
      v.kind = kinds[k];
      v.output = s.output_label(o);
      v.seed.resize(s.seeds().digits());
      s.seeds().decode(f.seed, v.seed);
      v.input_a = decode_inputs(s, st, f.n1);
      v.input_b = decode_inputs(s, st, f.n2);
      v.value_a = f.v1;
      v.value_b = f.v2;
      switch (v.kind) {
        case ViolationKind::acausal:
          v.detail = "output " + to_string(v.output) +
                     " differs between two input transcripts that agree on its strict causal past";
          break;
        case ViolationKind::undeclared:
          v.detail = "output " + to_string(v.output) +
                     " differs between two input transcripts that agree on its declared dependencies";
          break;
        default:
          v.detail = "output " + to_string(v.output) + " emitted " + to_string(f.v1) + " outside its alphabet";
      }
      r.violations.push_back(std::move(v));
    }
  }
  r.pass = r.violations.empty();
  return r;
}

void merge(std::vector<Found>& into, const std::vector<Found>& from) {
  for (std::size_t k = 0; k < into.size(); ++k) {
    const Found& f = from[k];
    if (!f.any) continue;
    Found& g = into[k];
    if (!g.any || std::tie(f.seed, f.n2) < std::tie(g.seed, g.n2)) g = f;
  }
}

}  // namespace

namespace kernels {

CausalityReport causality_serial(const CausalSystem& s) {
  const Setup st = prepare(s);
  const std::uint64_t seeds = s.seeds().size();
  std::vector<Found> found(s.output_count() * 3);
  for (std::uint64_t k = 0; k < seeds; ++k) {
    std::vector<Found> local(found.size());
    check_seed(s, st, k, local);
    merge(found, local);
  }
  return assemble(s, st, found, seeds);
}

CausalityReport causality_parallel(const CausalSystem& s) {
  const Setup st = prepare(s);
  const std::uint64_t seeds = s.seeds().size();
  const std::uint64_t chunks = std::min<std::uint64_t>(seeds, 256);
  std::vector<std::vector<Found>> per_chunk(chunks, std::vector<Found>(s.output_count() * 3));
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c) {
    const std::uint64_t lo = seeds * static_cast<std::uint64_t>(c) / chunks;
    const std::uint64_t hi = seeds * static_cast<std::uint64_t>(c + 1) / chunks;
    auto& acc = per_chunk[static_cast<std::size_t>(c)];
    for (std::uint64_t k = lo; k < hi; ++k) {
      std::vector<Found> local(acc.size());
      check_seed(s, st, k, local);
      merge(acc, local);
    }
  }
  std::vector<Found> found(s.output_count() * 3);
  for (const auto& f : per_chunk) merge(found, f);
  return assemble(s, st, found, seeds);
}

}  // namespace kernels

CausalityReport validate_causality(const CausalSystem& s) { return kernels::causality_parallel(s); }

}  // namespace relcrypt
