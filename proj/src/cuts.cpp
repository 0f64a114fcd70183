#include "relcrypt/cuts.hpp"

#include "relcrypt/error.hpp"

#include <bit>
#include <omp.h>

namespace relcrypt {

std::size_t Cut::size() const { return static_cast<std::size_t>(std::popcount(bits)); }

FinitePoset::FinitePoset(std::vector<std::string> labels, std::vector<std::vector<bool>> leq)
    : labels_(std::move(labels)), leq_(std::move(leq)) {
  const std::size_t n = labels_.size();
  if (n > kMaxPosetSize)
    throw PreconditionError("poset has " + std::to_string(n) + " elements; at most " +
                            std::to_string(kMaxPosetSize) + " are supported");
  if (leq_.size() != n) throw PreconditionError("order matrix has wrong number of rows");
  for (const auto& row : leq_)
    if (row.size() != n) throw PreconditionError("order matrix is not square");
  for (std::size_t i = 0; i < n; ++i) {
    if (!leq_[i][i]) throw PreconditionError("order is not reflexive at " + labels_[i]);
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && leq_[i][j] && leq_[j][i])
        throw PreconditionError("order is not antisymmetric on " + labels_[i] + ", " + labels_[j]);
      for (std::size_t k = 0; k < n; ++k)
        if (leq_[i][j] && leq_[j][k] && !leq_[i][k])
          throw PreconditionError("order is not transitive on " + labels_[i] + ", " + labels_[j] +
                                  ", " + labels_[k]);
    }
  }
  down_.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (leq_[j][i]) down_[i] |= std::uint64_t{1} << j;
}

FinitePoset FinitePoset::from_points(std::vector<std::string> labels,
                                     const std::vector<SpaceTimePoint>& points) {
  if (labels.size() != points.size()) throw PreconditionError("label/point count mismatch");
  const std::size_t n = points.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (points[i] == points[j])
        throw PreconditionError("points " + labels[i] + " and " + labels[j] + " coincide");
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) leq[i][j] = precedes(points[i], points[j]);
  return FinitePoset(std::move(labels), std::move(leq));
}

Cut FinitePoset::all() const {
  return Cut{size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << size()) - 1};
}

Cut FinitePoset::maximal_elements(const Cut& c) const {
  Cut out;
  for (std::size_t i = 0; i < size(); ++i) {
    if (!c.contains(i)) continue;
    bool maximal = true;
    for (std::size_t j = 0; j < size() && maximal; ++j)
      if (c.contains(j) && lt(i, j)) maximal = false;
    if (maximal) out.bits |= std::uint64_t{1} << i;
  }
  return out;
}

bool FinitePoset::bounded(const Cut& c) const {
  for (std::size_t t = 0; t < size(); ++t)
    if (c.subset_of(down_set(t))) return true;
  return false;
}

std::optional<std::size_t> FinitePoset::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < size(); ++i)
    if (labels_[i] == label) return i;
  return std::nullopt;
}

std::string FinitePoset::describe(const Cut& c) const {
  std::string s = "{";
  bool first = true;
  for (std::size_t i = 0; i < size(); ++i) {
    if (!c.contains(i)) continue;
    if (!first) s += ",";
    s += labels_[i];
    first = false;
  }
  return s + "}";
}

bool is_cut(const FinitePoset& poset, const Cut& c) {
  if (!c.subset_of(poset.all())) return false;
  for (std::size_t i = 0; i < poset.size(); ++i)
    if (c.contains(i) && !poset.down_set(i).subset_of(c)) return false;
  return true;
}

namespace kernels {

namespace {

void check_enumerable(const FinitePoset& poset) {
  if (poset.size() > kMaxCutEnumeration)
    throw BoundExceeded("all_cuts: poset has " + std::to_string(poset.size()) +
                        " elements, enumeration is limited to " +
                        std::to_string(kMaxCutEnumeration));
}

}  // namespace

std::vector<Cut> all_cuts_serial(const FinitePoset& poset) {
  check_enumerable(poset);
  std::vector<Cut> out;
  const std::uint64_t total = std::uint64_t{1} << poset.size();
  for (std::uint64_t m = 0; m < total; ++m)
    if (is_cut(poset, Cut{m})) out.push_back(Cut{m});
  return out;
}

std::vector<Cut> all_cuts_parallel(const FinitePoset& poset) {
  check_enumerable(poset);
  const std::uint64_t total = std::uint64_t{1} << poset.size();
  constexpr std::uint64_t kChunk = 4096;
  const std::int64_t chunks = static_cast<std::int64_t>((total + kChunk - 1) / kChunk);
  std::vector<std::vector<Cut>> found(static_cast<std::size_t>(chunks));
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t k = 0; k < chunks; ++k) {
    const std::uint64_t lo = static_cast<std::uint64_t>(k) * kChunk;
    const std::uint64_t hi = std::min(total, lo + kChunk);
    auto& local = found[static_cast<std::size_t>(k)];
    for (std::uint64_t m = lo; m < hi; ++m)
      if (is_cut(poset, Cut{m})) local.push_back(Cut{m});
  }
  std::vector<Cut> out;
  for (auto& v : found) out.insert(out.end(), v.begin(), v.end());
  return out;
}

}  // namespace kernels

std::vector<Cut> all_cuts(const FinitePoset& poset) { return kernels::all_cuts_parallel(poset); }

CausalityFunctionReport validate_causality_function(const FinitePoset& poset,
                                                    const CausalityFunction& chi) {
  CausalityFunctionReport report;
  const auto cuts = all_cuts(poset);
  std::map<Cut, Cut> image;
  for (const auto& c : cuts) image[c] = chi(c);

  auto fail = [&](std::size_t k, std::string msg, std::vector<Cut> witness) {
    auto& r = report.conditions[k];
    if (!r.pass) return;
    r.pass = false;
    r.message = std::move(msg);
    r.counterexample = std::move(witness);
    report.pass = false;
  };

  for (const auto& c : cuts) {
    const Cut& x = image[c];
    if (!is_cut(poset, x))
      fail(0, "chi(" + poset.describe(c) + ") = " + poset.describe(x) + " is not a cut", {c});
    else if (!x.subset_of(c))
      fail(0, "chi(" + poset.describe(c) + ") = " + poset.describe(x) + " is not contained in it",
           {c});
  }
  for (const auto& c : cuts)
    for (const auto& d : cuts)
      if (c.subset_of(d) && !image[c].subset_of(image[d]))
        fail(1,
             "monotonicity: " + poset.describe(c) + " ⊆ " + poset.describe(d) + " but chi images " +
                 poset.describe(image[c]) + " ⊄ " + poset.describe(image[d]),
             {c, d});
  for (const auto& c : cuts)
    if (!c.empty() && poset.bounded(c) && image[c] == c)
      fail(2, "chi fixes the nonempty bounded cut " + poset.describe(c), {c});
  for (const auto& c : cuts) {
    if (!poset.bounded(c)) continue;
    Cut cur = c;
    for (std::size_t n = 0; n <= cuts.size() && !cur.empty(); ++n) cur = chi(cur);
    if (!cur.empty())
      fail(3, "iterating chi from " + poset.describe(c) + " stalls at " + poset.describe(cur),
           {c, cur});
  }
  return report;
}

CausalityFunction strict_past_function(const FinitePoset& poset) {
  return [poset](const Cut& c) { return Cut{c.bits & ~poset.maximal_elements(c).bits}; };
}

std::string to_string(const ClassicalState& s, const FinitePoset& poset) {
  if (!s.message) return "vacuum";
  return std::to_string(s.message->first) + "@" + poset.labels()[s.message->second];
}

ClassicalState restrict_state(const ClassicalState& s, const Cut& keep) {
  if (s.message && keep.contains(s.message->second)) return s;
  return ClassicalState{};
}

CutMap canonical_cd_map(std::size_t a, std::size_t b) {
  return [a, b](const Cut& c, const ClassicalState& in) {
    if (c.contains(b) && in.message && in.message->second == a)
      return ClassicalState{std::make_pair(in.message->first, b)};
    return ClassicalState{};
  };
}

MutualConsistencyReport verify_cd_mutual_consistency(const FinitePoset& poset, std::size_t a,
                                                     std::size_t b, int alphabet,
                                                     const CutMap& map) {
  if (a >= poset.size() || b >= poset.size()) throw PreconditionError("position out of range");
  if (!poset.lt(a, b))
    throw PreconditionError("input position " + poset.labels()[a] +
                            " must strictly precede output position " + poset.labels()[b]);
  if (alphabet < 1) throw PreconditionError("alphabet must be nonempty");

  const auto chi = strict_past_function(poset);
  std::vector<Cut> bounded;
  for (const auto& c : all_cuts(poset))
    if (poset.bounded(c)) bounded.push_back(c);

  std::vector<ClassicalState> inputs{ClassicalState{}};
  for (std::size_t pos = 0; pos < poset.size(); ++pos)
    for (int v = 0; v < alphabet; ++v) inputs.push_back(ClassicalState{std::make_pair(v, pos)});

  MutualConsistencyReport report;
  for (const auto& d : bounded) {
    for (const auto& c : bounded) {
      if (!c.subset_of(d)) continue;
      ++report.pairs_checked;
      for (const auto& rho : inputs) {
        ClassicalState out_d = map(d, restrict_state(rho, chi(d)));
        ClassicalState rhs = map(c, restrict_state(rho, chi(c)));
        ClassicalState lhs = restrict_state(out_d, c);
        std::string problem;
        if (rhs.message && !c.contains(rhs.message->second))
          problem = "map emits outside its cut";
        else if (!(lhs == rhs))
          problem = "tr_{D\\C} Phi^D differs from Phi^C tr_{T\\chi(C)}";
        if (problem.empty()) continue;
        report.pass = false;
        report.message = problem;
        report.c = c;
        report.d = d;
        report.input = rho;
        report.lhs = lhs;
        report.rhs = rhs;
        return report;
      }
    }
  }
  return report;
}

}  // namespace relcrypt
