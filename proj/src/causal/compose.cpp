#include "relcrypt/causal.hpp"

#include "relcrypt/error.hpp"
#include "plan.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <tuple>

namespace relcrypt {
namespace detail {

std::shared_ptr<CompositePlan> PlanAccess::plan_of(const CausalSystem& s) {
  if (s.plan_) return std::make_shared<CompositePlan>(*s.plan_);
  auto plan = std::make_shared<CompositePlan>();
  // The part keeps the primitive's reaction; its own ports are irrelevant
  // once inside a plan.
  plan->parts.push_back(s);
  plan->seed_offset.push_back(0);
  std::vector<Source> src(s.input_count());
  for (std::size_t i = 0; i < src.size(); ++i) src[i] = Source{SourceKind::external, i, 0};
  plan->sources.push_back(std::move(src));
  for (std::size_t o = 0; o < s.output_count(); ++o) plan->output_map.push_back(PartRef{0, o});
  plan->input_count = s.input_count();
  return plan;
}

CausalSystem PlanAccess::make(std::string name, std::vector<Port> ports, std::shared_ptr<CompositePlan> plan) {
  CausalSystem s;
  s.name_ = std::move(name);
  s.ports_ = std::move(ports);
  s.index_slots();
  if (plan->output_map.size() != s.output_count())
    throw PreconditionError("composite '" + s.name_ + "': output map does not match ports");
  plan->finalize(s.input_count());
  SeedSpace seeds;
  bool passthrough = true;
  for (const auto& p : plan->parts) {
    seeds = seeds.concat(p.seeds());
    passthrough = passthrough && p.passthrough();
  }
  s.seeds_ = std::move(seeds);
  s.passthrough_ = passthrough;
  s.deps_ = plan->composite_deps();
  std::shared_ptr<const CompositePlan> frozen = plan;
  s.plan_ = frozen;
  s.react_ = std::make_shared<const ReactFn>(
      [frozen](std::span<const Symbol> in, std::span<const std::uint32_t> seed, std::span<Symbol> out) {
        frozen->evaluate(in, seed, out);
      });
  return s;
}

CausalSystem PlanAccess::with_ports(const CausalSystem& s, std::vector<Port> ports, std::string name) {
  CausalSystem r = s;
  r.name_ = std::move(name);
  r.ports_ = std::move(ports);
  r.index_slots();
  return r;
}

void CompositePlan::finalize(std::size_t composite_inputs) {
  input_count = composite_inputs;
  const std::size_t n = parts.size();
  fanout.assign(n, {});
  for (std::size_t p = 0; p < n; ++p) fanout[p].assign(parts[p].output_count(), {});
  for (std::size_t q = 0; q < n; ++q)
    for (std::size_t j = 0; j < sources[q].size(); ++j)
      if (sources[q][j].kind == SourceKind::wire)
        fanout[sources[q][j].a][sources[q][j].b].push_back(PartRef{q, j});

  // Layer within one time: longest chain of same-time dependencies.
  std::vector<std::vector<int>> layer(n);
  for (std::size_t p = 0; p < n; ++p) layer[p].assign(parts[p].output_count(), -1);
  std::vector<std::vector<char>> state(n);
  for (std::size_t p = 0; p < n; ++p) state[p].assign(parts[p].output_count(), 0);

  std::function<int(std::size_t, std::size_t)> visit = [&](std::size_t p, std::size_t o) -> int {
    if (state[p][o] == 2) return layer[p][o];
    if (state[p][o] == 1)
      throw PreconditionError("zero-delay cycle through " + parts[p].name() + " output " +
                              to_string(parts[p].output_label(o)));
    state[p][o] = 1;
    int l = 0;
    const Rational& t = parts[p].output_point(o).t;
    for (std::size_t i : parts[p].deps(o)) {
      const Source& s = sources[p][i];
      if (s.kind != SourceKind::wire) continue;
      if (parts[s.a].output_point(s.b).t == t) l = std::max(l, visit(s.a, s.b) + 1);
    }
    state[p][o] = 2;
    layer[p][o] = l;
    return l;
  };

  struct Node {
    const Rational* t;
    int layer;
    std::size_t part;
    std::size_t out;
  };
  std::vector<Node> nodes;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t o = 0; o < parts[p].output_count(); ++o)
      nodes.push_back(Node{&parts[p].output_point(o).t, visit(p, o), p, o});
  std::stable_sort(nodes.begin(), nodes.end(), [](const Node& a, const Node& b) {
    if (*a.t != *b.t) return *a.t < *b.t;
    if (a.layer != b.layer) return a.layer < b.layer;
    return a.part < b.part;
  });
  schedule.clear();
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const Node& nd = nodes[k];
    bool same_step = k > 0 && !schedule.empty() && schedule.back().part == nd.part &&
                     *nodes[k - 1].t == *nd.t && nodes[k - 1].layer == nd.layer;
    if (!same_step) schedule.push_back(Step{nd.part, {}});
    schedule.back().outs.push_back(nd.out);
  }
}

void CompositePlan::evaluate(std::span<const Symbol> in, std::span<const std::uint32_t> seed,
                             std::span<Symbol> out) const {
  const std::size_t n = parts.size();
  std::vector<std::vector<Symbol>> ins(n), outs(n);
  std::size_t max_out = 0;
  for (std::size_t p = 0; p < n; ++p) {
    ins[p].resize(parts[p].input_count(), Symbol::vacuum());
    outs[p].resize(parts[p].output_count(), Symbol::vacuum());
    max_out = std::max(max_out, parts[p].output_count());
    for (std::size_t j = 0; j < sources[p].size(); ++j)
      if (sources[p][j].kind == SourceKind::external) ins[p][j] = in[sources[p][j].a];
  }
  std::vector<Symbol> tmp(max_out);
  for (const Step& st : schedule) {
    const CausalSystem& part = parts[st.part];
    std::span<Symbol> t(tmp.data(), part.output_count());
    part.react(ins[st.part], seed.subspan(seed_offset[st.part], part.seeds().digits()), t);
    for (std::size_t o : st.outs) {
      outs[st.part][o] = t[o];
      for (const PartRef& d : fanout[st.part][o]) ins[d.part][d.slot] = t[o];
    }
  }
  for (std::size_t k = 0; k < output_map.size(); ++k) out[k] = outs[output_map[k].part][output_map[k].slot];
}

std::vector<std::vector<std::size_t>> CompositePlan::composite_deps() const {
  const std::size_t n = parts.size();
  std::vector<std::vector<std::optional<std::set<std::size_t>>>> memo(n);
  for (std::size_t p = 0; p < n; ++p) memo[p].resize(parts[p].output_count());
  std::vector<std::vector<char>> active(n);
  for (std::size_t p = 0; p < n; ++p) active[p].assign(parts[p].output_count(), 0);

  std::function<const std::set<std::size_t>&(std::size_t, std::size_t)> closure =
      [&](std::size_t p, std::size_t o) -> const std::set<std::size_t>& {
    if (memo[p][o]) return *memo[p][o];
    if (active[p][o])
      throw PreconditionError("dependency cycle through " + parts[p].name() + " output " +
                              to_string(parts[p].output_label(o)));
    active[p][o] = 1;
    std::set<std::size_t> acc;
    for (std::size_t i : parts[p].deps(o)) {
      const Source& s = sources[p][i];
      if (s.kind == SourceKind::external) acc.insert(s.a);
      else if (s.kind == SourceKind::wire) {
        const auto& sub = closure(s.a, s.b);
        acc.insert(sub.begin(), sub.end());
      }
    }
    active[p][o] = 0;
    memo[p][o] = std::move(acc);
    return *memo[p][o];
  };

  std::vector<std::vector<std::size_t>> deps;
  for (const PartRef& r : output_map) {
    const auto& s = closure(r.part, r.slot);
    deps.emplace_back(s.begin(), s.end());
  }
  return deps;
}

}  // namespace detail

using detail::PlanAccess;
using detail::SourceKind;

CausalSystem compose_parallel(const CausalSystem& s1, const CausalSystem& s2) {
  for (const auto& p : s2.ports())
    if (s1.find_port(p.name, p.dir))
      throw InterfaceError("cannot compose '" + s1.name() + "' and '" + s2.name() + "': both have " +
                           to_string(p.dir) + "-port '" + p.name + "'");
  auto a = PlanAccess::plan_of(s1);
  auto b = PlanAccess::plan_of(s2);
  const std::size_t part_shift = a->parts.size();
  const std::size_t seed_shift = s1.seeds().digits();
  const std::size_t in_shift = s1.input_count();
  for (std::size_t k = 0; k < b->parts.size(); ++k) {
    a->parts.push_back(b->parts[k]);
    a->seed_offset.push_back(b->seed_offset[k] + seed_shift);
    auto src = b->sources[k];
    for (auto& s : src) {
      if (s.kind == SourceKind::external) s.a += in_shift;
      else if (s.kind == SourceKind::wire) s.a += part_shift;
    }
    a->sources.push_back(std::move(src));
  }
  for (auto r : b->output_map) {
    r.part += part_shift;
    a->output_map.push_back(r);
  }
  std::vector<Port> ports = s1.ports();
  ports.insert(ports.end(), s2.ports().begin(), s2.ports().end());
  return PlanAccess::make(s1.name() + " | " + s2.name(), std::move(ports), a);
}

CausalSystem connect(const CausalSystem& s, const std::vector<std::pair<std::string, std::string>>& out_to_in) {
  auto plan = PlanAccess::plan_of(s);
  std::set<std::string> removed_out, removed_in;
  for (const auto& [out_name, in_name] : out_to_in) {
    const Port* op = s.find_port(out_name, Direction::out);
    const Port* ip = s.find_port(in_name, Direction::in);
    if (!op) throw InterfaceError("connect: '" + s.name() + "' has no output port '" + out_name + "'");
    if (!ip) throw InterfaceError("connect: '" + s.name() + "' has no input port '" + in_name + "'");
    if (removed_in.count(in_name))
      throw InterfaceError("connect: input port '" + in_name + "' is wired twice");
    for (const auto& sym : op->alphabet)
      if (std::find(ip->alphabet.begin(), ip->alphabet.end(), sym) == ip->alphabet.end())
        throw InterfaceError("connect: symbol " + to_string(sym) + " of '" + out_name +
                             "' is not in the alphabet of '" + in_name + "'");
    for (const auto& pt : op->points)
      if (std::find(ip->points.begin(), ip->points.end(), pt) == ip->points.end())
        throw InterfaceError("connect: '" + in_name + "' does not accept messages at " + to_string(pt) +
                             " emitted by '" + out_name + "'");
    for (const auto& pt : ip->points) {
      const std::size_t ci = *s.input_index(in_name, pt);
      // Locate the part slot fed by composite input ci.
      for (std::size_t p = 0; p < plan->parts.size(); ++p)
        for (auto& src : plan->sources[p])
          if (src.kind == SourceKind::external && src.a == ci) {
            auto co = s.output_index(out_name, pt);
            if (co) {
              const auto& r = plan->output_map[*co];
              src = detail::Source{SourceKind::wire, r.part, r.slot};
            } else {
              src = detail::Source{};
            }
          }
    }
    removed_out.insert(out_name);
    removed_in.insert(in_name);
  }

  std::vector<Port> ports;
  std::vector<std::size_t> new_input_index(s.input_count(), SIZE_MAX);
  std::vector<detail::PartRef> new_output_map;
  std::size_t next_in = 0;
  std::size_t old_in = 0, old_out = 0;
  for (const auto& port : s.ports()) {
    const bool is_in = port.dir == Direction::in;
    const bool drop = is_in ? removed_in.count(port.name) > 0 : removed_out.count(port.name) > 0;
    for (std::size_t k = 0; k < port.points.size(); ++k) {
      if (is_in) {
        if (!drop) new_input_index[old_in] = next_in++;
        ++old_in;
      } else {
        if (!drop) new_output_map.push_back(plan->output_map[old_out]);
        ++old_out;
      }
    }
    if (!drop) ports.push_back(port);
  }
  for (auto& srcs : plan->sources)
    for (auto& src : srcs)
      if (src.kind == SourceKind::external) src.a = new_input_index[src.a];
  plan->output_map = std::move(new_output_map);
  return PlanAccess::make(s.name(), std::move(ports), plan);
}

CausalSystem plug(const CausalSystem& s1, const CausalSystem& s2) {
  std::map<std::pair<std::string, Direction>, std::string> r1, r2;
  std::vector<std::pair<std::string, std::string>> pairs;
  int counter = 0;
  auto tmp = [&counter](const std::string& base) { return "\x01" + std::to_string(counter++) + ":" + base; };
  for (const auto& p : s1.ports())
    if (p.dir == Direction::out && s2.find_port(p.name, Direction::in)) {
      std::string ot = tmp(p.name), it = tmp(p.name);
      r1[{p.name, Direction::out}] = ot;
      r2[{p.name, Direction::in}] = it;
      pairs.emplace_back(ot, it);
    }
  for (const auto& p : s2.ports())
    if (p.dir == Direction::out && s1.find_port(p.name, Direction::in)) {
      std::string ot = tmp(p.name), it = tmp(p.name);
      r2[{p.name, Direction::out}] = ot;
      r1[{p.name, Direction::in}] = it;
      pairs.emplace_back(ot, it);
    }
  CausalSystem joined = compose_parallel(s1.renamed(r1), s2.renamed(r2));
  CausalSystem wired = pairs.empty() ? joined : connect(joined, pairs);
  return wired.with_name("(" + s1.name() + " . " + s2.name() + ")");
}

CausalSystem plug(std::initializer_list<CausalSystem> chain) {
  if (chain.size() == 0) throw PreconditionError("plug of an empty chain");
  auto it = chain.begin();
  CausalSystem acc = *it;
  for (++it; it != chain.end(); ++it) acc = plug(acc, *it);
  return acc;
}

bool same_interface(const CausalSystem& a, const CausalSystem& b, std::string* why) {
  auto fail = [why](std::string msg) {
    if (why) *why = std::move(msg);
    return false;
  };
  if (a.ports().size() != b.ports().size())
    return fail("port counts differ: " + std::to_string(a.ports().size()) + " vs " +
                std::to_string(b.ports().size()));
  for (const auto& p : a.ports()) {
    const Port* q = b.find_port(p.name, p.dir);
    if (!q) return fail("'" + b.name() + "' lacks " + to_string(p.dir) + "-port '" + p.name + "'");
    auto pa = p.points, pb = q->points;
    std::sort(pa.begin(), pa.end());
    std::sort(pb.begin(), pb.end());
    if (pa != pb) return fail("port '" + p.name + "' has different points");
    if (p.dir == Direction::in) {
      auto aa = p.alphabet, ab = q->alphabet;
      std::sort(aa.begin(), aa.end());
      std::sort(ab.begin(), ab.end());
      if (aa != ab) return fail("input port '" + p.name + "' has different alphabets");
    }
  }
  return true;
}

}  // namespace relcrypt
