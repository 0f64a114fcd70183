#include "relcrypt/causal.hpp"

#include "relcrypt/error.hpp"
#include "plan.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <set>

namespace relcrypt {

std::string to_string(Symbol s) {
  if (s.is_letter()) return std::to_string(s.value());
  if (s == Symbol::vacuum()) return "vac";
  if (s == Symbol::abort()) return "abort";
  if (s == Symbol::no_abort()) return "noabort";
  if (s == Symbol::comm()) return "comm";
  if (s == Symbol::open()) return "open";
  return "sym" + std::to_string(s.raw());
}

Symbol parse_symbol(std::string_view text) {
  if (text == "vac" || text == "vacuum") return Symbol::vacuum();
  if (text == "abort") return Symbol::abort();
  if (text == "noabort") return Symbol::no_abort();
  if (text == "comm") return Symbol::comm();
  if (text == "open") return Symbol::open();
  if (text.empty() || text.size() > 9 ||
      !std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; }))
    throw ParseError("", "unknown symbol '" + std::string(text) + "'");
  return Symbol::letter(std::stoi(std::string(text)));
}

Alphabet letters(int k) {
  if (k < 1) throw PreconditionError("alphabet size must be at least 1");
  Alphabet a;
  for (int i = 0; i < k; ++i) a.push_back(Symbol::letter(i));
  return a;
}

std::string to_string(Direction d) { return d == Direction::in ? "in" : "out"; }

bool operator<(const SlotLabel& a, const SlotLabel& b) {
  if (a.port != b.port) return a.port < b.port;
  if (a.dir != b.dir) return a.dir < b.dir;
  return a.point < b.point;
}

std::string to_string(const SlotLabel& s) { return s.port + "@" + to_string(s.point); }

SeedFactor uniform_factor(std::string label, std::size_t n) {
  if (n == 0) throw PreconditionError("uniform factor needs at least one outcome");
  return SeedFactor{std::move(label), std::vector<Rational>(n, Rational(1, static_cast<long long>(n)))};
}

SeedFactor bernoulli_factor(std::string label, const Rational& p_first) {
  if (p_first < 0 || p_first > 1) throw PreconditionError("probability outside [0, 1]");
  return SeedFactor{std::move(label), {p_first, Rational(1) - p_first}};
}

SeedSpace::SeedSpace(std::vector<SeedFactor> factors) : factors_(std::move(factors)) {
  for (const auto& f : factors_) {
    if (f.weights.empty()) throw PreconditionError("seed factor '" + f.label + "' is empty");
    Rational sum = 0;
    for (const auto& w : f.weights) {
      if (w < 0) throw PreconditionError("seed factor '" + f.label + "' has a negative weight");
      sum += w;
    }
    if (sum != 1) throw PreconditionError("weights of seed factor '" + f.label + "' sum to " + to_string(sum));
  }
}

std::uint64_t SeedSpace::size() const {
  std::uint64_t n = 1;
  for (const auto& f : factors_) {
    if (n > (std::uint64_t{1} << 62) / f.weights.size())
      throw BoundExceeded("seed space exceeds 2^62 seeds");
    n *= f.weights.size();
  }
  return n;
}

void SeedSpace::decode(std::uint64_t index, std::span<std::uint32_t> out) const {
  // Last factor varies fastest.
  for (std::size_t k = factors_.size(); k-- > 0;) {
    const std::uint64_t r = factors_[k].weights.size();
    out[k] = static_cast<std::uint32_t>(index % r);
    index /= r;
  }
}

Rational SeedSpace::weight(std::span<const std::uint32_t> digits) const {
  Rational w = 1;
  for (std::size_t k = 0; k < factors_.size(); ++k) {
    w *= factors_[k].weights[digits[k]];
    if (w == 0) break;
  }
  return w;
}

SeedSpace SeedSpace::concat(const SeedSpace& other) const {
  SeedSpace s;
  s.factors_ = factors_;
  s.factors_.insert(s.factors_.end(), other.factors_.begin(), other.factors_.end());
  return s;
}

CausalSystem::CausalSystem(Spec spec)
    : name_(std::move(spec.name)),
      ports_(std::move(spec.ports)),
      seeds_(std::move(spec.seeds)),
      deps_(std::move(spec.deps)),
      react_(std::make_shared<const ReactFn>(std::move(spec.react))),
      passthrough_(spec.passthrough) {
  if (!*react_) throw PreconditionError("system '" + name_ + "' has no reaction");
  index_slots();
  if (deps_.size() != out_slots_.size())
    throw PreconditionError("system '" + name_ + "': dependency list has " + std::to_string(deps_.size()) +
                            " entries for " + std::to_string(out_slots_.size()) + " output slots");
  for (const auto& d : deps_)
    for (std::size_t i : d)
      if (i >= in_slots_.size())
        throw PreconditionError("system '" + name_ + "': dependency on missing input slot " + std::to_string(i));
}

void CausalSystem::index_slots() {
  std::set<std::pair<std::string, Direction>> seen;
  in_slots_.clear();
  out_slots_.clear();
  for (std::size_t p = 0; p < ports_.size(); ++p) {
    const Port& port = ports_[p];
    if (port.name.empty()) throw PreconditionError("system '" + name_ + "' has a port with an empty name");
    if (!seen.insert({port.name, port.dir}).second)
      throw InterfaceError("system '" + name_ + "' declares " + to_string(port.dir) + "-port '" + port.name +
                           "' twice");
    if (port.alphabet.empty()) throw PreconditionError("port '" + port.name + "' has an empty alphabet");
    for (const auto& s : port.alphabet)
      if (s.is_vacuum()) throw PreconditionError("port '" + port.name + "': vacuum is implicit, not a letter");
    for (std::size_t i = 0; i < port.points.size(); ++i)
      for (std::size_t j = i + 1; j < port.points.size(); ++j)
        if (port.points[i] == port.points[j])
          throw PreconditionError("port '" + port.name + "' repeats point " + to_string(port.points[i]));
    auto& slots = port.dir == Direction::in ? in_slots_ : out_slots_;
    for (std::size_t k = 0; k < port.points.size(); ++k) slots.push_back(SlotRef{p, k});
  }
}

SlotLabel CausalSystem::input_label(std::size_t i) const {
  const auto& r = in_slots_.at(i);
  return SlotLabel{ports_[r.port].name, Direction::in, ports_[r.port].points[r.point]};
}

SlotLabel CausalSystem::output_label(std::size_t o) const {
  const auto& r = out_slots_.at(o);
  return SlotLabel{ports_[r.port].name, Direction::out, ports_[r.port].points[r.point]};
}

const SpaceTimePoint& CausalSystem::input_point(std::size_t i) const {
  const auto& r = in_slots_[i];
  return ports_[r.port].points[r.point];
}

const SpaceTimePoint& CausalSystem::output_point(std::size_t o) const {
  const auto& r = out_slots_[o];
  return ports_[r.port].points[r.point];
}

const Alphabet& CausalSystem::input_alphabet(std::size_t i) const { return ports_[in_slots_[i].port].alphabet; }
const Alphabet& CausalSystem::output_alphabet(std::size_t o) const { return ports_[out_slots_[o].port].alphabet; }

const Port* CausalSystem::find_port(const std::string& name, Direction dir) const {
  for (const auto& p : ports_)
    if (p.name == name && p.dir == dir) return &p;
  return nullptr;
}

std::optional<std::size_t> CausalSystem::input_index(const std::string& port, const SpaceTimePoint& p) const {
  for (std::size_t i = 0; i < in_slots_.size(); ++i) {
    const auto& r = in_slots_[i];
    if (ports_[r.port].name == port && ports_[r.port].points[r.point] == p) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> CausalSystem::output_index(const std::string& port, const SpaceTimePoint& p) const {
  for (std::size_t o = 0; o < out_slots_.size(); ++o) {
    const auto& r = out_slots_[o];
    if (ports_[r.port].name == port && ports_[r.port].points[r.point] == p) return o;
  }
  return std::nullopt;
}

std::size_t CausalSystem::input_index(const std::string& port) const {
  for (std::size_t i = 0; i < in_slots_.size(); ++i)
    if (ports_[in_slots_[i].port].name == port) return i;
  throw InterfaceError("system '" + name_ + "' has no input port '" + port + "'");
}

std::size_t CausalSystem::output_index(const std::string& port) const {
  for (std::size_t o = 0; o < out_slots_.size(); ++o)
    if (ports_[out_slots_[o].port].name == port) return o;
  throw InterfaceError("system '" + name_ + "' has no output port '" + port + "'");
}

void CausalSystem::react(std::span<const Symbol> in, std::span<const std::uint32_t> seed,
                         std::span<Symbol> out) const {
  (*react_)(in, seed, out);
}

CausalSystem CausalSystem::renamed(const std::map<std::pair<std::string, Direction>, std::string>& names,
                                   std::string new_name) const {
  std::vector<Port> ports = ports_;
  for (auto& p : ports)
    if (auto it = names.find({p.name, p.dir}); it != names.end()) p.name = it->second;
  return detail::PlanAccess::with_ports(*this, std::move(ports), new_name.empty() ? name_ : std::move(new_name));
}

CausalSystem CausalSystem::with_name(std::string new_name) const {
  CausalSystem s = *this;
  s.name_ = std::move(new_name);
  return s;
}

SystemBuilder::SystemBuilder(std::string name) : name_(std::move(name)) {}

SystemBuilder::PortRef SystemBuilder::input(std::string name, Alphabet alphabet,
                                            std::vector<SpaceTimePoint> points) {
  ports_.push_back(Port{std::move(name), Direction::in, std::move(alphabet), std::move(points)});
  return PortRef{ports_.size() - 1};
}

SystemBuilder::PortRef SystemBuilder::output(std::string name, Alphabet alphabet,
                                             std::vector<SpaceTimePoint> points) {
  ports_.push_back(Port{std::move(name), Direction::out, std::move(alphabet), std::move(points)});
  return PortRef{ports_.size() - 1};
}

std::size_t SystemBuilder::seed(SeedFactor factor) {
  seeds_.push_back(std::move(factor));
  return seeds_.size() - 1;
}

void SystemBuilder::rule(Slot out, std::vector<Slot> deps, Rule rule) {
  if (out.port >= ports_.size() || ports_[out.port].dir != Direction::out)
    throw PreconditionError("builder '" + name_ + "': rule target is not an output port");
  for (const auto& d : deps)
    if (d.port >= ports_.size() || ports_[d.port].dir != Direction::in)
      throw PreconditionError("builder '" + name_ + "': rule dependency is not an input port");
  rules_.push_back(RuleEntry{out, std::move(deps), std::move(rule)});
}

CausalSystem SystemBuilder::build() const {
  // Slot numbering mirrors CausalSystem::index_slots.
  std::vector<std::vector<std::size_t>> in_index(ports_.size()), out_index(ports_.size());
  std::size_t n_in = 0, n_out = 0;
  for (std::size_t p = 0; p < ports_.size(); ++p) {
    auto& idx = ports_[p].dir == Direction::in ? in_index[p] : out_index[p];
    auto& counter = ports_[p].dir == Direction::in ? n_in : n_out;
    for (std::size_t k = 0; k < ports_[p].points.size(); ++k) idx.push_back(counter++);
  }
  auto slot_of = [&](const std::vector<std::vector<std::size_t>>& table, Slot s) {
    if (s.point >= table[s.port].size())
      throw PreconditionError("builder '" + name_ + "': point index out of range on port '" +
                              ports_[s.port].name + "'");
    return table[s.port][s.point];
  };

  struct Compiled {
    std::size_t out;
    std::vector<std::size_t> deps;
    Rule fn;
  };
  std::vector<Compiled> compiled;
  std::vector<std::vector<std::size_t>> deps(n_out);
  std::vector<bool> has_rule(n_out, false);
  for (const auto& r : rules_) {
    Compiled c{slot_of(out_index, r.out), {}, r.fn};
    if (has_rule[c.out])
      throw PreconditionError("builder '" + name_ + "': two rules for one output slot on '" +
                              ports_[r.out.port].name + "'");
    has_rule[c.out] = true;
    for (const auto& d : r.deps) c.deps.push_back(slot_of(in_index, d));
    deps[c.out] = c.deps;
    compiled.push_back(std::move(c));
  }

  auto rules = std::make_shared<const std::vector<Compiled>>(std::move(compiled));
  CausalSystem::Spec spec;
  spec.name = name_;
  spec.ports = ports_;
  spec.seeds = SeedSpace(seeds_);
  spec.deps = std::move(deps);
  spec.passthrough = passthrough_;
  spec.react = [rules](std::span<const Symbol> in, std::span<const std::uint32_t> seed, std::span<Symbol> out) {
    std::fill(out.begin(), out.end(), Symbol::vacuum());
    Symbol buf[16];
    std::vector<Symbol> big;
    for (const auto& r : *rules) {
      std::span<Symbol> vals;
      if (r.deps.size() <= 16) {
        vals = std::span<Symbol>(buf, r.deps.size());
      } else {
        big.resize(r.deps.size());
        vals = big;
      }
      for (std::size_t k = 0; k < r.deps.size(); ++k) vals[k] = in[r.deps[k]];
      out[r.out] = r.fn(vals, seed);
    }
  };
  return CausalSystem(std::move(spec));
}

Rational OutcomeDistribution::total() const {
  Rational t = 0;
  for (const auto& [k, v] : probs) t += v;
  return t;
}

Rational OutcomeDistribution::probability(const std::function<bool(const std::vector<Symbol>&)>& event) const {
  Rational t = 0;
  for (const auto& [k, v] : probs)
    if (event(k)) t += v;
  return t;
}

std::size_t OutcomeDistribution::column(const std::string& port, const SpaceTimePoint& p) const {
  for (std::size_t c = 0; c < labels.size(); ++c)
    if (labels[c].port == port && labels[c].point == p) return c;
  throw InterfaceError("distribution has no slot " + port + "@" + to_string(p));
}

std::size_t OutcomeDistribution::column(const std::string& port) const {
  for (std::size_t c = 0; c < labels.size(); ++c)
    if (labels[c].port == port) return c;
  throw InterfaceError("distribution has no slot on port '" + port + "'");
}

OutcomeDistribution OutcomeDistribution::marginal(const std::vector<std::size_t>& columns) const {
  OutcomeDistribution m;
  for (std::size_t c : columns) m.labels.push_back(labels.at(c));
  for (const auto& [k, v] : probs) {
    std::vector<Symbol> key;
    key.reserve(columns.size());
    for (std::size_t c : columns) key.push_back(k[c]);
    m.probs[key] += v;
  }
  return m;
}

InputAssignment::InputAssignment(const CausalSystem& s)
    : sys_(&s), values_(s.input_count(), Symbol::vacuum()) {}

InputAssignment& InputAssignment::set(const std::string& port, const SpaceTimePoint& p, Symbol v) {
  auto i = sys_->input_index(port, p);
  if (!i) throw InterfaceError("no input slot " + port + "@" + to_string(p));
  values_[*i] = v;
  return *this;
}

InputAssignment& InputAssignment::set(const std::string& port, Symbol v) {
  values_[sys_->input_index(port)] = v;
  return *this;
}

std::uint64_t enumeration_bound() {
  static const std::uint64_t bound = [] {
    if (const char* env = std::getenv("RELCRYPT_MAX_ENUM")) {
      char* end = nullptr;
      unsigned long long v = std::strtoull(env, &end, 10);
      if (end != env && *end == '\0' && v > 0) return static_cast<std::uint64_t>(v);
    }
    return std::uint64_t{1} << 20;
  }();
  return bound;
}

FactorSampler::FactorSampler(const SeedFactor& f) {
  BigInt lcm = 1;
  for (const auto& w : f.weights) {
    BigInt d = boost::multiprecision::denominator(w);
    lcm = lcm / boost::multiprecision::gcd(lcm, d) * d;
  }
  if (lcm > BigInt(std::uint64_t{1} << 62)) {
    for (const auto& w : f.weights) fallback_.push_back(to_double(w));
    return;
  }
  denominator_ = lcm.convert_to<std::uint64_t>();
  std::uint64_t acc = 0;
  for (const auto& w : f.weights) {
    Rational scaled = w * Rational(lcm);
    acc += boost::multiprecision::numerator(scaled).convert_to<std::uint64_t>();
    cumulative_.push_back(acc);
  }
}

}  // namespace relcrypt
