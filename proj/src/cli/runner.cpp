#include "relcrypt/adversary.hpp"
#include "relcrypt/cli.hpp"
#include "relcrypt/cuts.hpp"
#include "relcrypt/error.hpp"
#include "relcrypt/qsmall.hpp"
#include "scenario_io.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace relcrypt::cli {

using detail::Cursor;

std::string render(const Quantity& q) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Rational>) {
          return to_string(v);
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, double>) {
          std::ostringstream o;
          o << std::setprecision(12) << v;
          return o.str();
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else {
          return v;
        }
      },
      q);
}

const Quantity* RunResult::find(const std::string& name) const {
  for (const auto& [k, v] : quantities)
    if (k == name) return &v;
  return nullptr;
}

namespace {

Json to_json(const Quantity& q) {
  return std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Rational>) return to_string(v);
        else return v;
      },
      q);
}

Json point_json(const SpaceTimePoint& p) { return to_string(p); }

struct Ctx {
  const Scenario& s;
  Cursor params;
  RunResult out;
  Json details = Json::object();

  void add(const std::string& name, Quantity q) { out.quantities.emplace_back(name, std::move(q)); }

  std::optional<Cursor> opt(const std::string& key) const { return params.get(key); }
  SpaceTimePoint point(const std::string& key, const SpaceTimePoint& def) const {
    auto c = opt(key);
    return c ? c->point() : def;
  }
  Rational rational(const std::string& key, const Rational& def) const {
    auto c = opt(key);
    return c ? c->rational() : def;
  }
  long long integer(const std::string& key, long long def) const {
    auto c = opt(key);
    return c ? c->integer() : def;
  }
  bool boolean(const std::string& key, bool def) const {
    auto c = opt(key);
    return c ? c->boolean() : def;
  }
  std::string string(const std::string& key, const std::string& def) const {
    auto c = opt(key);
    return c ? c->string() : def;
  }
};

CDSpec read_cd(const Cursor& c, CDSpec def) {
  if (auto v = c.get("P")) def.P = v->point();
  if (auto v = c.get("Pp")) def.Pp = v->point();
  if (auto v = c.get("Qp")) def.Qp = v->point();
  if (auto v = c.get("Q")) def.Q = v->point();
  if (auto v = c.get("alphabet")) {
    def.alphabet = static_cast<int>(v->integer());
    if (def.alphabet < 1) v->fail("alphabet must be at least 1");
  }
  if (auto v = c.get("label")) def.label = v->string();
  return def;
}

Json cd_json(const CDSpec& cd) {
  return Json{{"label", cd.label},          {"P", point_json(cd.P)}, {"Pp", point_json(cd.Pp)},
              {"Qp", point_json(cd.Qp)},    {"Q", point_json(cd.Q)}, {"alphabet", cd.alphabet}};
}

CoinFlipGeometry read_cf_geometry(const Ctx& c) {
  const CoinFlipGeometry def = canonical_cf_geometry();
  CDSpec cd = def.cd;
  if (auto v = c.opt("cd")) cd = read_cd(*v, cd);
  return make_cf_geometry(cd, c.point("meet", def.meet), c.rational("eps", def.eps));
}

AbortFlipGeometry read_abort_geometry(const Ctx& c) {
  const AbortFlipGeometry def = canonical_abort_geometry();
  CDAbortSpec cd = def.cd;
  if (auto v = c.opt("cd")) cd.cd = read_cd(*v, cd.cd);
  cd.R = c.point("R", cd.R);
  return make_abort_geometry(cd, c.point("meet", def.meet), c.rational("eps", def.eps));
}

void analyze(Ctx& c, const Construction& con, const std::string& prefix = "") {
  const DistinguisherFamily family{c.s.analysis.family};
  for (const auto& k : con.cases) {
    SupResult r = advantage_sup(k.real, k.ideal, family);
    const bool causal = validate_causality(k.real).pass && validate_causality(k.ideal).pass;
    c.add(prefix + k.label + ".advantage", r.advantage);
    c.add(prefix + k.label + ".causal", causal);
    c.details[prefix + k.label] = Json{{"real", k.real.name()},
                                       {"ideal", k.ideal.name()},
                                       {"family", to_string(family.kind)},
                                       {"strategies", r.strategies}};
  }
}

void run_construct_cf(Ctx& c) {
  const CoinFlipGeometry g = read_cf_geometry(c);
  c.details["geometry"] = Json{{"cd", cd_json(g.cd)},
                               {"meet", point_json(g.meet)},
                               {"alice_out", point_json(g.alice_out)},
                               {"bob_out", point_json(g.bob_out)},
                               {"meet_in_trusted_region", diamond_contains(trusted_region(g.cd), g.meet)}};
  analyze(c, construct_cf_from_cd(g, c.boolean("require_trusted_meet", true)));
}

void run_construct_cf_unfair(Ctx& c) { analyze(c, construct_cf_unfair_from_cd_abort(read_abort_geometry(c))); }

void run_construct_cf_half(Ctx& c) {
  const AbortFlipGeometry g = read_abort_geometry(c);
  UnfairToBiased u = construct_cf_half_from_unfair(unfair_cf_spec(g), g.eps);
  analyze(c, u.construction);
  c.add("abort_agreement", u.abort_agreement);
}

void run_construct_cf_from_abort(Ctx& c) {
  const AbortFlipGeometry g = read_abort_geometry(c);
  analyze(c, construct_cf_unfair_from_cd_abort(g), "layer_uf.");
  UnfairToBiased u = construct_cf_half_from_unfair(unfair_cf_spec(g), g.eps);
  analyze(c, u.construction, "layer_half.");

  std::vector<CdAbortCandidate> candidates;
  if (auto list = c.opt("candidates")) {
    if (!list->node->is_array()) list->fail("expected an array of candidate names");
    for (std::size_t i = 0; i < list->node->size(); ++i) {
      const std::string name = (*list)[i].string();
      if (name == "direct") candidates.push_back(cd_abort_candidate_direct(g));
      else if (name == "silent") candidates.push_back(cd_abort_candidate_silent(g));
      else (*list)[i].fail("unknown candidate '" + name + "'");
    }
  } else {
    candidates = bundled_cd_abort_candidates(g);
  }

  const Rational bound(1, 12);
  bool all = true;
  for (const auto& cand : candidates) {
    CfCandidate stacked = stack_to_half_coin(cand, g);
    TriangleChain chain = impossibility_chain(stacked);
    TriangleReport r = triangle_decompose(equality_distinguisher(stacked.cf.alice_out, stacked.cf.bob_out), chain);
    const Rational worst = std::max({r.honest, r.dishonest_A, r.dishonest_B});
    const std::string n = cand.name + ".";
    c.add(n + "composite", r.composite);
    c.add(n + "honest", r.honest);
    c.add(n + "dishonest_A", r.dishonest_A);
    c.add(n + "dishonest_B", r.dishonest_B);
    c.add(n + "worst", worst);
    c.add(n + "contractivity", r.contractivity_consistent);
    c.details[cand.name] = Json{{"worst_case", r.worst_case}, {"threshold", to_string(r.threshold)}};
    all = all && r.certifies && worst >= bound;
  }
  c.add("bound", bound);
  c.add("certified", all);
}

void run_blum(Ctx& c) {
  BlumGeometry g = canonical_blum_geometry();
  g.bc.commit = c.point("commit", g.bc.commit);
  g.bc.notify = c.point("notify", g.bc.notify);
  g.announce = c.point("announce", g.announce);
  g.bc.open = c.point("open", g.bc.open);
  g.bc.reveal = c.point("reveal", g.bc.reveal);
  g.alice_out = c.point("alice_out", g.alice_out);
  g.bob_out = c.point("bob_out", g.bob_out);
  BlumReport r = blum_cf_from_bc(g);
  c.add("honest_agreement", r.honest_agreement);
  c.add("refuse_agreement", r.refuse_agreement);
  c.add("bob_max_bias", r.bob_max_bias);
}

void run_mitm(Ctx& c) {
  const Rational p = c.rational("p", 0);
  if (p < 0 || p > 1) c.params["p"].fail("p must lie in [0, 1]");
  MitmGeometry g = canonical_mitm_geometry();
  g.P1 = c.point("P1", g.P1);
  g.P2 = c.point("P2", g.P2);
  g.P3 = c.point("P3", g.P3);
  g.P4 = c.point("P4", g.P4);
  g.PA = c.point("PA", g.PA);
  g.PB = c.point("PB", g.PB);
  const bool b_feeds_bp = c.boolean("b_feeds_bp", false);
  const Rational claimed = c.rational("claimed_epsilon", 0);

  MitmOptimum best = mitm_optimum(p, b_feeds_bp, g);
  const MitmStrategy copy = MitmStrategy::copy_c();
  const CausalSystem attack = mitm_composite(p, copy, g);
  const CausalSystem ideal = make_cf(mitm_cf_spec(p, g)).honest;
  const Distinguisher d = equality_distinguisher(g.PA, g.PB);
  const Rational advantage = advantage_exact(d, attack, ideal);
  const Rational bound = advantage / 3;

  c.add("agreement", mitm_agreement(p, copy, g));
  c.add("advantage", advantage);
  c.add("bound", bound);
  c.add("bound_exceeded", bound > claimed);
  // The exhaustive optimum over the dependency graph; the equality
  // distinguisher's advantage against it is 1 - optimum.
  c.add("optimum_agreement", best.best);
  c.add("optimum_bound", (Rational(1) - best.best) / 3);
  c.add("strategies", static_cast<std::int64_t>(best.strategies));
  c.details["optimum_strategy"] = best.argmax.describe();
  c.details["claimed_epsilon"] = to_string(claimed);

  if (c.s.analysis.mode == "mc") {
    McEstimate e = advantage_mc(d, attack, ideal, c.s.analysis.n, c.s.analysis.delta, c.s.analysis.rng_seed);
    c.add("mc.estimate", e.estimate);
    c.add("mc.half_width", e.half_width);
    c.add("mc.within", std::abs(e.estimate - to_double(advantage)) <= e.half_width);
    c.details["mc"] = Json{{"n", e.n}, {"delta", e.delta}, {"rng_seed", c.s.analysis.rng_seed},
                           {"p_real", e.p_real}, {"p_ideal", e.p_ideal}};
  }
}

void run_delay_extension(Ctx& c) {
  const int k = static_cast<int>(c.integer("alphabet", 2));
  if (k < 1) c.params["alphabet"].fail("alphabet must be at least 1");
  ChainGeometry g = canonical_chain_geometry(k);
  if (auto geo = c.opt("geometry")) {
    g.claimed = read_cd((*geo)["claimed"], g.claimed);
    g.first = read_cd((*geo)["first"], g.first);
    g.second = read_cd((*geo)["second"], g.second);
    g.relay = (*geo)["relay"].point();
  }
  ChannelProtocol proto = naive_chain_protocol(g);
  proto.abort_channels = c.boolean("abort_channels", false);
  const Rational claimed = c.rational("claimed_epsilon", 0);

  DelayExtensionReport r = delay_extension_attack(proto);
  c.add("applicable", r.applicable);
  c.add("advantage", r.advantage);
  c.add("bound", r.bound);
  c.add("bound_exceeded", r.applicable && r.bound > claimed);
  c.add("expected", r.applicable ? Rational(1) - Rational(1, k) : Rational(0));
  Json containment = Json::object();
  for (const auto& ch : proto.channels)
    containment[ch.label] = diamond_subset(trusted_region(ch), trusted_region(proto.claimed));
  c.details["claimed"] = cd_json(proto.claimed);
  c.details["claimed_inside_channel"] = containment;
  c.details["reason"] = r.reason;
  c.details["blocked"] = r.blocked;
}

void run_causality(Ctx& c) {
  const std::string target = c.string("target", "construct-cf");
  std::vector<ConstructionCase> cases;
  if (target == "construct-cf") {
    cases = construct_cf_from_cd(read_cf_geometry(c), c.boolean("require_trusted_meet", true)).cases;
  } else if (target == "construct-cf-unfair") {
    cases = construct_cf_unfair_from_cd_abort(read_abort_geometry(c)).cases;
  } else if (target == "construct-cf-half") {
    const AbortFlipGeometry g = read_abort_geometry(c);
    cases = construct_cf_half_from_unfair(unfair_cf_spec(g), g.eps).construction.cases;
  } else {
    c.params["target"].fail("unknown target '" + target + "'");
  }
  std::int64_t systems = 0, violations = 0;
  Json found = Json::array();
  for (const auto& k : cases) {
    for (const CausalSystem* s : {&k.real, &k.ideal}) {
      CausalityReport r = validate_causality(*s);
      ++systems;
      violations += static_cast<std::int64_t>(r.violations.size());
      for (const auto& v : r.violations)
        found.push_back(Json{{"case", k.label}, {"system", s->name()}, {"kind", to_string(v.kind)},
                             {"output", to_string(v.output)}, {"detail", v.detail}});
    }
  }
  c.add("systems", systems);
  c.add("violations", violations);
  c.add("pass", violations == 0);
  c.details["violations"] = found;
}

void run_cuts(Ctx& c) {
  std::vector<std::string> labels;
  std::vector<SpaceTimePoint> pts;
  if (auto list = c.opt("points")) {
    if (!list->node->is_array()) list->fail("expected an array of point names");
    for (std::size_t i = 0; i < list->node->size(); ++i) {
      Cursor e = (*list)[i];
      labels.push_back(e.node->is_string() ? e.string() : "p" + std::to_string(i));
      pts.push_back(e.point());
    }
  } else {
    for (const auto& [name, p] : c.s.points) {
      labels.push_back(name);
      pts.push_back(p);
    }
  }
  if (pts.empty()) c.params.fail("cuts scenario needs at least one point");
  FinitePoset poset = FinitePoset::from_points(labels, pts);
  const auto cuts = all_cuts(poset);
  c.add("cuts", static_cast<std::int64_t>(cuts.size()));
  c.add("cuts.serial_matches_parallel", kernels::all_cuts_serial(poset) == kernels::all_cuts_parallel(poset));

  auto report = [&](const std::string& name, const CausalityFunctionReport& r) {
    c.add(name + ".pass", r.pass);
    Json conds = Json::array();
    for (const auto& cond : r.conditions) {
      Json cj{{"pass", cond.pass}, {"message", cond.message}};
      Json ce = Json::array();
      for (const auto& cut : cond.counterexample) ce.push_back(poset.describe(cut));
      cj["counterexample"] = ce;
      conds.push_back(cj);
    }
    c.details[name] = conds;
  };
  report("chi_strict_past", validate_causality_function(poset, strict_past_function(poset)));
  report("chi_identity", validate_causality_function(poset, [](const Cut& x) { return x; }));

  if (auto cd = c.opt("cd")) {
    auto index = [&](const Cursor& e) {
      auto i = poset.index_of(e.string());
      if (!i) e.fail("point '" + e.string() + "' is not in the poset");
      return *i;
    };
    const std::size_t a = index((*cd)["A"]), b = index((*cd)["B"]);
    std::vector<int> alphabets{2};
    if (auto al = cd->get("alphabets")) {
      alphabets.clear();
      for (std::size_t i = 0; i < al->node->size(); ++i) alphabets.push_back(static_cast<int>((*al)[i].integer()));
    }
    bool pass = true;
    std::int64_t pairs = 0;
    Json per = Json::object();
    for (int k : alphabets) {
      MutualConsistencyReport r = verify_cd_mutual_consistency(poset, a, b, k, canonical_cd_map(a, b));
      pass = pass && r.pass;
      pairs += static_cast<std::int64_t>(r.pairs_checked);
      per[std::to_string(k)] = Json{{"pass", r.pass}, {"pairs_checked", r.pairs_checked}, {"message", r.message}};
    }
    c.add("mutual_consistency.pass", pass);
    c.add("mutual_consistency.pairs", pairs);
    c.details["mutual_consistency"] = per;
  }
}

void run_epr(Ctx& c) {
  const int d = static_cast<int>(c.integer("dim", 2));
  if (d < 1 || d > q::kMaxDim) c.params["dim"].fail("dim must lie in [1, 8]");
  const long long taus = c.integer("taus", 10);
  const auto seed = static_cast<std::uint64_t>(c.integer("tau_seed", 1));
  double worst_dev = 0, min_advantage = 1, min_success = 1;
  const double target = 1.0 / (static_cast<double>(d) * d);
  Json per = Json::array();
  for (long long i = 0; i < taus; ++i) {
    q::EprDistinguisherResult r = q::epr_distinguisher(d, q::random_state(d, seed + static_cast<std::uint64_t>(i)));
    worst_dev = std::max(worst_dev, std::abs(r.accept_replace - target));
    min_advantage = std::min(min_advantage, r.advantage);
    min_success = std::min(min_success, r.uniform_success);
    per.push_back(r.accept_replace);
  }
  c.add("accept_identity", q::epr_test_success(q::identity_channel(d)));
  c.add("accept_depolarizing", q::epr_test_success(q::depolarizing_channel(d)));
  c.add("accept_replace_max_deviation", worst_dev);
  c.add("advantage", taus > 0 ? min_advantage : 1 - target);
  c.add("uniform_success", taus > 0 ? min_success : 1 - target / 2);
  c.details["accept_replace"] = per;
}

std::map<std::string, Rational> scalar_params(const Scenario& s) {
  std::map<std::string, Rational> vars;
  for (const auto& [k, v] : s.params.items()) {
    try {
      if (v.is_number_integer()) vars[k] = Rational(v.get<long long>());
      else if (v.is_number()) vars[k] = parse_rational(v.dump());
      else if (v.is_string()) vars[k] = parse_rational(v.get<std::string>());
    } catch (const ParseError&) {
    }
  }
  return vars;
}

template <class T>
bool compare(const T& a, const std::string& op, const T& b) {
  if (op == "==") return a == b;
  if (op == "!=") return a != b;
  if (op == "<") return a < b;
  if (op == "<=") return a <= b;
  if (op == ">") return a > b;
  return a >= b;
}

AssertionOutcome check(const Assertion& a, const RunResult& r, const std::map<std::string, Rational>& vars) {
  AssertionOutcome o{a, "", "", false};
  const Quantity* q = r.find(a.quantity);
  if (!q) throw ParseError(a.where + "/quantity", "unknown quantity '" + a.quantity + "'");
  o.actual = render(*q);
  auto expected_rational = [&]() {
    if (a.value.is_number_integer()) return Rational(a.value.get<long long>());
    if (a.value.is_number()) return parse_rational(a.value.dump());
    if (a.value.is_string()) {
      try {
        return eval_expression(a.value.get<std::string>(), vars);
      } catch (const ParseError& e) {
        throw ParseError(a.where + "/value", e.what());
      }
    }
    throw ParseError(a.where + "/value", "expected a number or an expression");
  };
  if (const auto* b = std::get_if<bool>(q)) {
    if (!a.value.is_boolean()) throw ParseError(a.where + "/value", "expected true or false");
    if (a.op != "==" && a.op != "!=") throw ParseError(a.where + "/op", "boolean quantities support == and !=");
    o.expected = a.value.get<bool>() ? "true" : "false";
    o.pass = compare(*b, a.op, a.value.get<bool>());
  } else if (const auto* s = std::get_if<std::string>(q)) {
    if (!a.value.is_string()) throw ParseError(a.where + "/value", "expected a string");
    if (a.op != "==" && a.op != "!=") throw ParseError(a.where + "/op", "string quantities support == and !=");
    o.expected = a.value.get<std::string>();
    o.pass = compare(*s, a.op, o.expected);
  } else if (const auto* x = std::get_if<Rational>(q)) {
    const Rational e = expected_rational();
    o.expected = to_string(e);
    o.pass = a.op == "approx" ? to_double(abs(*x - e)) <= a.tol : compare(*x, a.op, e);
  } else {
    const double v = std::holds_alternative<double>(*q) ? std::get<double>(*q)
                                                        : static_cast<double>(std::get<std::int64_t>(*q));
    const double e = to_double(expected_rational());
    o.expected = render(e);
    if (a.op == "approx" || a.op == "==") o.pass = std::abs(v - e) <= a.tol;
    else if (a.op == "!=") o.pass = std::abs(v - e) > a.tol;
    else o.pass = compare(v, a.op, e);
  }
  return o;
}

std::string family_name(FamilyKind k) { return to_string(k); }

}  // namespace

RunResult run(const Scenario& s) {
  Ctx c{s, Cursor{s.source, "/params", &s.params, &s.points}, {}};
  if (s.analysis.mode == "mc" && s.kind != "mitm")
    throw PreconditionError("Monte Carlo analysis is available for mitm scenarios only");
  if (s.kind == "construct-cf") run_construct_cf(c);
  else if (s.kind == "construct-cf-unfair") run_construct_cf_unfair(c);
  else if (s.kind == "construct-cf-half") run_construct_cf_half(c);
  else if (s.kind == "construct-cf-from-abort") run_construct_cf_from_abort(c);
  else if (s.kind == "blum") run_blum(c);
  else if (s.kind == "mitm") run_mitm(c);
  else if (s.kind == "delay-extension") run_delay_extension(c);
  else if (s.kind == "causality") run_causality(c);
  else if (s.kind == "cuts") run_cuts(c);
  else if (s.kind == "epr") run_epr(c);
  else throw ParseError(s.source + ":/kind", "unknown kind '" + s.kind + "'");

  const auto vars = scalar_params(s);
  for (const auto& a : s.assertions) {
    c.out.assertions.push_back(check(a, c.out, vars));
    c.out.pass = c.out.pass && c.out.assertions.back().pass;
  }

  Json results = Json::object();
  for (const auto& [k, v] : c.out.quantities) results[k] = to_json(v);
  Json asserts = Json::array();
  for (const auto& o : c.out.assertions)
    asserts.push_back(Json{{"quantity", o.assertion.quantity},
                           {"op", o.assertion.op},
                           {"expected", o.expected},
                           {"actual", o.actual},
                           {"pass", o.pass}});
  Json analysis{{"mode", s.analysis.mode}, {"family", family_name(s.analysis.family)}};
  if (s.analysis.mode == "mc")
    analysis.update(Json{{"n", s.analysis.n}, {"delta", s.analysis.delta}, {"rng_seed", s.analysis.rng_seed}});
  c.out.report = Json{{"scenario", s.name}, {"kind", s.kind},       {"params", s.params},
                      {"analysis", analysis}, {"results", results}, {"details", c.details},
                      {"assertions", asserts}, {"pass", c.out.pass}};
  return std::move(c.out);
}

Scenario with_parameter(const Scenario& s, const std::string& parameter, const Json& value) {
  Scenario copy = s;
  copy.params[parameter] = value;
  return copy;
}

std::vector<Column> csv_columns(const std::string& kind) {
  if (kind == "mitm") return {{"agreement", true}, {"advantage", true}, {"bound", true}};
  if (kind == "delay-extension") return {{"applicable", false}, {"advantage", true}, {"bound", true}};
  if (kind == "construct-cf" || kind == "construct-cf-unfair")
    return {{"honest.advantage", true}, {"dishonest_A.advantage", true}, {"dishonest_B.advantage", true}};
  if (kind == "construct-cf-half")
    return {{"honest.advantage", true},
            {"dishonest_A.advantage", true},
            {"dishonest_B.advantage", true},
            {"abort_agreement", true}};
  if (kind == "construct-cf-from-abort") return {{"bound", true}, {"certified", false}};
  if (kind == "blum") return {{"honest_agreement", true}, {"refuse_agreement", true}, {"bob_max_bias", true}};
  if (kind == "causality") return {{"systems", false}, {"violations", false}};
  if (kind == "cuts") return {{"cuts", false}, {"chi_strict_past.pass", false}, {"chi_identity.pass", false}};
  if (kind == "epr")
    return {{"accept_identity", false}, {"accept_replace_max_deviation", false}, {"advantage", false}};
  throw PreconditionError("no CSV layout for kind '" + kind + "'");
}

namespace {

std::string csv_header(const std::string& first, const std::vector<Column>& cols) {
  std::string h = first;
  for (const auto& c : cols) h += "," + c.name;
  h += ",pass";
  for (const auto& c : cols)
    if (c.rational) h += "," + c.name + "_float";
  return h + "\n";
}

std::string csv_row(const std::string& first, const std::vector<Column>& cols, const RunResult& r) {
  std::string row = first;
  for (const auto& c : cols) {
    const Quantity* q = r.find(c.name);
    row += "," + (q ? render(*q) : std::string());
  }
  row += std::string(",") + (r.pass ? "true" : "false");
  for (const auto& c : cols) {
    if (!c.rational) continue;
    const Quantity* q = r.find(c.name);
    row += "," + (q ? render(to_double(std::get<Rational>(*q))) : std::string());
  }
  return row + "\n";
}

std::string grid_text(const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

}  // namespace

SweepResult sweep(const Scenario& s, const SweepSpec& spec) {
  const auto cols = csv_columns(s.kind);
  SweepResult out;
  out.csv = csv_header(spec.parameter, cols);
  // Runs are independent; each builds its own systems.
  std::vector<RunResult> results(spec.grid.size());
  std::vector<std::exception_ptr> errors(spec.grid.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t i = 0; i < spec.grid.size(); ++i) {
    try {
      results[i] = run(with_parameter(s, spec.parameter, spec.grid[i]));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (std::size_t i = 0; i < spec.grid.size(); ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.csv += csv_row(grid_text(spec.grid[i]), cols, results[i]);
    out.reports.push_back(results[i].report);
    out.pass = out.pass && results[i].pass;
  }
  return out;
}

std::string csv_of(const Scenario& s, const RunResult& r) {
  const auto cols = csv_columns(s.kind);
  return csv_header("scenario", cols) + csv_row(s.name, cols, r);
}

}  // namespace relcrypt::cli
