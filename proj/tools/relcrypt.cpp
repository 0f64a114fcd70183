// Command-line front end: run scenarios, sweeps, verifications and attacks.

#include "relcrypt/cli.hpp"
#include "relcrypt/error.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using namespace relcrypt;
using namespace relcrypt::cli;

constexpr int kOk = 0;
constexpr int kAssertion = 1;
constexpr int kParse = 2;
constexpr int kPrecondition = 3;

struct Common {
  std::string scenario;
  std::string out;
  std::string format = "json";
  std::optional<std::uint64_t> mc_n;
  std::optional<double> mc_delta;
  std::optional<std::uint64_t> rng_seed;
};

void add_common(CLI::App* app, Common& c, bool scenario_required) {
  auto* s = app->add_option("--scenario", c.scenario, "scenario JSON file");
  if (scenario_required) s->required();
  app->add_option("--out", c.out, "write the report here instead of stdout");
  app->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app->add_option("--mc-n", c.mc_n, "Monte Carlo samples per branch (enables mc mode)");
  app->add_option("--mc-delta", c.mc_delta, "Hoeffding confidence parameter");
  app->add_option("--rng-seed", c.rng_seed, "seed for Monte Carlo sampling");
}

void apply_overrides(Scenario& s, const Common& c) {
  if (c.mc_n) {
    s.analysis.mode = "mc";
    s.analysis.n = *c.mc_n;
  }
  if (c.mc_delta) {
    if (!(*c.mc_delta > 0 && *c.mc_delta < 1)) throw ParseError("--mc-delta", "must lie in (0, 1)");
    s.analysis.delta = *c.mc_delta;
  }
  if (c.rng_seed) s.analysis.rng_seed = *c.rng_seed;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw PreconditionError("cannot write " + path);
  f << text;
}

int run_one(Scenario s, const Common& c) {
  apply_overrides(s, c);
  if (s.sweep && c.format == "csv") {
    SweepResult r = sweep(s, *s.sweep);
    emit(r.csv, c.out.empty() ? s.csv_path : c.out);
    return r.pass ? kOk : kAssertion;
  }
  RunResult r = run(s);
  if (c.format == "csv") {
    emit(csv_of(s, r), c.out.empty() ? s.csv_path : c.out);
  } else {
    emit(r.report.dump(2) + "\n", c.out.empty() ? s.report_path : c.out);
    if (s.sweep && !s.csv_path.empty() && c.out.empty()) emit(sweep(s, *s.sweep).csv, s.csv_path);
  }
  return r.pass ? kOk : kAssertion;
}

std::vector<Json> split_grid(const std::string& text) {
  std::vector<Json> grid;
  std::string item;
  for (char ch : text + ",") {
    if (ch == ',') {
      if (!item.empty()) grid.emplace_back(item);
      item.clear();
    } else if (ch != ' ') {
      item += ch;
    }
  }
  return grid;
}

Scenario inline_scenario(const std::string& name, const std::string& kind, Json params) {
  Scenario s;
  s.source = "<" + name + ">";
  s.name = name;
  s.kind = kind;
  s.params = std::move(params);
  return s;
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition error: " << e.what() << "\n";
    return kPrecondition;
  } catch (const InterfaceError& e) {
    std::cerr << "interface error: " << e.what() << "\n";
    return kPrecondition;
  } catch (const BoundExceeded& e) {
    std::cerr << "enumeration bound exceeded: " << e.what() << "\n";
    return kPrecondition;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kPrecondition;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact and sampled analysis of relativistic two-party resources"};
  app.require_subcommand(1);

  Common run_opts;
  auto* run_cmd = app.add_subcommand("run", "run a scenario and report");
  add_common(run_cmd, run_opts, true);

  Common sweep_opts;
  sweep_opts.format = "csv";
  std::string parameter;
  std::optional<std::string> grid;
  auto* sweep_cmd = app.add_subcommand("sweep", "run a scenario over a parameter grid, CSV output");
  add_common(sweep_cmd, sweep_opts, true);
  sweep_cmd->add_option("--parameter", parameter, "parameter to vary (defaults to the scenario's sweep)");
  sweep_cmd->add_option("--grid", grid, "comma-separated values; empty for a header-only CSV");

  auto* verify = app.add_subcommand("verify", "built-in verifications");
  verify->require_subcommand(1);
  Common vcaus, vcuts, vcf, vepr;
  auto* v_causality = verify->add_subcommand("causality", "validate every system of a construction");
  add_common(v_causality, vcaus, false);
  auto* v_cuts = verify->add_subcommand("cuts", "cuts, causality functions and CD consistency");
  add_common(v_cuts, vcuts, false);
  auto* v_cf = verify->add_subcommand("construct-cf", "coin flip from a channel with delay");
  add_common(v_cf, vcf, false);
  int dim = 2;
  int taus = 10;
  auto* v_epr = verify->add_subcommand("epr-distinguisher", "Bell-projector test against replacement channels");
  add_common(v_epr, vepr, false);
  v_epr->add_option("--dim", dim, "local dimension")->check(CLI::Range(1, 8));
  v_epr->add_option("--taus", taus, "number of random replacement states")->check(CLI::NonNegativeNumber);

  auto* attack = app.add_subcommand("attack", "impossibility attacks");
  attack->require_subcommand(1);
  Common amitm, adelay;
  std::string p = "0";
  std::optional<std::string> step;
  bool b_feeds_bp = false;
  auto* a_mitm = attack->add_subcommand("mitm", "man-in-the-middle on two biased coin flips");
  add_common(a_mitm, amitm, false);
  a_mitm->add_option("--p", p, "bias probability");
  a_mitm->add_option("--sweep", step, "sweep p over 0, step, ..., 1 (CSV)");
  a_mitm->add_flag("--b-feeds-bp", b_feeds_bp, "let the second injected bit read the first");
  int alphabet = 2;
  auto* a_delay = attack->add_subcommand("delay-extension", "blocked composition against a chained channel");
  add_common(a_delay, adelay, false);
  a_delay->add_option("--alphabet", alphabet, "message alphabet size")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParse;
  }

  auto scenario_or = [](const Common& c, const std::string& kind, Json params) {
    if (!c.scenario.empty()) return load_scenario(c.scenario);
    return inline_scenario(kind, kind, std::move(params));
  };

  return guarded([&]() -> int {
    if (*run_cmd) return run_one(load_scenario(run_opts.scenario), run_opts);
    if (*sweep_cmd) {
      Scenario s = load_scenario(sweep_opts.scenario);
      apply_overrides(s, sweep_opts);
      SweepSpec spec = s.sweep.value_or(SweepSpec{});
      if (!parameter.empty()) spec.parameter = parameter;
      if (grid) spec.grid = split_grid(*grid);
      if (spec.parameter.empty()) throw ParseError(s.source, "no sweep parameter given");
      SweepResult r = sweep(s, spec);
      if (sweep_opts.format == "json") {
        emit(Json(r.reports).dump(2) + "\n", sweep_opts.out);
      } else {
        emit(r.csv, sweep_opts.out.empty() ? s.csv_path : sweep_opts.out);
      }
      return r.pass ? kOk : kAssertion;
    }
    if (*v_causality) {
      Scenario s = scenario_or(vcaus, "causality", Json::object());
      if (s.kind != "causality") {
        Json params = s.params;
        params["target"] = s.kind;
        s = inline_scenario(s.name, "causality", params);
        s.points = load_scenario(vcaus.scenario).points;
      }
      return run_one(s, vcaus);
    }
    if (*v_cuts) {
      Json params{{"points", Json::array({Json::array({0, 0}), Json::array({1, 0}), Json::array({3, 0}),
                                          Json::array({4, 0})})},
                  {"cd", Json{{"A", "p0"}, {"B", "p3"}, {"alphabets", Json::array({2, 3, 4})}}}};
      return run_one(scenario_or(vcuts, "cuts", params), vcuts);
    }
    if (*v_cf) return run_one(scenario_or(vcf, "construct-cf", Json::object()), vcf);
    if (*v_epr) return run_one(scenario_or(vepr, "epr", Json{{"dim", dim}, {"taus", taus}}), vepr);
    if (*a_mitm) {
      Scenario s = scenario_or(amitm, "mitm", Json{{"p", p}, {"b_feeds_bp", b_feeds_bp}});
      if (step) {
        const Rational st = parse_rational(*step);
        if (st <= 0 || st > 1) throw ParseError("--sweep", "step must lie in (0, 1]");
        SweepSpec spec{"p", {}};
        for (Rational x = 0; x <= 1; x += st) spec.grid.emplace_back(to_string(x));
        s.sweep = spec;
        if (amitm.format == "json" && a_mitm->count("--format") == 0) amitm.format = "csv";
      }
      return run_one(s, amitm);
    }
    if (*a_delay) return run_one(scenario_or(adelay, "delay-extension", Json{{"alphabet", alphabet}}), adelay);
    return kParse;
  });
}
