#pragma once

#include "relcrypt/analysis.hpp"
#include "relcrypt/rational.hpp"
#include "relcrypt/spacetime.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace relcrypt::cli {

using Json = nlohmann::ordered_json;

struct AnalysisSettings {
  std::string mode = "exact";  // "exact" or "mc"
  FamilyKind family = FamilyKind::adaptive;
  std::uint64_t n = 10000;
  double delta = 0.05;
  std::uint64_t rng_seed = 1;
};

// "quantity op value"; value is a rational expression over the scalar
// parameters (e.g. "(1+p)/2"), a bool, or a number for float quantities.
struct Assertion {
  std::string quantity;
  std::string op;
  Json value;
  double tol = 1e-9;
  std::string where;
};

struct SweepSpec {
  std::string parameter;
  std::vector<Json> grid;
};

struct Scenario {
  std::string source;  // file name used in diagnostics
  std::string name;
  std::string kind;
  std::map<std::string, SpaceTimePoint> points;
  Json params = Json::object();
  AnalysisSettings analysis;
  std::vector<Assertion> assertions;
  std::optional<SweepSpec> sweep;
  std::string report_path;
  std::string csv_path;
};

std::vector<std::string> scenario_kinds();

// Throws ParseError with "source:line:col" for malformed JSON and
// "source:/json/pointer" for schema errors.
Scenario parse_scenario(const std::string& text, const std::string& source);
Scenario load_scenario(const std::string& path);

using Quantity = std::variant<Rational, std::int64_t, double, bool, std::string>;
std::string render(const Quantity& q);

struct AssertionOutcome {
  Assertion assertion;
  std::string actual;
  std::string expected;
  bool pass = false;
};

struct RunResult {
  Json report;
  std::vector<std::pair<std::string, Quantity>> quantities;
  std::vector<AssertionOutcome> assertions;
  bool pass = true;
  const Quantity* find(const std::string& name) const;
};

// Executes the scenario once with its own parameters. Geometry and interface
// problems surface as PreconditionError / InterfaceError.
RunResult run(const Scenario& s);

// Copy of `s` with params[parameter] replaced.
Scenario with_parameter(const Scenario& s, const std::string& parameter, const Json& value);

struct Column {
  std::string name;
  bool rational;
};
std::vector<Column> csv_columns(const std::string& kind);

struct SweepResult {
  std::string csv;
  std::vector<Json> reports;
  bool pass = true;
};
SweepResult sweep(const Scenario& s, const SweepSpec& spec);

// Single-row CSV of one run (header + row).
std::string csv_of(const Scenario& s, const RunResult& r);

// Rational arithmetic over + - * / and parentheses with named variables.
Rational eval_expression(const std::string& text, const std::map<std::string, Rational>& vars);

}  // namespace relcrypt::cli
