#include "relcrypt/cli.hpp"

#include "relcrypt/error.hpp"
#include "scenario_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace relcrypt::cli {

std::vector<std::string> scenario_kinds() {
  return {"construct-cf",   "construct-cf-unfair", "construct-cf-half", "construct-cf-from-abort", "blum",
          "mitm",           "delay-extension",     "causality",         "cuts",                    "epr"};
}

namespace detail {

std::string Cursor::path() const { return source + ":" + (pointer.empty() ? std::string("/") : pointer); }

Cursor Cursor::operator[](const std::string& key) const {
  if (!node->is_object()) fail("expected an object");
  auto it = node->find(key);
  if (it == node->end()) fail("missing key '" + key + "'");
  return Cursor{source, pointer + "/" + key, &*it, points};
}

Cursor Cursor::operator[](std::size_t i) const {
  if (!node->is_array()) fail("expected an array");
  if (i >= node->size()) fail("index " + std::to_string(i) + " out of range");
  return Cursor{source, pointer + "/" + std::to_string(i), &(*node)[i], points};
}

bool Cursor::has(const std::string& key) const { return node->is_object() && node->contains(key); }

std::optional<Cursor> Cursor::get(const std::string& key) const {
  if (!has(key)) return std::nullopt;
  return (*this)[key];
}

[[noreturn]] void Cursor::fail(const std::string& what) const { throw ParseError(path(), what); }

std::string Cursor::string() const {
  if (!node->is_string()) fail("expected a string");
  return node->get<std::string>();
}

bool Cursor::boolean() const {
  if (!node->is_boolean()) fail("expected true or false");
  return node->get<bool>();
}

Rational Cursor::rational() const {
  try {
    if (node->is_number_integer()) return Rational(node->get<long long>());
    if (node->is_number()) return parse_rational(node->dump());
    if (node->is_string()) return parse_rational(node->get<std::string>());
  } catch (const ParseError& e) {
    fail(e.what());
  }
  fail("expected a number or a rational string");
}

long long Cursor::integer() const {
  Rational r = rational();
  if (denominator(r) != 1) fail("expected an integer");
  return static_cast<long long>(numerator(r));
}

double Cursor::real() const {
  if (node->is_number()) return node->get<double>();
  return to_double(rational());
}

SpaceTimePoint Cursor::point() const {
  if (node->is_string()) {
    const std::string name = node->get<std::string>();
    if (points) {
      auto it = points->find(name);
      if (it != points->end()) return it->second;
    }
    fail("unknown point '" + name + "'");
  }
  if (!node->is_array()) fail("expected a point name or a coordinate array [t, x...]");
  if (node->empty() || node->size() > 4)
    fail("a point has a time and at most 3 spatial coordinates");
  SpaceTimePoint p;
  p.t = (*this)[0].rational();
  for (std::size_t i = 1; i < node->size(); ++i) p.x[i - 1] = (*this)[i].rational();
  return p;
}

}  // namespace detail

namespace {

using detail::Cursor;

std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

FamilyKind parse_family(const Cursor& c) {
  const std::string s = c.string();
  if (s == "non_adaptive") return FamilyKind::non_adaptive;
  if (s == "adaptive") return FamilyKind::adaptive;
  if (s == "causal_enumerated") return FamilyKind::causal_enumerated;
  c.fail("unknown distinguisher family '" + s + "'");
}

const std::vector<std::string> kOps{"==", "!=", "<", "<=", ">", ">=", "approx"};

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& source) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    auto [line, col] = line_col(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError(source + ":" + std::to_string(line) + ":" + std::to_string(col), "malformed JSON");
  }
  Scenario s;
  s.source = source;
  Cursor root{source, "", &doc, nullptr};
  if (!doc.is_object()) root.fail("scenario must be a JSON object");

  s.name = root["name"].string();
  s.kind = root["kind"].string();
  const auto kinds = scenario_kinds();
  if (std::find(kinds.begin(), kinds.end(), s.kind) == kinds.end()) root["kind"].fail("unknown kind '" + s.kind + "'");

  if (auto pts = root.get("points")) {
    if (!pts->node->is_object()) pts->fail("expected an object of named points");
    for (const auto& [name, _] : pts->node->items()) s.points.emplace(name, (*pts)[name].point());
  }
  if (auto params = root.get("params")) {
    if (!params->node->is_object()) params->fail("expected an object");
    s.params = *params->node;
  }
  if (auto a = root.get("analysis")) {
    if (auto m = a->get("mode")) {
      s.analysis.mode = m->string();
      if (s.analysis.mode != "exact" && s.analysis.mode != "mc") m->fail("mode must be \"exact\" or \"mc\"");
    }
    if (auto f = a->get("family")) s.analysis.family = parse_family(*f);
    if (auto n = a->get("n")) {
      if (n->integer() <= 0) n->fail("sample count must be positive");
      s.analysis.n = static_cast<std::uint64_t>(n->integer());
    }
    if (auto d = a->get("delta")) {
      s.analysis.delta = d->real();
      if (!(s.analysis.delta > 0 && s.analysis.delta < 1)) d->fail("delta must lie in (0, 1)");
    }
    if (auto r = a->get("rng_seed")) s.analysis.rng_seed = static_cast<std::uint64_t>(r->integer());
  }
  if (auto list = root.get("assertions")) {
    if (!list->node->is_array()) list->fail("expected an array");
    for (std::size_t i = 0; i < list->node->size(); ++i) {
      Cursor c = (*list)[i];
      Assertion a;
      a.where = c.path();
      a.quantity = c["quantity"].string();
      a.op = c["op"].string();
      if (std::find(kOps.begin(), kOps.end(), a.op) == kOps.end()) c["op"].fail("unknown operator '" + a.op + "'");
      a.value = *c["value"].node;
      if (auto t = c.get("tol")) a.tol = t->real();
      s.assertions.push_back(std::move(a));
    }
  }
  if (auto sw = root.get("sweep")) {
    SweepSpec spec;
    spec.parameter = (*sw)["parameter"].string();
    Cursor grid = (*sw)["grid"];
    if (!grid.node->is_array()) grid.fail("expected an array");
    for (const auto& v : *grid.node) spec.grid.push_back(v);
    s.sweep = std::move(spec);
  }
  if (auto out = root.get("output")) {
    if (auto r = out->get("report")) s.report_path = r->string();
    if (auto c = out->get("csv")) s.csv_path = c->string();
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, "cannot open scenario file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path);
}

namespace {

class ExprParser {
 public:
  ExprParser(const std::string& text, const std::map<std::string, Rational>& vars) : s_(text), vars_(vars) {}

  Rational parse() {
    Rational v = sum();
    skip();
    if (i_ != s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("expression \"" + s_ + "\" at " + std::to_string(i_ + 1), what);
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool eat(char c) {
    skip();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }
  Rational sum() {
    Rational v = product();
    for (;;) {
      if (eat('+')) v += product();
      else if (eat('-')) v -= product();
      else return v;
    }
  }
  Rational product() {
    Rational v = unary();
    for (;;) {
      if (eat('*')) {
        v *= unary();
      } else if (eat('/')) {
        Rational d = unary();
        if (d == 0) fail("division by zero");
        v /= d;
      } else {
        return v;
      }
    }
  }
  Rational unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return atom();
  }
  Rational atom() {
    skip();
    if (eat('(')) {
      Rational v = sum();
      if (!eat(')')) fail("expected ')'");
      return v;
    }
    const std::size_t start = i_;
    if (i_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) {
      while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
      const std::string name = s_.substr(start, i_ - start);
      auto it = vars_.find(name);
      if (it == vars_.end()) fail("unknown variable '" + name + "'");
      return it->second;
    }
    while (i_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[i_])) || s_[i_] == '.')) ++i_;
    if (start == i_) fail("expected a number");
    return parse_rational(s_.substr(start, i_ - start));
  }

  const std::string& s_;
  const std::map<std::string, Rational>& vars_;
  std::size_t i_ = 0;
};

}  // namespace

Rational eval_expression(const std::string& text, const std::map<std::string, Rational>& vars) {
  return ExprParser(text, vars).parse();
}

}  // namespace relcrypt::cli
