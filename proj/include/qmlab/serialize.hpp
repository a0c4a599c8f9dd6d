#pragma once

// File formats: JSON shapes for states, expansions, verdicts and reports, a
// small TOML subset reader for scenario files, and the CSV emitters.

#include <cctype>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qmlab/eprb.hpp"
#include "qmlab/expansion.hpp"
#include "qmlab/invariance.hpp"
#include "qmlab/lambda_one.hpp"
#include "qmlab/report.hpp"

namespace qmlab {

using nlohmann::json;

// 9 significant digits, matching the tolerance regime of the checks.
inline std::string fmt9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// StateVector <-> JSON: {"dims":[...],"re":[...],"im":[...]}

inline json to_json(const StateVector& v) {
  json j;
  j["dims"] = v.dims();
  std::vector<double> re(v.size()), im(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    re[i] = v[i].real();
    im[i] = v[i].imag();
  }
  j["re"] = std::move(re);
  j["im"] = std::move(im);
  return j;
}

inline StateVector statevector_from_json(const json& j) {
  if (!j.contains("dims") || !j.contains("re") || !j.contains("im"))
    throw std::runtime_error("state JSON needs dims, re, im");
  const std::vector<std::size_t> dims = j.at("dims").get<std::vector<std::size_t>>();
  const std::vector<double> re = j.at("re").get<std::vector<double>>();
  const std::vector<double> im = j.at("im").get<std::vector<double>>();
  if (re.size() != im.size()) throw std::runtime_error("state JSON: re/im length mismatch");
  std::vector<cdouble> amp(re.size());
  for (std::size_t i = 0; i < amp.size(); ++i) amp[i] = cdouble{re[i], im[i]};
  return StateVector(dims, std::move(amp));
}

// Projector as a JSON array of orthonormal basis states.
inline Projector projector_from_json(const json& j) {
  if (!j.contains("basis") || !j.at("basis").is_array() || j.at("basis").empty())
    throw std::runtime_error("projector JSON needs a non-empty basis array");
  std::vector<StateVector> basis;
  for (const json& b : j.at("basis")) basis.push_back(statevector_from_json(b));
  std::vector<std::size_t> dims = basis.front().dims();
  return Projector::from_basis(std::move(dims), std::move(basis));
}

// ---------------------------------------------------------------------------
// Expansions

inline json to_json(const EquiampExpansion& e, bool include_classification = true) {
  json j;
  j["parent"] = to_json(e.parent());
  j["n"] = e.n();
  j["common_norm"] = e.common_norm();
  json micro = json::array();
  for (const StateVector& m : e.microstates()) {
    std::vector<double> re(m.size()), im(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
      re[i] = m[i].real();
      im[i] = m[i].imag();
    }
    micro.push_back(json{{"re", re}, {"im", im}});
  }
  j["microstates"] = std::move(micro);
  if (include_classification && e.adapted_info()) {
    const AdaptedInfo& info = *e.adapted_info();
    j["cells"] = info.cell_of;
    j["m"] = info.m;
    j["cats"] = info.cats;
  }
  return j;
}

inline EquiampExpansion expansion_from_json(const json& j) {
  StateVector parent = statevector_from_json(j.at("parent"));
  std::vector<StateVector> micro;
  for (const json& m : j.at("microstates")) {
    const std::vector<double> re = m.at("re").get<std::vector<double>>();
    const std::vector<double> im = m.at("im").get<std::vector<double>>();
    std::vector<cdouble> amp(re.size());
    for (std::size_t i = 0; i < amp.size(); ++i) amp[i] = cdouble{re[i], im[i]};
    micro.emplace_back(parent.dims(), std::move(amp));
  }
  std::optional<AdaptedInfo> info;
  if (j.contains("cells")) {
    AdaptedInfo ai;
    ai.cell_of = j.at("cells").get<std::vector<int>>();
    ai.m = j.at("m").get<std::vector<std::size_t>>();
    ai.cats = j.at("cats").get<std::size_t>();
    ai.cell_count = ai.m.size();
    info = std::move(ai);
  }
  return EquiampExpansion(std::move(parent), std::move(micro), std::move(info));
}

// CSV summary rows (cell, n, m, cats, lower, upper) for an expansion against
// a resolution.
inline std::string expansion_summary_csv(const EquiampExpansion& e, const Resolution& r) {
  const CountingDistribution d = counting_distribution(e, r);
  std::ostringstream out;
  out << "cell,n,m,cats,lower,upper\n";
  for (std::size_t i = 0; i < r.size(); ++i)
    out << i << ',' << d.n << ',' << d.m[i] << ',' << d.cats << ',' << fmt9(d.bounds[i].lower)
        << ',' << fmt9(d.bounds[i].upper) << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// Verdicts and reports

inline json to_json(const ConditionVerdict& v) {
  return json{{"condition", v.condition},
              {"pass", v.pass},
              {"max_violation", v.max_violation},
              {"tolerance", v.tolerance},
              {"skipped", v.skipped}};
}

inline json invariance_report_json(const std::string& check, bool pass, double max_residual) {
  return json{{"check", check}, {"pass", pass}, {"max_residual", max_residual}};
}

inline json to_json(const InvarianceReport& r) {
  json j = invariance_report_json("invariance", r.pass, r.max_residual);
  j["expansion_valid"] = r.expansion_valid;
  j["fixed_probability_before"] = r.fixed_probability_before;
  j["fixed_probability_after"] = r.fixed_probability_after;
  j["fixed_class_preserved"] = r.fixed_class_preserved;
  return j;
}

inline json to_json(const SwapWitness& w) {
  json j = invariance_report_json("equal_norm_swap", w.pass,
                                  std::max(w.parent_residual, w.unitarity_residual));
  j["parent_residual"] = w.parent_residual;
  j["norm_multiset_dev"] = w.norm_multiset_dev;
  j["unitarity_residual"] = w.unitarity_residual;
  return j;
}

inline json to_json(const LambdaPIReport& r) {
  json j;
  j["applicable"] = r.applicable;
  if (r.applicable)
    j["verdict"] = to_json(r.verdict);
  else
    j["max_cross_overlap"] = r.max_cross_overlap;
  j["note"] = r.note;
  return j;
}

inline json to_json(const ConditionReport& r) {
  json j;
  j["model"] = r.model;
  j["PI"] = r.pi ? to_json(*r.pi) : json(nullptr);
  j["OI"] = r.oi ? to_json(*r.oi) : json(nullptr);
  j["completeness"] = r.completeness ? to_json(*r.completeness) : json(nullptr);
  j["factorizability"] = r.factorizability ? to_json(*r.factorizability) : json(nullptr);
  j["lambda_PI"] = r.lambda_pi ? to_json(*r.lambda_pi) : json(nullptr);
  j["IND"] = r.flags.ind;
  j["UNIQUE"] = r.flags.unique;
  j["LOC"] = r.flags.loc;
  j["abs_S"] = r.abs_chsh;
  j["BELL"] = r.flags.bell;
  j["audit_consistent"] = r.audit.consistent();
  return j;
}

inline std::string report_markdown(const std::vector<ConditionReport>& rows) {
  const auto mark = [](const std::optional<ConditionVerdict>& v) -> std::string {
    if (!v) return "n/a";
    return v->pass ? "pass" : "FAIL";
  };
  const auto flag = [](bool b) { return b ? "T" : "F"; };
  std::ostringstream out;
  out << "| model | PI | OI | Completeness | Factorizability | IND | UNIQUE | LOC | \\|S\\| | "
         "BELL | audit |\n";
  out << "|---|---|---|---|---|---|---|---|---|---|---|\n";
  for (const ConditionReport& r : rows) {
    out << "| " << r.model << " | " << mark(r.pi) << " | " << mark(r.oi) << " | "
        << mark(r.completeness) << " | " << mark(r.factorizability) << " | " << flag(r.flags.ind)
        << " | " << flag(r.flags.unique) << " | " << flag(r.flags.loc) << " | "
        << fmt9(r.abs_chsh) << " | " << flag(r.flags.bell) << " | "
        << (r.audit.consistent() ? "consistent" : "INCONSISTENT") << " |\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Distributions

inline std::string distribution_csv(const std::vector<std::pair<std::string, JointDistribution>>&
                                        named) {
  std::ostringstream out;
  out << "setting_pair,s,t,p\n";
  for (const auto& [name, d] : named)
    for (int s : {+1, -1})
      for (int t : {+1, -1})
        out << name << ',' << s << ',' << t << ',' << fmt9(d.p_of(s, t)) << '\n';
  return out.str();
}

inline json to_json(const JointDistribution& d) {
  json j;
  j["backend"] = d.backend == Backend::Born ? "born" : "counting";
  j["x"] = {d.x.x, d.x.y, d.x.z};
  j["y"] = {d.y.x, d.y.y, d.y.z};
  json cells = json::array();
  for (int s : {+1, -1})
    for (int t : {+1, -1}) cells.push_back(json{{"s", s}, {"t", t}, {"p", d.p_of(s, t)}});
  j["cells"] = std::move(cells);
  j["cat_mass"] = d.cat_mass;
  return j;
}

// ---------------------------------------------------------------------------
// Lambda-ONE runs

inline json to_json(const lambda_one::RunResult& r) {
  json j;
  j["n"] = r.config.n;
  j["trials_per_pair"] = r.config.trials;
  j["seed"] = r.config.seed;
  j["schedule"] =
      r.config.schedule == lambda_one::Schedule::RoundRobin ? "round-robin" : "fixed-pair";
  json pairs = json::array();
  for (std::size_t i = 0; i < 4; ++i) {
    const lambda_one::PairStats& ps = r.pairs[i];
    pairs.push_back(json{{"pair", Scenario::pair_name(i)},
                         {"counts", ps.counts},
                         {"cat_skips", ps.cat_skips},
                         {"total", ps.total},
                         {"freq", ps.freq},
                         {"std_err", ps.std_err},
                         {"e_hat", ps.e_hat},
                         {"cat_fraction", ps.cat_fraction},
                         {"counting_m", r.counting_m[i]}});
  }
  j["pairs"] = std::move(pairs);
  j["s_hat"] = r.s_hat;
  j["s_std_err"] = r.s_std_err;
  return j;
}

inline std::string run_csv(const lambda_one::RunResult& r) {
  std::ostringstream out;
  out << "pair,s,t,count,freq,std_err\n";
  for (std::size_t i = 0; i < 4; ++i) {
    const lambda_one::PairStats& ps = r.pairs[i];
    if (ps.total == 0) continue;
    std::size_t c = 0;
    for (int s : {+1, -1})
      for (int t : {+1, -1}) {
        out << Scenario::pair_name(i) << ',' << s << ',' << t << ',' << ps.counts[c] << ','
            << fmt9(ps.freq[c]) << ',' << fmt9(ps.std_err[c]) << '\n';
        ++c;
      }
    out << Scenario::pair_name(i) << ",0,0," << ps.cat_skips << ',' << fmt9(ps.cat_fraction)
        << ",0\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Scenario files (JSON, or the TOML subset below)

inline std::array<cdouble, 2> chi_from_json(const json& j) {
  if (j.is_array()) {
    const std::vector<double> v = j.get<std::vector<double>>();
    if (v.size() == 2) return {cdouble{v[0], 0.0}, cdouble{v[1], 0.0}};
    if (v.size() == 4) return {cdouble{v[0], v[1]}, cdouble{v[2], v[3]}};
    throw std::runtime_error("spin state array must have 2 (real) or 4 (re,im pairs) entries");
  }
  if (j.is_object() && j.contains("re") && j.contains("im")) {
    const std::vector<double> re = j.at("re").get<std::vector<double>>();
    const std::vector<double> im = j.at("im").get<std::vector<double>>();
    if (re.size() != 2 || im.size() != 2)
      throw std::runtime_error("spin state re/im arrays must have 2 entries");
    return {cdouble{re[0], im[0]}, cdouble{re[1], im[1]}};
  }
  throw std::runtime_error("cannot parse spin state");
}

inline Direction direction_from_json(const json& j, const char* field) {
  if (!j.is_array() || j.size() != 3)
    throw std::runtime_error(std::string(field) + ": expected a 3-vector");
  return Direction::unit(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

inline Scenario scenario_from_json(const json& j) {
  Scenario s;
  if (j.contains("a")) s.a = direction_from_json(j.at("a"), "a");
  if (j.contains("a_prime")) s.a_prime = direction_from_json(j.at("a_prime"), "a_prime");
  if (j.contains("b")) s.b = direction_from_json(j.at("b"), "b");
  if (j.contains("b_prime")) s.b_prime = direction_from_json(j.at("b_prime"), "b_prime");
  if (j.contains("d_a")) s.d_a = j.at("d_a").get<std::size_t>();
  if (j.contains("d_b")) s.d_b = j.at("d_b").get<std::size_t>();
  if (j.contains("n")) s.n = j.at("n").get<std::size_t>();
  if (j.contains("backend")) {
    const std::string b = j.at("backend").get<std::string>();
    if (b == "born")
      s.backend = Backend::Born;
    else if (b == "counting")
      s.backend = Backend::Counting;
    else
      throw std::runtime_error("backend must be \"born\" or \"counting\"");
  }
  if (j.contains("state")) {
    const json& st = j.at("state");
    if (st.is_string()) {
      if (st.get<std::string>() != "singlet")
        throw std::runtime_error("state string must be \"singlet\"");
      s.kind = StateKind::Singlet;
    } else if (st.is_object() && st.contains("product")) {
      s.kind = StateKind::Product;
      const json& p = st.at("product");
      if (p.contains("chi_a")) s.chi_a = chi_from_json(p.at("chi_a"));
      if (p.contains("chi_b")) s.chi_b = chi_from_json(p.at("chi_b"));
    } else {
      throw std::runtime_error("state must be \"singlet\" or {\"product\": {...}}");
    }
  }
  if (s.d_a < 1 || s.d_b < 1) throw std::runtime_error("d_a and d_b must be >= 1");
  return s;
}

inline json scenario_to_json(const Scenario& s) {
  json j;
  j["a"] = {s.a.x, s.a.y, s.a.z};
  j["a_prime"] = {s.a_prime.x, s.a_prime.y, s.a_prime.z};
  j["b"] = {s.b.x, s.b.y, s.b.z};
  j["b_prime"] = {s.b_prime.x, s.b_prime.y, s.b_prime.z};
  j["d_a"] = s.d_a;
  j["d_b"] = s.d_b;
  j["n"] = s.n;
  j["backend"] = s.backend == Backend::Born ? "born" : "counting";
  if (s.kind == StateKind::Singlet) {
    j["state"] = "singlet";
  } else {
    j["state"] = json{{"product",
                       json{{"chi_a", {s.chi_a[0].real(), s.chi_a[0].imag(), s.chi_a[1].real(),
                                       s.chi_a[1].imag()}},
                            {"chi_b", {s.chi_b[0].real(), s.chi_b[0].imag(), s.chi_b[1].real(),
                                       s.chi_b[1].imag()}}}}};
  }
  return j;
}

// ---------------------------------------------------------------------------
// TOML subset: key = value with strings, numbers, booleans, flat arrays,
// inline tables, dotted keys, [section] headers, and # comments. Enough to
// express scenario and run-config files; anything else is a parse error with
// a line number.

namespace toml {

struct Parser {
  std::string_view text;
  std::size_t pos = 0;
  int line = 1;

  [[noreturn]] void fail(const std::string& what) const {
    throw std::runtime_error("toml: line " + std::to_string(line) + ": " + what);
  }
  bool done() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }
  void advance() {
    if (text[pos] == '\n') ++line;
    ++pos;
  }
  void skip_ws() {
    while (!done() && (peek() == ' ' || peek() == '\t')) advance();
  }

  std::string parse_bare_key() {
    skip_ws();
    std::string k;
    while (!done() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' ||
                       peek() == '-')) {
      k += peek();
      advance();
    }
    if (k.empty()) fail("expected a key");
    return k;
  }

  std::vector<std::string> parse_key_path() {
    std::vector<std::string> path{parse_bare_key()};
    skip_ws();
    while (!done() && peek() == '.') {
      advance();
      path.push_back(parse_bare_key());
      skip_ws();
    }
    return path;
  }

  json parse_value() {
    skip_ws();
    if (done()) fail("expected a value");
    const char c = peek();
    if (c == '"') return parse_string();
    if (c == '[') return parse_array();
    if (c == '{') return parse_inline_table();
    return parse_scalar();
  }

  json parse_string() {
    advance();  // opening quote
    std::string out;
    while (!done() && peek() != '"') {
      if (peek() == '\\') {
        advance();
        if (done()) fail("dangling escape");
        const char e = peek();
        if (e == 'n')
          out += '\n';
        else if (e == 't')
          out += '\t';
        else if (e == '"' || e == '\\')
          out += e;
        else
          fail("unsupported escape");
        advance();
      } else if (peek() == '\n') {
        fail("newline inside string");
      } else {
        out += peek();
        advance();
      }
    }
    if (done()) fail("unterminated string");
    advance();  // closing quote
    return json(out);
  }

  json parse_array() {
    advance();  // '['
    json arr = json::array();
    skip_ws();
    if (!done() && peek() == ']') {
      advance();
      return arr;
    }
    for (;;) {
      arr.push_back(parse_value());
      skip_ws();
      if (done()) fail("unterminated array");
      if (peek() == ',') {
        advance();
        skip_ws();
        if (!done() && peek() == ']') {
          advance();
          return arr;
        }
        continue;
      }
      if (peek() == ']') {
        advance();
        return arr;
      }
      fail("expected ',' or ']' in array");
    }
  }

  json parse_inline_table() {
    advance();  // '{'
    json obj = json::object();
    skip_ws();
    if (!done() && peek() == '}') {
      advance();
      return obj;
    }
    for (;;) {
      const std::string key = parse_bare_key();
      skip_ws();
      if (done() || peek() != '=') fail("expected '=' in inline table");
      advance();
      obj[key] = parse_value();
      skip_ws();
      if (done()) fail("unterminated inline table");
      if (peek() == ',') {
        advance();
        continue;
      }
      if (peek() == '}') {
        advance();
        return obj;
      }
      fail("expected ',' or '}' in inline table");
    }
  }

  json parse_scalar() {
    std::string tok;
    while (!done() && peek() != '\n' && peek() != '#' && peek() != ',' && peek() != ']' &&
           peek() != '}') {
      tok += peek();
      advance();
    }
    while (!tok.empty() && (tok.back() == ' ' || tok.back() == '\t')) tok.pop_back();
    if (tok == "true") return json(true);
    if (tok == "false") return json(false);
    if (tok.empty()) fail("empty value");
    try {
      std::size_t used = 0;
      if (tok.find('.') == std::string::npos && tok.find('e') == std::string::npos &&
          tok.find('E') == std::string::npos) {
        const long long v = std::stoll(tok, &used);
        if (used != tok.size()) fail("bad number '" + tok + "'");
        return json(v);
      }
      const double v = std::stod(tok, &used);
      if (used != tok.size()) fail("bad number '" + tok + "'");
      return json(v);
    } catch (const std::invalid_argument&) {
      fail("cannot parse value '" + tok + "'");
    } catch (const std::out_of_range&) {
      fail("number out of range '" + tok + "'");
    }
  }

  void skip_comment_and_eol() {
    skip_ws();
    if (!done() && peek() == '#')
      while (!done() && peek() != '\n') advance();
    if (!done()) {
      if (peek() != '\n') fail("trailing characters");
      advance();
    }
  }
};

inline json to_json(std::string_view text) {
  Parser p{text};
  json root = json::object();
  std::vector<std::string> section;
  while (!p.done()) {
    p.skip_ws();
    if (p.done()) break;
    if (p.peek() == '\n' || p.peek() == '#') {
      p.skip_comment_and_eol();
      continue;
    }
    if (p.peek() == '[') {
      p.advance();
      section = p.parse_key_path();
      p.skip_ws();
      if (p.done() || p.peek() != ']') p.fail("unterminated section header");
      p.advance();
      p.skip_comment_and_eol();
      continue;
    }
    const std::vector<std::string> path = p.parse_key_path();
    p.skip_ws();
    if (p.done() || p.peek() != '=') p.fail("expected '=' after key");
    p.advance();
    const json value = p.parse_value();
    p.skip_comment_and_eol();
    json* node = &root;
    for (const std::string& s : section) node = &(*node)[s];
    for (std::size_t i = 0; i + 1 < path.size(); ++i) node = &(*node)[path[i]];
    (*node)[path.back()] = value;
  }
  return root;
}

}  // namespace toml

inline Scenario scenario_from_toml(std::string_view text) {
  return scenario_from_json(toml::to_json(text));
}

}  // namespace qmlab
