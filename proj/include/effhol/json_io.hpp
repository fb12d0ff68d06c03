#pragma once

#include <string>

#include "json.hpp"
#include "surface.hpp"

namespace effhol {

// Versioned JSON interchange for derivations. Every term is a canonical
// s-expression string in the context of its node.

inline constexpr const char* kDerivationSchema = "effhol-derivation/1";

namespace detail {

using nlohmann::json;

inline json hol_node(const HolD& d, std::array<int, kNs> n) {
  json j;
  j["rule"] = hrule_name(d->rule);
  j["conclusion"] = show_sized(d->goal, n);
  j["witnesses"] = json::array();
  if (d->witness) j["witnesses"].push_back(show_sized(d->witness, n));
  if (d->rule == HRule::UniI) ++n[NsH];
  j["premises"] = json::array();
  for (const auto& p : d->prem) j["premises"].push_back(hol_node(p, n));
  return j;
}

inline json eff_node(const EffD& d, std::array<int, kNs> n) {
  json j;
  j["rule"] = erule_name(d->rule);
  j["conclusion"] = show_sized(d->goal, n);
  j["witnesses"] = json::array();
  if (d->rule == ERule::AntiRed) {
    std::array<int, kNs> m = n;
    ++m[NsP];
    j["binder"] = fresh_name(NsP, n[NsP]);
    j["witnesses"] = {show_sized(d->wit[0], n), show_sized(d->wit[1], m), show_sized(d->wit[2], n),
                      show_sized(d->wit[3], n)};
    j["steps"] = d->steps;
    j["strategy"] = strategy_name(d->strategy);
  } else {
    for (const auto& w : d->wit) j["witnesses"].push_back(show_sized(w, n));
  }
  j["premises"] = json::array();
  for (std::size_t i = 0; i < d->prem.size(); ++i) {
    std::array<int, kNs> m = n;
    if (d->rule == ERule::ProgI || (d->rule == ERule::Mon && i == 0)) ++m[NsP];
    if (d->rule == ERule::ExprI) ++m[NsE];
    if (d->rule == ERule::TypeI) ++m[NsK];
    j["premises"].push_back(eff_node(d->prem[i], m));
  }
  return j;
}

inline Error schema(const std::string& path, const std::string& what) { return Error(Err::SchemaError, what, path); }

inline SExpr str_sexpr(const json& j, const std::string& path, const char* field) {
  if (!j.is_string()) throw schema(path, std::string(field) + " must be a string");
  try {
    return read_sexpr(j.get<std::string>());
  } catch (const Error& e) {
    throw schema(path, std::string(field) + ": " + e.what());
  }
}

inline const json& field(const json& j, const char* k, const std::string& path) {
  if (!j.is_object() || !j.contains(k)) throw schema(path, std::string("missing field '") + k + "'");
  return j.at(k);
}

// Rebuilds the surface form of a node so the elaborator can resolve names.
inline SExpr node_sexpr(const json& j, bool eff, const std::string& path) {
  const json& r = field(j, "rule", path);
  if (!r.is_string()) throw schema(path, "rule must be a string");
  const std::string rule = r.get<std::string>();
  int arity = 0, nwit = 0;
  if (eff) {
    auto er = parse_erule(rule);
    if (!er) throw schema(path, "unknown rule '" + rule + "'");
    arity = erule_arity(*er);
    nwit = erule_witnesses(*er);
  } else {
    std::optional<HRule> hr;
    for (int k = 0; k <= static_cast<int>(HRule::Mem0E); ++k)
      if (rule == hrule_name(static_cast<HRule>(k))) hr = static_cast<HRule>(k);
    if (!hr) throw schema(path, "unknown rule '" + rule + "'");
    arity = hrule_arity(*hr);
    nwit = *hr == HRule::UniE ? 1 : 0;
  }
  std::vector<SExpr> xs;
  xs.push_back(SExpr::make_atom(rule));
  xs.push_back(str_sexpr(field(j, "conclusion", path), path, "conclusion"));
  const json& ws = j.contains("witnesses") ? j.at("witnesses") : json::array();
  if (!ws.is_array() || static_cast<int>(ws.size()) != nwit)
    throw schema(path, rule + ": expected " + std::to_string(nwit) + " witness(es)");
  auto item = [](const char* k, std::vector<SExpr> rest) {
    rest.insert(rest.begin(), SExpr::make_atom(k));
    return SExpr::make_list(std::move(rest));
  };
  if (rule == "antired") {
    const json& b = field(j, "binder", path);
    const json& st = field(j, "steps", path);
    const json& sg = field(j, "strategy", path);
    if (!b.is_string() || !st.is_number_integer() || !sg.is_string()) throw schema(path, "antired: malformed fields");
    SExpr bind = SExpr::make_list({SExpr::make_atom(b.get<std::string>()), str_sexpr(ws[0], path, "witness")});
    xs.push_back(item("motive", {bind, str_sexpr(ws[1], path, "witness")}));
    xs.push_back(item("from", {str_sexpr(ws[2], path, "witness")}));
    xs.push_back(item("to", {str_sexpr(ws[3], path, "witness")}));
    xs.push_back(item("steps", {SExpr::make_atom(std::to_string(st.get<long>()))}));
    xs.push_back(item("strategy", {SExpr::make_atom(sg.get<std::string>())}));
  } else {
    for (const auto& w : ws) xs.push_back(item("witness", {str_sexpr(w, path, "witness")}));
  }
  const json& ps = field(j, "premises", path);
  if (!ps.is_array() || static_cast<int>(ps.size()) != arity)
    throw schema(path, rule + ": expected " + std::to_string(arity) + " premise(s)");
  for (std::size_t i = 0; i < ps.size(); ++i) xs.push_back(node_sexpr(ps[i], eff, path + "." + std::to_string(i)));
  return SExpr::make_list(std::move(xs));
}

}  // namespace detail

inline nlohmann::json derivation_to_json(const Decl& d) {
  using nlohmann::json;
  if (d.kind != "hol-deriv" && d.kind != "eff-deriv") throw Error(Err::SchemaError, d.name + " is not a derivation");
  json j;
  j["schema"] = kDerivationSchema;
  j["calculus"] = d.kind == "hol-deriv" ? "hol" : "effhol";
  j["name"] = d.name;
  j["context"] = json::array();
  std::array<int, kNs> n{0, 0, 0, 0, 0};
  if (d.kind == "hol-deriv") {
    for (std::size_t i = 0; i < d.sctx.size(); ++i)
      j["context"].push_back({{"entry", "sort"}, {"name", detail::fresh_name(NsH, static_cast<int>(i))}, {"class", show(d.sctx[i])}});
    n[NsH] = static_cast<int>(d.sctx.size());
  } else {
    const int nk = static_cast<int>(d.ctx.k.size());
    for (int i = 0; i < nk; ++i)
      j["context"].push_back({{"entry", "kind"}, {"name", detail::fresh_name(NsK, i)}, {"class", show(d.ctx.k[static_cast<std::size_t>(i)])}});
    for (std::size_t i = 0; i < d.ctx.i.size(); ++i)
      j["context"].push_back({{"entry", "index"}, {"name", detail::fresh_name(NsE, static_cast<int>(i))},
                              {"class", detail::show_sized(d.ctx.i[i], {0, nk, 0, 0, 0})}});
    for (std::size_t i = 0; i < d.ctx.t.size(); ++i)
      j["context"].push_back({{"entry", "prog"}, {"name", detail::fresh_name(NsP, static_cast<int>(i))},
                              {"class", detail::show_sized(d.ctx.t[i], {0, nk, 0, 0, 0})}});
    n = {0, nk, static_cast<int>(d.ctx.t.size()), static_cast<int>(d.ctx.i.size()), 0};
  }
  j["hyps"] = json::array();
  for (const auto& h : d.hyps) j["hyps"].push_back(detail::show_sized(h, n));
  j["derivation"] = d.kind == "hol-deriv" ? detail::hol_node(d.hol, n) : detail::eff_node(d.eff, n);
  return j;
}

inline Decl derivation_from_json(const nlohmann::json& j) {
  using detail::field;
  using detail::schema;
  const nlohmann::json& sv = field(j, "schema", "json");
  if (!sv.is_string() || sv.get<std::string>() != kDerivationSchema)
    throw schema("json", std::string("unsupported schema, expected ") + kDerivationSchema);
  const nlohmann::json& calc = field(j, "calculus", "json");
  if (!calc.is_string() || (calc != "hol" && calc != "effhol")) throw schema("json", "calculus must be hol or effhol");
  const bool eff = calc == "effhol";
  std::string name = j.contains("name") && j["name"].is_string() ? j["name"].get<std::string>() : "anonymous";
  std::vector<SExpr> ctx{SExpr::make_atom("ctx")};
  const nlohmann::json& cj = j.contains("context") ? j.at("context") : nlohmann::json::array();
  if (!cj.is_array()) throw schema("json.context", "must be an array");
  for (std::size_t i = 0; i < cj.size(); ++i) {
    std::string p = "json.context." + std::to_string(i);
    const auto& e = field(cj[i], "entry", p);
    const auto& nm = field(cj[i], "name", p);
    if (!e.is_string() || !nm.is_string()) throw schema(p, "entry and name must be strings");
    ctx.push_back(SExpr::make_list({SExpr::make_atom(e.get<std::string>()), SExpr::make_atom(nm.get<std::string>()),
                                    detail::str_sexpr(field(cj[i], "class", p), p, "class")}));
  }
  std::vector<SExpr> hyps{SExpr::make_atom("hyps")};
  const nlohmann::json& hj = j.contains("hyps") ? j.at("hyps") : nlohmann::json::array();
  if (!hj.is_array()) throw schema("json.hyps", "must be an array");
  for (const auto& h : hj) hyps.push_back(detail::str_sexpr(h, "json.hyps", "hypothesis"));
  SExpr root = detail::node_sexpr(field(j, "derivation", "json"), eff, "root");
  SExpr decl = SExpr::make_list({SExpr::make_atom(eff ? "eff-deriv" : "hol-deriv"), SExpr::make_atom(name),
                                 SExpr::make_list(ctx), SExpr::make_list(hyps), root});
  Elaborator el;
  return el.declaration(decl);
}

inline Decl derivation_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Err::SchemaError, std::string("malformed JSON: ") + e.what(), "json");
  }
  return derivation_from_json(j);
}

}  // namespace effhol
