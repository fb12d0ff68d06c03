#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "effhol/ef.hpp"
#include "effhol/forgetful.hpp"
#include "effhol/instances.hpp"
#include "effhol/json_io.hpp"
#include "effhol/surface.hpp"
#include "effhol/translation.hpp"
#include "json.hpp"

using namespace effhol;
using nlohmann::json;

namespace {

struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool g_json = false;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Usage("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool ends_with(const std::string& s, const std::string& suf) {
  return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

Doc load(const std::string& path) {
  std::string text = slurp(path);
  if (ends_with(path, ".json")) {
    Doc d;
    d.decls.push_back(derivation_from_json_text(text));
    return d;
  }
  return parse_doc(text);
}

const Decl& need(const Doc& d, const std::string& name, const std::string& kind) {
  const Decl* x = d.find(name, kind);
  if (!x) throw Usage("no " + kind + " named " + name);
  return *x;
}

json error_json(const Error& e, const Decl* d = nullptr) {
  json j{{"code", err_name(e.code)}, {"detail", e.detail}, {"path", e.path}};
  if (d)
    if (auto l = locate(*d, e.path)) j["location"] = l->str();
  return j;
}

std::string error_text(const Error& e, const Decl* d = nullptr) {
  std::string s = e.what();
  if (d)
    if (auto l = locate(*d, e.path)) s += " (source " + l->str() + ")";
  return s;
}

int emit(const json& j, const std::string& human, bool ok) {
  if (g_json)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << human;
  return ok ? 0 : 1;
}

void print_warnings(const Doc& d) {
  if (g_json) return;
  for (const auto& w : d.warnings) std::cerr << "warning: " << w << "\n";
}

// ---- commands

int cmd_check_hol(const std::string& file) {
  Doc doc = load(file);
  print_warnings(doc);
  json out{{"command", "check-hol"}, {"results", json::array()}};
  std::string human;
  bool ok = true;
  for (const auto& d : doc.decls) {
    if (d.kind != "hol-deriv" && d.kind != "hol-prop") continue;
    json r{{"name", d.name}};
    try {
      if (d.kind == "hol-prop") {
        hol_prop_wf(d.sctx, d.term);
      } else {
        check_hol_derivation(d.sctx, d.hyps, d.hol);
        r["conclusion"] = show_hol(d.hol->goal, d.sctx);
      }
      r["ok"] = true;
      human += "ok    " + d.name + "\n";
    } catch (const Error& e) {
      ok = false;
      r["ok"] = false;
      r["error"] = error_json(e, &d);
      human += "FAIL  " + d.name + ": " + error_text(e, &d) + "\n";
    }
    out["results"].push_back(r);
  }
  out["ok"] = ok;
  return emit(out, human, ok);
}

int cmd_check_effhol(const std::string& file) {
  Doc doc = load(file);
  print_warnings(doc);
  json out{{"command", "check-effhol"}, {"results", json::array()}};
  std::string human;
  bool ok = true;
  for (const auto& d : doc.decls) {
    if (!d.eff_ctx) continue;
    json r{{"name", d.name}, {"kind", d.kind}};
    try {
      ctx_wf(d.ctx);
      if (d.kind == "type") {
        r["kind_of"] = show(kind_of(d.ctx.k, d.term));
      } else if (d.kind == "prog") {
        r["type"] = show_in(type_of(d.ctx, d.term), d.ctx);
      } else if (d.kind == "spec") {
        spec_wf(d.ctx, d.term);
      } else if (d.kind == "eff-deriv") {
        check_effhol_derivation(d.ctx, d.hyps, d.eff);
      } else if (d.kind == "ambient") {
        for (const auto& h : d.hyps) spec_wf(d.ctx, h);
      }
      r["ok"] = true;
      human += "ok    " + d.kind + " " + d.name + (r.contains("type") ? " : " + r["type"].get<std::string>() : "") + "\n";
    } catch (const Error& e) {
      ok = false;
      r["ok"] = false;
      r["error"] = error_json(e, &d);
      human += "FAIL  " + d.kind + " " + d.name + ": " + error_text(e, &d) + "\n";
    }
    out["results"].push_back(r);
  }
  out["ok"] = ok;
  return emit(out, human, ok);
}

int cmd_translate(const std::string& file, const std::string& prop) {
  Doc doc = load(file);
  const Decl& d = need(doc, prop, "hol-prop");
  hol_prop_wf(d.sctx, d.term);
  Ctx c = lift_contexts(d.sctx);
  Term ty = trtype(d.term);
  Ctx cx = ext_t(c, ty);
  Term sp = trspec(d.term, p_var(0));
  json out{{"command", "translate"}, {"ok", true}, {"context", print_eff_ctx(c)}, {"type", show_in(ty, c)},
           {"spec", show_in(sp, cx)}};
  return emit(out,
              "context  " + print_eff_ctx(c) + "\ntype     " + show_in(ty, c) + "\nspec     " + show_in(sp, cx) +
                  "   (realizer " + show_in(p_var(0), cx) + ")\n",
              true);
}

int cmd_extract(const std::string& file, const std::string& name, const std::string& amb_file, bool derive) {
  Doc doc = load(file);
  const Decl& d = need(doc, name, "hol-deriv");
  std::optional<Ambient> amb;
  if (!amb_file.empty()) {
    Doc ad = load(amb_file);
    auto xs = ad.of_kind("ambient");
    if (xs.size() != 1) throw Usage(amb_file + ": expected exactly one ambient declaration");
    amb = ambient_of(*xs[0]);
  }
  try {
    ExtractionResult r = extract_realizer(d.sctx, d.hyps, d.hol, amb ? &*amb : nullptr);
    Term ty = type_of(r.ctx, r.realizer);
    json out{{"command", "extract"},
             {"ok", true},
             {"context", print_eff_ctx(r.ctx)},
             {"realizer", show_in(r.realizer, r.ctx)},
             {"type", show_in(ty, r.ctx)},
             {"triple", show_in(r.triple.goal, r.ctx)}};
    out["hyps"] = json::array();
    for (const auto& h : r.triple.hyps) out["hyps"].push_back(show_in(h, r.ctx));
    std::string human = "context   " + print_eff_ctx(r.ctx) + "\nrealizer  " + show_in(r.realizer, r.ctx) +
                        "\ntype      " + show_in(ty, r.ctx) + "\ntriple    " + show_in(r.triple.goal, r.ctx) + "\n";
    if (derive) {
      EffD e = derive_soundness(d.hyps, d.hol);
      EffSequent s = check_effhol_derivation(r.ctx, r.triple.hyps, e);
      bool same = eq(s.goal, r.triple.goal);
      out["derivation_checked"] = same;
      Decl ed_decl;
      ed_decl.kind = "eff-deriv";
      ed_decl.name = name + "-soundness";
      ed_decl.eff_ctx = true;
      ed_decl.ctx = r.ctx;
      ed_decl.hyps = r.triple.hyps;
      ed_decl.eff = e;
      out["derivation"] = derivation_to_json(ed_decl);
      human += std::string("soundness derivation ") + (same ? "checks" : "proves a different goal") + "\n" +
               print_decl(ed_decl) + "\n";
      if (!same) out["ok"] = false;
      return emit(out, human, same);
    }
    return emit(out, human, true);
  } catch (const Error& e) {
    return emit(json{{"command", "extract"}, {"ok", false}, {"error", error_json(e, &d)}},
                "FAIL  " + error_text(e, &d) + "\n", false);
  }
}

int cmd_instantiate(const std::string& file, const std::string& which, const std::string& prog,
                    const std::string& prop) {
  Doc doc = load(file);
  std::unique_ptr<Instance> owned = builtin_instance(which);
  std::shared_ptr<DeclarativeInstance> decl_inst;
  const Instance* inst = owned.get();
  if (!inst) {
    Doc idoc = load(which);
    auto xs = idoc.of_kind("instance");
    if (xs.size() != 1) throw Usage(which + ": expected exactly one instance declaration");
    decl_inst = xs[0]->inst;
    inst = decl_inst.get();
  }
  json out{{"command", "instantiate"}, {"instance", inst->name()}, {"results", json::array()}};
  std::string human;
  bool ok = true;
  Instantiator in(*inst);
  for (const auto& d : doc.decls) {
    if (d.kind != "eff-deriv" && d.kind != "prog") continue;
    json r{{"name", d.name}, {"kind", d.kind}};
    try {
      if (d.kind == "prog") {
        Term p = in.term(d.ctx, d.term);
        Ctx c = in.context(d.ctx);
        Term ty = type_of(c, p);
        r["program"] = show_in(p, c);
        r["type"] = show_in(ty, c);
        human += "ok    prog " + d.name + " : " + show_in(ty, c) + "\n";
      } else {
        check_effhol_derivation(d.ctx, d.hyps, d.eff);
        instantiate_derivation(*inst, d.ctx, d.hyps, d.eff);
        human += "ok    eff-deriv " + d.name + " re-checks after instantiation\n";
      }
      r["ok"] = true;
    } catch (const Error& e) {
      if (e.code == Err::TemplateMissing && decl_inst) {
        // declarative instances carry no law proofs
        r["ok"] = nullptr;
        r["unsupported"] = e.detail;
        human += "skip  " + d.kind + " " + d.name + ": " + e.detail + "\n";
      } else {
        ok = false;
        r["ok"] = false;
        r["error"] = error_json(e, &d);
        human += "FAIL  " + d.kind + " " + d.name + ": " + error_text(e, &d) + "\n";
      }
    }
    out["results"].push_back(r);
  }
  if (!prog.empty() || !prop.empty()) {
    if (prog.empty() || prop.empty()) throw Usage("--prog and --prop go together");
    const Decl& pd = need(doc, prog, "prog");
    const Decl& hd_ = need(doc, prop, "hol-prop");
    Ctx c = in.context(pd.ctx);
    Term got = nf(type_of(c, in.term(pd.ctx, pd.term)));
    Term want = nf(in.term(lift_contexts(hd_.sctx), trtype(hd_.term)));
    bool same = eq(got, want);
    ok = ok && same;
    out["realizes"] = {{"prog", prog}, {"prop", prop}, {"ok", same}, {"type", show_in(got, c)}, {"expected", show_in(want, c)}};
    human += std::string(same ? "ok    " : "FAIL  ") + prog + " has the translated type of " + prop + "\n";
    if (!same) human += "      got      " + show_in(got, c) + "\n      expected " + show_in(want, c) + "\n";
  }
  out["ok"] = ok;
  return emit(out, human, ok);
}

int cmd_normalize(const std::string& file, const std::string& name, long fuel, const std::string& strat) {
  Doc doc = load(file);
  const Decl& d = need(doc, name, "prog");
  auto st = parse_strategy(strat);
  if (!st) throw Usage("unknown strategy " + strat);
  Term ty = type_of(d.ctx, d.term);
  MultiStep m = multi_step(d.term, *st, static_cast<int>(std::min<long>(fuel, 1 << 30)));
  json out{{"command", "normalize"}, {"ok", !m.exhausted}, {"term", show_in(m.term, d.ctx)}, {"steps", m.steps},
           {"exhausted", m.exhausted}, {"type", show_in(ty, d.ctx)}};
  std::string human = show_in(m.term, d.ctx) + "\n" + std::to_string(m.steps) + " step(s) under " + strat +
                      (m.exhausted ? ", fuel exhausted" : "") + "\n";
  if (m.exhausted) std::cerr << "FuelExhausted after " << m.steps << " steps\n";
  return emit(out, human, !m.exhausted);
}

int cmd_erase(const std::string& file, const std::string& name) {
  Doc doc = load(file);
  const Decl& d = need(doc, name, "prog");
  type_of(d.ctx, d.term);
  Term u = erase(d.term);
  Names n = Names::sized(0, 0, 0, 0, static_cast<int>(d.ctx.t.size()));
  json out{{"command", "erase"}, {"ok", true}, {"term", show(u, n)}};
  return emit(out, show(u, n) + "\n", true);
}

int cmd_ef_check(const std::string& file) {
  Doc doc = load(file);
  auto xs = doc.of_kind("ef-samples");
  if (xs.empty()) throw Usage(file + ": no ef-samples declaration");
  json out{{"command", "ef-check"}, {"fuel", default_fuel()}, {"samples", json::array()}};
  std::string human;
  bool ok = true;
  for (const Decl* d : xs) {
    EfReport rep = ef_law_suite(d->samples);
    json s{{"name", d->name}, {"clauses", json::object()}};
    human += "samples " + d->name + "\n";
    for (const auto& c : ef_clauses()) {
      std::size_t n = rep.count(c);
      if (n == 0 && c == "claimed") continue;
      bool cok = rep.clause_ok(c);
      s["clauses"][c] = {{"checks", n}, {"ok", cok}};
      human += std::string(cok ? "  ok    " : "  FAIL  ") + c + " (" + std::to_string(n) + " checks)\n";
    }
    s["failures"] = json::array();
    for (const auto& k : rep.checks)
      if (k.verdict != Verdict::Yes) {
        s["failures"].push_back({{"clause", k.clause}, {"witness", k.witness}, {"verdict", verdict_name(k.verdict)}});
        human += "    " + k.clause + ": " + k.witness + " [" + verdict_name(k.verdict) + "]\n";
      }
    s["ok"] = rep.ok();
    ok = ok && rep.ok();
    out["samples"].push_back(s);
  }
  out["ok"] = ok;
  return emit(out, human, ok);
}

int cmd_print(const std::string& file, const std::string& name, bool as_json) {
  Doc doc = load(file);
  print_warnings(doc);
  if (as_json) {
    const Decl* d = doc.find(name, "hol-deriv");
    if (!d) d = doc.find(name, "eff-deriv");
    if (!d) throw Usage("no derivation named " + name);
    std::cout << derivation_to_json(*d).dump(2) << "\n";
    return 0;
  }
  std::cout << print_doc(doc);
  return 0;
}

int cmd_forget(const std::string& file) {
  Doc doc = load(file);
  json out{{"command", "forget"}, {"results", json::array()}};
  std::string human;
  bool ok = true;
  for (const auto& d : doc.decls) {
    if (d.kind != "eff-deriv" && d.kind != "spec") continue;
    json r{{"name", d.name}};
    try {
      SortCtx sc = forget_ctx(d.ctx);
      if (d.kind == "spec") {
        Term p = forget_spec(d.term);
        hol_prop_wf(sc, p);
        r["prop"] = show_hol(p, sc);
      } else {
        HolD h = forget_deriv(d.eff);
        check_hol_derivation(sc, forget_hyps(d.hyps), h);
        r["conclusion"] = show_hol(h->goal, sc);
      }
      r["ok"] = true;
      human += "ok    " + d.kind + " " + d.name + " : " + r.value("prop", r.value("conclusion", "")) + "\n";
    } catch (const Error& e) {
      ok = false;
      r["ok"] = false;
      r["error"] = error_json(e);
      human += "FAIL  " + d.kind + " " + d.name + ": " + e.what() + "\n";
    }
    out["results"].push_back(r);
  }
  out["ok"] = ok;
  return emit(out, human, ok);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"effhol: checker and toolchain for IHOL and EffHOL"};
  app.require_subcommand(1);
  app.add_flag("--json", g_json, "machine-readable output");

  std::string file, name, ambient, instance = "id", strategy = "base", prog, prop;
  bool derive = false, as_json = false;
  long fuel = default_fuel();

  auto* c_hol = app.add_subcommand("check-hol", "check every IHOL declaration");
  c_hol->add_option("FILE", file)->required();
  auto* c_eff = app.add_subcommand("check-effhol", "check every EffHOL declaration");
  c_eff->add_option("FILE", file)->required();
  auto* c_tr = app.add_subcommand("translate", "realizability translation of a proposition");
  c_tr->add_option("FILE", file)->required();
  c_tr->add_option("--prop", name, "hol-prop name")->required();
  auto* c_ex = app.add_subcommand("extract", "extract a realizer from an IHOL derivation");
  c_ex->add_option("FILE", file)->required();
  c_ex->add_option("--derivation", name, "hol-deriv name")->required();
  c_ex->add_option("--ambient", ambient, "file with one ambient declaration");
  c_ex->add_flag("--derive", derive, "also build and check the EffHOL soundness derivation");
  auto* c_in = app.add_subcommand("instantiate", "interpret programs and derivations in a pure instance");
  c_in->add_option("FILE", file)->required();
  c_in->add_option("--instance", instance, "id, cont or an instance file");
  c_in->add_option("--prog", prog, "program whose interpreted type is compared");
  c_in->add_option("--prop", prop, "proposition whose translated type is expected");
  auto* c_no = app.add_subcommand("normalize", "reduce a program");
  c_no->add_option("FILE", file)->required();
  c_no->add_option("--term", name, "prog name")->required();
  c_no->add_option("--fuel", fuel, "step bound (EFFHOL_FUEL)");
  c_no->add_option("--strategy", strategy, "base or cbn")->check(CLI::IsMember({"base", "cbn"}));
  auto* c_er = app.add_subcommand("erase", "type erasure of a program");
  c_er->add_option("FILE", file)->required();
  c_er->add_option("--term", name, "prog name")->required();
  auto* c_ef = app.add_subcommand("ef-check", "evidenced frame law suite on sample files");
  c_ef->add_option("FILE", file)->required();
  auto* c_pr = app.add_subcommand("print", "canonical form with macros expanded");
  c_pr->add_option("FILE", file)->required();
  c_pr->add_option("--derivation", name, "emit this derivation as JSON");
  auto* c_fg = app.add_subcommand("forget", "forgetful translation of EffHOL specs and derivations");
  c_fg->add_option("FILE", file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  as_json = c_pr->parsed() && !name.empty();

  try {
    if (c_hol->parsed()) return cmd_check_hol(file);
    if (c_eff->parsed()) return cmd_check_effhol(file);
    if (c_tr->parsed()) return cmd_translate(file, name);
    if (c_ex->parsed()) return cmd_extract(file, name, ambient, derive);
    if (c_in->parsed()) return cmd_instantiate(file, instance, prog, prop);
    if (c_no->parsed()) return cmd_normalize(file, name, fuel, strategy);
    if (c_er->parsed()) return cmd_erase(file, name);
    if (c_ef->parsed()) return cmd_ef_check(file);
    if (c_pr->parsed()) return cmd_print(file, name, as_json);
    if (c_fg->parsed()) return cmd_forget(file);
  } catch (const Usage& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    if (g_json)
      std::cout << json{{"ok", false}, {"error", error_json(e)}}.dump(2) << "\n";
    else
      std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
