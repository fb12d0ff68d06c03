// One line per acceptance criterion. Exit status is the number of failures.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <string>

#include "corpus.hpp"
#include "effhol/ef.hpp"
#include "effhol/forgetful.hpp"
#include "effhol/instances.hpp"
#include "effhol/translation.hpp"
#include "gen.hpp"

using namespace effhol;
using effhol::testing::load_corpus;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// ((a => b) => a) => a over two base sorts
Term peirce() {
  Term a = h_mem0(h_var(1));
  Term b = h_mem0(h_var(0));
  return h_forall(so_base(), h_forall(so_base(), h_imp(h_imp(h_imp(a, b), a), a)));
}

Outcome callcc_types_peirce() {
  auto t0 = Clock::now();
  ContinuationInstance K;
  Instantiator in(K);
  Doc doc = load_corpus("peirce.sx");
  const Decl& pd = doc.get("callcc", "prog");
  const Decl& hd_ = doc.get("peirce", "hol-prop");
  if (!eq(hd_.term, peirce())) return {false, "corpus Peirce differs from the stated law"};
  CallCC built = build_callcc(t_var(1), t_var(0));
  if (!eq(pd.term, built.source)) return {false, "corpus call/cc differs from the built one"};
  Term interp = in.term(Ctx{}, built.source);
  if (!eq(interp, built.callcc)) return {false, "interpretation differs from the prebuilt program"};
  Term got = conv_normalize(type_of(Ctx{}, interp));
  Term want = conv_normalize(in.term(Ctx{}, trtype(peirce())));
  double s = seconds_since(t0);
  if (!eq(got, want)) return {false, "type " + show(got) + " vs " + show(want)};
  if (s >= 1.0) return {false, "took " + std::to_string(s) + "s"};
  return {true, "exact after normalization, " + std::to_string(static_cast<int>(s * 1000)) + " ms"};
}

Outcome extraction_corpus() {
  Doc doc = load_corpus("hol.sx");
  auto ds = doc.of_kind("hol-deriv");
  for (const char* need : {"I", "K", "B", "mem-roundtrip", "mem0-roundtrip", "forall-chain"})
    if (!doc.find(need, "hol-deriv")) return {false, std::string("corpus lacks ") + need};
  int ok = 0;
  for (const Decl* d : ds) {
    try {
      check_hol_derivation(d->sctx, d->hyps, d->hol);
      ExtractionResult r = extract_realizer(d->sctx, d->hyps, d->hol);
      Term want = t_comp(trtype(d->hol->goal));
      if (!convertible(type_of(r.ctx, r.realizer), want)) return {false, d->name + ": realizer has the wrong type"};
      EffSequent s = check_effhol_derivation(r.ctx, r.triple.hyps, derive_soundness(d->hyps, d->hol));
      if (!eq(s.goal, r.triple.goal)) return {false, d->name + ": soundness derivation proves another triple"};
      ++ok;
    } catch (const std::exception& e) {
      return {false, d->name + ": " + e.what()};
    }
  }
  if (ok < 10) return {false, "only " + std::to_string(ok) + " derivations"};
  return {true, std::to_string(ok) + " derivations, 0 failures"};
}

Outcome realizer_exactness() {
  const Term A = h_mem0(h_var(1));
  const Term B = h_mem0(h_var(0));
  const SortCtx two{so_base(), so_base()};
  const Term XA = t_var(1), XB = t_var(0);
  struct Case {
    const char* rule;
    SortCtx sctx;
    std::vector<Term> hyps;
    HolD d;
    Term expected;
  };
  std::vector<Case> cases;
  // ret (lam x1:A. ret x1)
  cases.push_back({"impI", two, {}, hd_impI(h_imp(A, A), hd_id(A)), p_ret(p_abs(XA, p_ret(p_var(0))))});
  // bind x0 <- ret f; bind x1 <- ret a; x0 x1
  cases.push_back({"impE", two, {h_imp(A, B), A}, hd_impE(hd_id(h_imp(A, B)), hd_id(A)),
                   p_bind(t_fun(XA, t_comp(XB)), p_ret(p_var(1)),
                          p_bind(XA, p_ret(p_var(1)), p_app(p_var(1), p_var(0))))});
  // ret (Lam X. ret (lam x:X. ret x))
  Term u = h_mem0(h_var(0));
  cases.push_back({"uniI", {}, {}, hd_uniI(h_forall(so_base(), h_imp(u, u)), hd_impI(h_imp(u, u), hd_id(u))),
                   p_ret(p_tyabs(k_star(), p_ret(p_abs(t_var(0), p_ret(p_var(0))))))});
  // bind x0 <- ret h; x0 [X_a]
  Term all = h_forall(so_base(), h_mem0(h_var(0)));
  cases.push_back({"uniE", {so_base()}, {all}, hd_uniE(h_var(0), hd_id(all)),
                   p_bind(t_all(k_star(), t_comp(t_var(0))), p_ret(p_var(0)), p_tyapp(p_var(0), t_var(0)))});
  for (const auto& c : cases) {
    try {
      ExtractionResult r = extract_realizer(c.sctx, c.hyps, c.d);
      if (!eq(r.realizer, c.expected)) return {false, std::string(c.rule) + ": " + show(r.realizer) + " vs " + show(c.expected)};
    } catch (const std::exception& e) {
      return {false, std::string(c.rule) + ": " + e.what()};
    }
  }
  return {true, "impI, impE, uniI, uniE identical"};
}

Outcome substitution_lemma() {
  gen::Gen g(11);
  int tried = 0, bad = 0;
  std::string first;
  while (tried < 1000) {
    SortCtx s;
    int n = 1 + g.pick(3);
    for (int k = 0; k < n; ++k) s.push_back(g.sort(2));
    Term psi = g.hol_prop(s, 3);
    int j = g.pick(n);
    SortCtx rest = s;
    rest.erase(rest.end() - 1 - j);
    Term t = g.hol_term(rest, s[s.size() - 1 - static_cast<std::size_t>(j)], 2);
    ++tried;
    try {
      hol_prop_wf(s, psi);
      check_substitution_lemma(s, psi, t, j);
    } catch (const std::exception& e) {
      if (bad++ == 0) first = e.what();
    }
  }
  if (bad) return {false, std::to_string(bad) + " counterexamples, first: " + first};
  return {true, "1000 pairs, 0 counterexamples"};
}

Outcome subject_reduction() {
  gen::Gen g(23);
  Ctx c = gen::Gen::base_ctx();
  int bad = 0, reducts = 0;
  std::string first;
  for (int i = 0; i < 1000; ++i) {
    Term ty = g.type(c.k, 2);
    Term p = g.redex(c, ty, 4);
    try {
      Term t0 = type_of(c, p);
      Term q = p;
      for (int k = 0; k < 32; ++k) {
        Term n = step(q, Strategy::Base);
        if (!n) break;
        ++reducts;
        if (!convertible(type_of(c, n), t0)) throw std::runtime_error("type changed on " + show(q));
        q = n;
      }
    } catch (const std::exception& e) {
      if (bad++ == 0) first = e.what();
    }
  }
  if (bad) return {false, std::to_string(bad) + " counterexamples, first: " + first};
  if (reducts < 1000) return {false, "only " + std::to_string(reducts) + " reduction steps"};
  return {true, "1000 programs, " + std::to_string(reducts) + " reducts, 0 counterexamples"};
}

Outcome instance_validity() {
  Ctx c = gen::Gen::base_ctx();
  Doc doc = load_corpus("effhol.sx");
  std::string summary;
  for (const char* name : {"id", "cont"}) {
    gen::Gen g(31);
    std::vector<LawSample> ss;
    for (int i = 0; i < 50; ++i) {
      ss.push_back(g.mod_i(c));
      ss.push_back(g.mod_e(c));
      ss.push_back(g.mon(c));
      ss.push_back(g.antired(c));
    }
    auto inst = builtin_instance(name);
    LawReport r = check_instance_laws(*inst, ss);
    if (!r.ok()) return {false, std::string(name) + ": " + r.failures.front()};
    for (const char* law : {"modI", "modE", "mon", "antired"})
      if (r.passed[law] < 50) return {false, std::string(name) + ": " + law + " has " + std::to_string(r.passed[law]) + " samples"};
    int n = 0;
    for (const Decl* d : doc.of_kind("eff-deriv")) {
      try {
        instantiate_derivation(*inst, d->ctx, d->hyps, d->eff);
        ++n;
      } catch (const std::exception& e) {
        return {false, std::string(name) + ": corpus " + d->name + ": " + e.what()};
      }
    }
    summary += std::string(summary.empty() ? "" : "; ") + name + " 4x50 samples, " + std::to_string(n) + " corpus derivations";
  }
  return {true, summary};
}

Outcome ef_laws() {
  Term x = u_var(0);
  if (!eq(ef_id(), u_lam(u_ret(x)))) return {false, "e_id"};
  if (!eq(ef_fst(), u_lam(u_ret(u_fst(x))))) return {false, "e_fst"};
  if (!eq(ef_snd(), u_lam(u_ret(u_snd(x))))) return {false, "e_snd"};
  if (!eq(ef_eval(), u_lam(u_app(u_fst(x), u_snd(x))))) return {false, "e_eval"};
  Term e1 = ef_fst(), e2 = ef_snd();
  if (!eq(ef_compose(e1, e2), u_lam(u_bind(u_app(e1, u_var(0)), u_app(e2, u_var(0)))))) return {false, "compose"};
  if (!eq(ef_pair(e1, e2),
          u_lam(u_bind(u_app(e1, u_var(0)), u_bind(u_app(e2, u_var(1)), u_ret(u_pair(u_var(1), u_var(0))))))))
    return {false, "pair"};
  if (!eq(ef_lambda(e1), u_lam(u_ret(u_lam(u_app(e1, u_pair(u_var(1), u_var(0)))))))) return {false, "lambda"};
  if (!eq(ef_e_top(), u_lam(u_ret(ef_top_value())))) return {false, "e_top"};

  Doc doc = load_corpus("ef_samples.sx");
  auto xs = doc.of_kind("ef-samples");
  if (xs.empty()) return {false, "no sample sets"};
  int checks = 0;
  for (const Decl* d : xs) {
    EfReport r = ef_law_suite(d->samples);
    for (const char* cl : {"reflexivity", "transitivity", "top", "conjunction", "universal-implication", "lift-monotone",
                           "lift-ret", "lift-bind", "lift-antired"}) {
      if (r.count(cl) == 0) return {false, d->name + ": no checks for " + cl};
      if (!r.clause_ok(cl)) return {false, d->name + ": " + cl + " fails"};
    }
    if (!r.ok()) return {false, d->name + ": claimed relation fails"};
    checks += static_cast<int>(r.checks.size());
  }
  return {true, "five clauses and four lift properties, " + std::to_string(checks) + " checks"};
}

Outcome adversarial() {
  int rejected = 0, per_calculus[2] = {0, 0};
  for (const char* file : {"adversarial_hol.sx", "adversarial_effhol.sx"}) {
    Doc doc = load_corpus(file);
    for (const auto& d : doc.decls) {
      bool eff = d.kind == "eff-deriv";
      if (!eff && d.kind != "hol-deriv") continue;
      Term claim = eff ? d.eff->goal : d.hol->goal;
      if (!eq(claim, eff ? s_bot() : h_bot())) return {false, d.name + " does not claim falsity"};
      try {
        if (eff)
          check_effhol_derivation(d.ctx, d.hyps, d.eff);
        else
          check_hol_derivation(d.sctx, d.hyps, d.hol);
        return {false, d.name + " was accepted"};
      } catch (const Error& e) {
        if (!locate(d, e.path)) return {false, d.name + ": error at " + e.path + " has no source location"};
        ++rejected;
        ++per_calculus[eff ? 1 : 0];
      }
    }
  }
  if (rejected < 10 || per_calculus[0] == 0 || per_calculus[1] == 0) return {false, std::to_string(rejected) + " rejections"};
  return {true, std::to_string(rejected) + " rejected with locations (" + std::to_string(per_calculus[0]) + " IHOL, " +
                    std::to_string(per_calculus[1]) + " EffHOL)"};
}

Outcome forgetful() {
  Doc doc = load_corpus("effhol.sx");
  int n = 0;
  for (const auto& d : doc.decls) {
    if (d.kind != "spec" && d.kind != "eff-deriv") continue;
    try {
      SortCtx sc = forget_ctx(d.ctx);
      if (d.kind == "spec") {
        hol_prop_wf(sc, forget_spec(d.term));
      } else {
        HolSequent s = check_hol_derivation(sc, forget_hyps(d.hyps), forget_deriv(d.eff));
        if (!eq(s.goal, forget_spec(d.eff->goal))) return {false, d.name + ": forgotten derivation proves another goal"};
      }
      ++n;
    } catch (const std::exception& e) {
      return {false, d.name + ": " + e.what()};
    }
  }
  return {true, std::to_string(n) + " specs and derivations accepted"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"callcc-peirce", callcc_types_peirce},
      {"extraction-corpus", extraction_corpus},
      {"realizer-exactness", realizer_exactness},
      {"substitution-preservation", substitution_lemma},
      {"subject-reduction", subject_reduction},
      {"instance-validity", instance_validity},
      {"evidenced-frame-laws", ef_laws},
      {"consistency-smoke", adversarial},
      {"forgetful-translation", forgetful},
  };
  int failures = 0, k = 0;
  for (const auto& [name, run] : criteria) {
    ++k;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.ok) ++failures;
    std::printf("%s criterion %d %s: %s\n", o.ok ? "PASS" : "FAIL", k, name, o.detail.c_str());
  }
  std::fflush(stdout);
  return failures;
}
