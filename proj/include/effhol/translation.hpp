#pragma once

#include <optional>
#include <string>
#include <vector>

#include "effhol.hpp"
#include "hol.hpp"

namespace effhol {

// Realizability translation from IHOL into EffHOL. A term variable u at
// de Bruijn position i becomes both the type variable X_u and the
// expression variable y_u at position i.

inline Term trkind(const Term& s) {
  if (s->is(Tag::SBase)) return k_star();
  if (s->is(Tag::SPred)) return k_con(trkind(s->k(0)));
  throw Error(Err::IllSorted, "not a sort");
}

inline Term trind(const Term& ty, const Term& s) {
  if (s->is(Tag::SBase)) return i_ref0(ty);
  if (s->is(Tag::SPred))
    return i_all(trkind(s->k(0)), i_ref(t_app(shift(ty, NsK, 1), t_var(0)), trind(t_var(0), s->k(0))));
  throw Error(Err::IllSorted, "not a sort");
}

inline Term trtype(const Term& psi);
inline Term trspec(const Term& psi, const Term& p);

inline Term tretype(const Term& t) {
  switch (t->tag) {
    case Tag::HVar: return t_var(t->idx);
    case Tag::HCompr: return t_abs(trkind(t->k(0)), trtype(t->k(1)));
    case Tag::HComprBase: return trtype(t->k(0));
    default: throw Error(Err::IllSorted, "not an IHOL term");
  }
}

inline Term trtrm(const Term& t) {
  switch (t->tag) {
    case Tag::HVar: return e_var(t->idx);
    case Tag::HCompr:
      return e_all(trkind(t->k(0)),
                   e_compr(trtype(t->k(1)), trind(t_var(0), t->k(0)), trspec(t->k(1), p_var(0))));
    case Tag::HComprBase: return e_compr0(trtype(t->k(0)), trspec(t->k(0), p_var(0)));
    default: throw Error(Err::IllSorted, "not an IHOL term");
  }
}

inline Term trtype(const Term& psi) {
  switch (psi->tag) {
    case Tag::HMemBase: return tretype(psi->k(0));
    case Tag::HMem: return t_app(tretype(psi->k(1)), tretype(psi->k(0)));
    case Tag::HImp: return t_fun(trtype(psi->k(0)), t_comp(trtype(psi->k(1))));
    case Tag::HForall: return t_all(trkind(psi->k(0)), t_comp(trtype(psi->k(1))));
    default: throw Error(Err::IllSorted, "not an IHOL proposition");
  }
}

// p is a program of type trtype(psi) in the current context.
inline Term trspec(const Term& psi, const Term& p) {
  switch (psi->tag) {
    case Tag::HMemBase: return s_mem0(p, trtrm(psi->k(0)));
    case Tag::HMem:
      return s_mem(p, e_app(trtrm(psi->k(1)), tretype(psi->k(0))), trtrm(psi->k(0)));
    case Tag::HImp: {
      const Term& a = psi->k(0);
      const Term& b = psi->k(1);
      Term app = p_app(shift(p, NsP, 1), p_var(0));
      return s_all_prog(trtype(a), s_imp(trspec(a, p_var(0)), s_after(app, trtype(b), trspec(b, p_var(0)))));
    }
    case Tag::HForall: {
      const Term& s = psi->k(0);
      const Term& body = psi->k(1);
      Term inst = p_tyapp(shift(p, NsK, 1), t_var(0));
      return s_all_type(trkind(s),
                        s_all_expr(trind(t_var(0), s), s_after(inst, trtype(body), trspec(body, p_var(0)))));
    }
    default: throw Error(Err::IllSorted, "not an IHOL proposition");
  }
}

// (kinds, indices) for a sort context; both lists align with it.
inline Ctx lift_contexts(const SortCtx& sctx) {
  Ctx c;
  const int n = static_cast<int>(sctx.size());
  for (int i = 0; i < n; ++i) c.k.push_back(trkind(sctx[static_cast<std::size_t>(i)]));
  for (int i = 0; i < n; ++i) c.i.push_back(trind(t_var(n - 1 - i), sctx[static_cast<std::size_t>(i)]));
  return c;
}

// ---------------------------------------------------------------------------
// Substitution preservation, checked clause by clause.

namespace detail {
inline void collect_terms(const Term& x, int depth, std::vector<std::pair<Term, int>>& out) {
  if (x->cat() == Cat::HTerm) out.emplace_back(x, depth);
  const TagInfo& ti = info(x->tag);
  for (std::size_t i = 0; i < x->kids.size(); ++i) collect_terms(x->kids[i], depth + ti.kids[i].binds[NsH], out);
}
}  // namespace detail

// psi lives in sctx, t in sctx with position j removed.
inline void check_substitution_lemma(const SortCtx& sctx, const Term& psi, const Term& t, int j = 0) {
  (void)sctx;
  auto viol = [](int clause, const std::string& lhs, const std::string& rhs) {
    return Error(Err::LemmaViolation, "clause " + std::to_string(clause) + ": " + lhs + " vs " + rhs);
  };
  const Term ty = tretype(t);
  const Term ex = trtrm(t);
  Term l1 = trtype(hol_subst(psi, j, t));
  Term r1 = subst(trtype(psi), NsK, j, ty);
  if (!eq(l1, r1)) throw viol(1, show(l1), show(r1));
  // the distinguished program variable is the innermost one of a one-entry type context
  Term x = p_var(0);
  Term l2 = trspec(hol_subst(psi, j, t), x);
  Term r2 = subst(subst(trspec(psi, x), NsK, j, ty), NsE, j, ex);
  if (!eq(l2, r2)) throw viol(2, show(l2), show(r2));
  std::vector<std::pair<Term, int>> terms;
  detail::collect_terms(psi, 0, terms);
  for (const auto& [tp, d] : terms) {
    Term td = shift(t, NsH, d);
    Term tyd = shift_all(ty, Depth{0, d, 0, d, 0});
    Term exd = shift_all(ex, Depth{0, d, 0, d, 0});
    Term l3 = trtrm(hol_subst(tp, j + d, td));
    Term r3 = subst(subst(trtrm(tp), NsK, j + d, tyd), NsE, j + d, exd);
    if (!eq(l3, r3)) throw viol(3, show(l3), show(r3));
    Term l4 = tretype(hol_subst(tp, j + d, td));
    Term r4 = subst(subst(tretype(tp), NsK, j + d, tyd), NsE, j + d, exd);
    if (!eq(l4, r4)) throw viol(4, show(l4), show(r4));
  }
}

// ---------------------------------------------------------------------------
// Realizer extraction

struct Ambient {
  Ctx ctx;                  // extra kind, index and type entries (outermost)
  std::vector<Term> specs;  // assumptions over ctx
};

struct ExtractionResult {
  Term realizer;
  Term type;  // the computation type Comp(trtype goal)
  EffSequent triple;
  std::vector<Term> hyp_types;  // x1 .. xn
  Ctx ctx;                      // full EffHOL context of the triple
};

namespace detail {

struct Extractor {
  int first_match(const std::vector<Term>& hyps, const Term& g) const {
    for (std::size_t i = 0; i < hyps.size(); ++i)
      if (eq(hyps[i], g)) return static_cast<int>(i);
    throw Error(Err::RuleMismatch, "id: goal is not a hypothesis");
  }

  Term run(const HolD& d, const std::vector<Term>& hyps) const {
    const int n = static_cast<int>(hyps.size());
    switch (d->rule) {
      case HRule::Id:
        return p_ret(p_var(n - 1 - first_match(hyps, d->goal)));
      case HRule::ImpI: {
        const Term& a = d->goal->k(0);
        std::vector<Term> hs = hyps;
        hs.push_back(a);
        return p_ret(p_abs(trtype(a), run(d->prem[0], hs)));
      }
      case HRule::ImpE: {
        Term p0 = run(d->prem[0], hyps);
        Term p1 = run(d->prem[1], hyps);
        const Term& imp = d->prem[0]->goal;
        return p_bind(trtype(imp), p0, p_bind(trtype(imp->k(0)), shift(p1, NsP, 1), p_app(p_var(1), p_var(0))));
      }
      case HRule::UniI: {
        std::vector<Term> hs;
        for (const auto& h : hyps) hs.push_back(shift(h, NsH, 1));
        return p_ret(p_tyabs(trkind(d->goal->k(0)), run(d->prem[0], hs)));
      }
      case HRule::UniE: {
        Term p0 = run(d->prem[0], hyps);
        return p_bind(trtype(d->prem[0]->goal), p0, p_tyapp(p_var(0), tretype(d->witness)));
      }
      case HRule::MemI:
      case HRule::MemE:
      case HRule::Mem0I:
      case HRule::Mem0E:
        return run(d->prem[0], hyps);
    }
    throw Error(Err::RuleMismatch, "unknown rule");
  }
};

}  // namespace detail

// Realizer of a checked derivation: typed at Comp(trtype goal) under the
// lifted sort context and x1:trtype(psi1) .. xn:trtype(psin).
inline Term extract_program(const HolD& d, const std::vector<Term>& hyps) {
  return detail::Extractor{}.run(d, hyps);
}

// Full EffHOL context for a sort context, hypothesis list and ambient part.
inline Ctx extraction_ctx(const SortCtx& sctx, const std::vector<Term>& hyps, const Ambient* amb) {
  Ctx lifted = lift_contexts(sctx);
  const int ns = static_cast<int>(sctx.size());
  Ctx c;
  if (amb) {
    c.k = amb->ctx.k;
    for (const auto& s : amb->ctx.i) c.i.push_back(shift(s, NsK, ns));
    for (const auto& t : amb->ctx.t) c.t.push_back(shift(t, NsK, ns));
  }
  c.k.insert(c.k.end(), lifted.k.begin(), lifted.k.end());
  c.i.insert(c.i.end(), lifted.i.begin(), lifted.i.end());
  for (const auto& h : hyps) c.t.push_back(trtype(h));
  return c;
}

// Specs assumed by the soundness triple: shifted ambient assumptions, then
// the translated hypotheses realized by x1 .. xn.
inline std::vector<Term> extraction_hyps(const SortCtx& sctx, const std::vector<Term>& hyps, const Ambient* amb) {
  const int ns = static_cast<int>(sctx.size());
  const int n = static_cast<int>(hyps.size());
  std::vector<Term> r;
  if (amb)
    for (const auto& s : amb->specs) r.push_back(shift_all(s, Depth{0, ns, n, ns, 0}));
  for (int i = 0; i < n; ++i) r.push_back(trspec(hyps[static_cast<std::size_t>(i)], p_var(n - 1 - i)));
  return r;
}

inline EffSequent emit_soundness_triple(const ExtractionResult& r) { return r.triple; }

inline ExtractionResult extract_realizer(const SortCtx& sctx, const std::vector<Term>& hyps, const HolD& d,
                                         const Ambient* amb = nullptr) {
  check_hol_derivation(sctx, hyps, d);
  if (amb) {
    ctx_wf(amb->ctx);
    for (const auto& s : amb->specs) spec_wf(amb->ctx, s);
  }
  ExtractionResult r;
  r.realizer = extract_program(d, hyps);
  r.ctx = extraction_ctx(sctx, hyps, amb);
  for (const auto& h : hyps) r.hyp_types.push_back(trtype(h));
  Term ty = trtype(d->goal);
  r.type = t_comp(ty);
  // the body speaks about the result bound by the modality
  r.triple = make_triple(r.ctx, extraction_hyps(sctx, hyps, amb), ty, r.realizer, trspec(d->goal, p_var(0)));
  return r;
}

// ---------------------------------------------------------------------------
// EffHOL derivation of the soundness triple, node by node.

namespace detail {

struct Deriver {
  // Ambient assumptions never need to be mentioned: hypotheses flow from the root.
  EffD run(const HolD& d, const std::vector<Term>& hyps) const {
    const Term p = extract_program(d, hyps);
    const Term ty = trtype(d->goal);
    const Term goal = s_after(p, ty, trspec(d->goal, p_var(0)));
    switch (d->rule) {
      case HRule::Id: {
        Term prem = subst(goal->k(2), NsP, 0, p->k(0));
        return ed_modI(goal, ed_id(prem));
      }
      case HRule::ImpI: {
        const Term& a = d->goal->k(0);
        const Term& b = d->goal->k(1);
        std::vector<Term> hs = hyps;
        hs.push_back(a);
        EffD ih = run(d->prem[0], hs);
        const Term lam = p->k(0);
        Term body = subst(goal->k(2), NsP, 0, lam);  // forall x1. a_x1 => after (lam x1) ...
        Term imp = body->k(1);
        Term aft = imp->k(1);
        Term tb = t_comp(trtype(b));
        Term motive = s_after(p_var(0), shift(aft->k(1), NsP, 1), shift(aft->k(2), NsP, 1, 1));
        EffD ar = ed_antired(tb, motive, aft->k(0), ih->goal->k(0), 1, Strategy::Base, ih);
        return ed_modI(goal, ed_progI(body, ed_impI(imp, ar)));
      }
      case HRule::ImpE: {
        const Term& imp = d->prem[0]->goal;
        EffD ih0 = run(d->prem[0], hyps);
        EffD ih1 = run(d->prem[1], hyps);
        const Term g0 = ih0->goal;
        const Term g1 = ih1->goal;
        // under x0: nested modality over the rest of the bind
        const Term& rest = p->k(2);
        Term phi1 = g0->k(2);  // trspec(imp, x0)
        // innermost: x0 x1 under x0, x1
        Term maj = shift(phi1, NsP, 1);
        EffD a_inner = ed_impE(ed_progE(p_var(0), ed_id(maj)), ed_id(trspec(imp->k(0), p_var(0))));
        EffD b_inner = ed_id(shift(g1, NsP, 1));
        EffD mon_inner = ed_mon(a_inner, b_inner);
        Term aft_rest = s_after(rest, ty, shift(goal->k(2), NsP, 1, 1));
        EffD a_outer = ed_modE(aft_rest, mon_inner);
        EffD mon_outer = ed_mon(a_outer, ed_id(g0));
        EffD body = ed_modE(goal, mon_outer);
        Term c1 = s_imp(g1, goal);
        Term c0 = s_imp(g0, c1);
        EffD cut = ed_impI(c0, ed_impI(c1, body));
        return ed_impE(ed_impE(cut, ih0), ih1);
      }
      case HRule::UniI: {
        std::vector<Term> hs;
        for (const auto& h : hyps) hs.push_back(shift(h, NsH, 1));
        EffD ih = run(d->prem[0], hs);
        const Term tyabs = p->k(0);
        Term body = subst(goal->k(2), NsP, 0, tyabs);  // forall X. forall y. after (tyabs X) ...
        Term ex = body->k(1);
        Term aft = ex->k(1);
        Term motive = s_after(p_var(0), shift(aft->k(1), NsP, 1), shift(aft->k(2), NsP, 1, 1));
        EffD ar = ed_antired(t_comp(aft->k(1)), motive, aft->k(0), ih->goal->k(0), 1, Strategy::Base, ih);
        return ed_modI(goal, ed_typeI(body, ed_exprI(ex, ar)));
      }
      case HRule::UniE: {
        EffD ih = run(d->prem[0], hyps);
        Term phi1 = ih->goal->k(2);  // trspec(all, x0)
        EffD inst = ed_exprE(trtrm(d->witness), ed_typeE(tretype(d->witness), ed_id(phi1)));
        Term want = s_after(p->k(2), ty, shift(goal->k(2), NsP, 1, 1));
        EffD a = ed_conv_to(want, inst);
        return ed_modE(goal, ed_mon(a, ih));
      }
      case HRule::MemI: {
        // goal t in {u:s | psi}; premise psi[u:=t]
        EffD ih = run(d->prem[0], hyps);
        const Term mem = trspec(d->goal, p_var(0));
        const Term& fn = mem->k(1);  // EApp(EForall(.. ECompr ..), tau_t)
        Term compr = subst(fn->k(0)->k(1), NsK, 0, fn->k(1));
        Term g2 = s_mem(p_var(0), compr, mem->k(2));
        Term prem = subst(subst(compr->k(2), NsP, 0, p_var(0)), NsE, 0, mem->k(2));
        EffD a = ed_memI(g2, ed_conv_to(prem, ed_id(ih->goal->k(2))));
        return ed_conv_to(goal, ed_mon(a, ih));
      }
      case HRule::MemE: {
        EffD ih = run(d->prem[0], hyps);
        const Term mem = ih->goal->k(2);
        const Term& fn = mem->k(1);
        Term compr = subst(fn->k(0)->k(1), NsK, 0, fn->k(1));
        Term g2 = s_mem(p_var(0), compr, mem->k(2));
        Term bty = nf(ih->goal->k(1));
        EffD b = ed_conv_to(s_after(p, bty, g2), ih);
        EffD a = ed_memE(ed_id(g2));
        return ed_conv_to(goal, ed_mon(a, b));
      }
      case HRule::Mem0I: {
        EffD ih = run(d->prem[0], hyps);
        EffD a = ed_mem0I(goal->k(2), ed_id(ih->goal->k(2)));
        return ed_mon(a, ih);
      }
      case HRule::Mem0E: {
        EffD ih = run(d->prem[0], hyps);
        EffD a = ed_mem0E(ed_id(ih->goal->k(2)));
        return ed_conv_to(goal, ed_mon(a, ih));
      }
    }
    throw Error(Err::RuleMismatch, "unknown rule");
  }
};

}  // namespace detail

// Derivation of the soundness triple, checked under the base strategy.
inline EffD derive_soundness(const std::vector<Term>& hyps, const HolD& d) { return detail::Deriver{}.run(d, hyps); }

}  // namespace effhol
