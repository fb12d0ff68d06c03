#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "print.hpp"
#include "terms.hpp"

namespace effhol {

// Intuitionistic many-sorted monadic higher-order logic.
// Sort contexts are vectors with the innermost variable (index 0) at the back.

using SortCtx = std::vector<Term>;

inline SortCtx extend(SortCtx ctx, const Term& s) {
  ctx.push_back(s);
  return ctx;
}

inline std::string show_hol(const Term& t, const SortCtx& ctx) {
  return show(t, Names::sized(static_cast<int>(ctx.size()), 0, 0, 0));
}

inline void expect_cat(const Term& t, Cat c, const char* what) {
  if (!t || t->cat() != c) throw Error(Err::IllTyped, std::string("expected ") + what);
}

inline void hol_prop_wf(const SortCtx& ctx, const Term& p);

inline Term hol_sort_of(const SortCtx& ctx, const Term& t) {
  expect_cat(t, Cat::HTerm, "an IHOL term");
  switch (t->tag) {
    case Tag::HVar:
      if (t->idx >= static_cast<int>(ctx.size()))
        throw Error(Err::UnboundVariable, "term variable #" + std::to_string(t->idx));
      return ctx[ctx.size() - 1 - static_cast<std::size_t>(t->idx)];
    case Tag::HCompr:
      hol_prop_wf(extend(ctx, t->k(0)), t->k(1));
      return so_pred(t->k(0));
    case Tag::HComprBase:
      hol_prop_wf(ctx, t->k(0));
      return so_base();
    default:
      throw Error(Err::IllFormedBody, "not a term");
  }
}

inline void hol_prop_wf(const SortCtx& ctx, const Term& p) {
  expect_cat(p, Cat::HProp, "an IHOL proposition");
  switch (p->tag) {
    case Tag::HMemBase: {
      Term s = hol_sort_of(ctx, p->k(0));
      if (!eq(s, so_base()))
        throw Error(Err::SortMismatch, "member0 argument has sort " + show(s) + ", expected *");
      return;
    }
    case Tag::HMem: {
      Term se = hol_sort_of(ctx, p->k(0));
      Term ss = hol_sort_of(ctx, p->k(1));
      if (!eq(ss, so_pred(se)))
        throw Error(Err::SortMismatch, "set has sort " + show(ss) + " but element has sort " + show(se));
      return;
    }
    case Tag::HImp:
      hol_prop_wf(ctx, p->k(0));
      hol_prop_wf(ctx, p->k(1));
      return;
    case Tag::HForall:
      hol_prop_wf(extend(ctx, p->k(0)), p->k(1));
      return;
    default:
      throw Error(Err::IllFormedBody, "not a proposition");
  }
}

inline Term hol_subst(const Term& x, int j, const Term& t) { return subst(x, NsH, j, t); }

// ---------------------------------------------------------------------------
// Derivations

enum class HRule { Id, ImpI, ImpE, UniI, UniE, MemI, MemE, Mem0I, Mem0E };

inline const char* hrule_name(HRule r) {
  switch (r) {
    case HRule::Id: return "id";
    case HRule::ImpI: return "impI";
    case HRule::ImpE: return "impE";
    case HRule::UniI: return "uniI";
    case HRule::UniE: return "uniE";
    case HRule::MemI: return "memI";
    case HRule::MemE: return "memE";
    case HRule::Mem0I: return "mem0I";
    case HRule::Mem0E: return "mem0E";
  }
  return "?";
}

inline int hrule_arity(HRule r) {
  switch (r) {
    case HRule::Id: return 0;
    case HRule::ImpE: return 2;
    default: return 1;
  }
}

struct HolDeriv;
using HolD = std::shared_ptr<const HolDeriv>;

struct HolDeriv {
  HRule rule;
  Term goal;
  Term witness;  // uniE only
  std::vector<HolD> prem;
};

struct HolSequent {
  SortCtx ctx;
  std::vector<Term> hyps;
  Term goal;
};

inline HolD hd(HRule r, Term goal, std::vector<HolD> prem, Term w = nullptr) {
  return std::make_shared<const HolDeriv>(HolDeriv{r, std::move(goal), std::move(w), std::move(prem)});
}

// Builders that compute the conclusion where the rule determines it.
inline HolD hd_id(Term goal) { return hd(HRule::Id, std::move(goal), {}); }
inline HolD hd_impI(Term goal, HolD d) { return hd(HRule::ImpI, std::move(goal), {std::move(d)}); }
inline HolD hd_impE(HolD d1, HolD d2) {
  if (!d1->goal->is(Tag::HImp)) throw Error(Err::RuleMismatch, "impE: major premise is not an implication");
  Term g = d1->goal->k(1);
  return hd(HRule::ImpE, g, {std::move(d1), std::move(d2)});
}
inline HolD hd_uniI(Term goal, HolD d) { return hd(HRule::UniI, std::move(goal), {std::move(d)}); }
inline HolD hd_uniE(Term t, HolD d) {
  if (!d->goal->is(Tag::HForall)) throw Error(Err::RuleMismatch, "uniE: premise is not universal");
  Term g = hol_subst(d->goal->k(1), 0, t);
  return hd(HRule::UniE, g, {std::move(d)}, std::move(t));
}
inline HolD hd_memI(Term goal, HolD d) { return hd(HRule::MemI, std::move(goal), {std::move(d)}); }
inline HolD hd_memE(HolD d) {
  const Term& g = d->goal;
  if (!g->is(Tag::HMem) || !g->k(1)->is(Tag::HCompr)) throw Error(Err::RuleMismatch, "memE: premise shape");
  return hd(HRule::MemE, hol_subst(g->k(1)->k(1), 0, g->k(0)), {std::move(d)});
}
inline HolD hd_mem0I(Term goal, HolD d) { return hd(HRule::Mem0I, std::move(goal), {std::move(d)}); }
inline HolD hd_mem0E(HolD d) {
  const Term& g = d->goal;
  if (!g->is(Tag::HMemBase) || !g->k(0)->is(Tag::HComprBase)) throw Error(Err::RuleMismatch, "mem0E: premise shape");
  return hd(HRule::Mem0E, g->k(0)->k(0), {std::move(d)});
}

// Called for every node with its reconstructed sequent.
using HolVisitor = std::function<void(const HolDeriv&, const HolSequent&, const std::string& path)>;

namespace detail {

inline void hol_check_rec(const HolD& d, const SortCtx& ctx, const std::vector<Term>& hyps, const std::string& path,
                          const HolVisitor* visit) {
  auto fail = [&](const std::string& why) {
    return Error(Err::RuleMismatch, std::string(hrule_name(d->rule)) + ": " + why, path);
  };
  if (!d) throw Error(Err::RuleMismatch, "missing derivation node", path);
  if (static_cast<int>(d->prem.size()) != hrule_arity(d->rule)) throw fail("wrong number of premises");
  for (const auto& p : d->prem)
    if (!p) throw fail("missing premise");
  try {
    hol_prop_wf(ctx, d->goal);
  } catch (const Error& e) {
    throw Error(e.code, std::string(hrule_name(d->rule)) + ": goal ill-formed: " + e.detail, path);
  }
  if (visit) (*visit)(*d, HolSequent{ctx, hyps, d->goal}, path);
  const Term& g = d->goal;
  auto sub = [&](std::size_t i) { return path + "." + std::to_string(i); };
  auto with_hyp = [&](const Term& h) {
    std::vector<Term> hs = hyps;
    hs.push_back(h);
    return hs;
  };
  switch (d->rule) {
    case HRule::Id:
      for (const auto& h : hyps)
        if (eq(h, g)) return;
      throw fail("goal is not among the hypotheses");
    case HRule::ImpI:
      if (!g->is(Tag::HImp)) throw fail("goal is not an implication");
      if (!eq(d->prem[0]->goal, g->k(1))) throw fail("premise does not prove the consequent");
      hol_check_rec(d->prem[0], ctx, with_hyp(g->k(0)), sub(0), visit);
      return;
    case HRule::ImpE:
      if (!eq(d->prem[0]->goal, h_imp(d->prem[1]->goal, g)))
        throw fail("major premise is not minor premise implies goal");
      hol_check_rec(d->prem[0], ctx, hyps, sub(0), visit);
      hol_check_rec(d->prem[1], ctx, hyps, sub(1), visit);
      return;
    case HRule::UniI: {
      if (!g->is(Tag::HForall)) throw fail("goal is not universal");
      if (!eq(d->prem[0]->goal, g->k(1))) throw fail("premise does not prove the body");
      std::vector<Term> hs;
      for (const auto& h : hyps) hs.push_back(shift(h, NsH, 1));
      hol_check_rec(d->prem[0], extend(ctx, g->k(0)), hs, sub(0), visit);
      return;
    }
    case HRule::UniE: {
      const Term& pg = d->prem[0]->goal;
      if (!d->witness) throw fail("missing witness term");
      if (!pg->is(Tag::HForall)) throw fail("premise is not universal");
      Term s;
      try {
        s = hol_sort_of(ctx, d->witness);
      } catch (const Error& e) {
        throw Error(Err::IllTyped, "uniE: witness ill-sorted: " + e.detail, path);
      }
      if (!eq(s, pg->k(0))) throw Error(Err::IllTyped, "uniE: witness has sort " + show(s), path);
      if (!eq(g, hol_subst(pg->k(1), 0, d->witness))) throw fail("goal is not the instantiated body");
      hol_check_rec(d->prem[0], ctx, hyps, sub(0), visit);
      return;
    }
    case HRule::MemI:
    case HRule::MemE: {
      const Term& m = d->rule == HRule::MemI ? g : d->prem[0]->goal;
      const Term& body = d->rule == HRule::MemI ? d->prem[0]->goal : g;
      if (!m->is(Tag::HMem) || !m->k(1)->is(Tag::HCompr)) throw fail("membership in a comprehension expected");
      Term s = hol_sort_of(ctx, m->k(0));
      if (!eq(s, m->k(1)->k(0))) throw Error(Err::IllTyped, "member has the wrong sort", path);
      if (!eq(body, hol_subst(m->k(1)->k(1), 0, m->k(0)))) throw fail("substituted body mismatch");
      hol_check_rec(d->prem[0], ctx, hyps, sub(0), visit);
      return;
    }
    case HRule::Mem0I:
    case HRule::Mem0E: {
      const Term& m = d->rule == HRule::Mem0I ? g : d->prem[0]->goal;
      const Term& body = d->rule == HRule::Mem0I ? d->prem[0]->goal : g;
      if (!m->is(Tag::HMemBase) || !m->k(0)->is(Tag::HComprBase))
        throw fail("base membership in a base comprehension expected");
      if (!eq(body, m->k(0)->k(0))) throw fail("body mismatch");
      hol_check_rec(d->prem[0], ctx, hyps, sub(0), visit);
      return;
    }
  }
}

}  // namespace detail

// Verifies the derivation against the root context and hypotheses and returns
// the conclusion sequent.
inline HolSequent check_hol_derivation(const SortCtx& ctx, const std::vector<Term>& hyps, const HolD& d,
                                       const HolVisitor* visit = nullptr) {
  for (const auto& s : ctx) expect_cat(s, Cat::Sort, "a sort");
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    try {
      hol_prop_wf(ctx, hyps[i]);
    } catch (const Error& e) {
      throw Error(e.code, "hypothesis " + std::to_string(i) + " ill-formed: " + e.detail, "root");
    }
  }
  detail::hol_check_rec(d, ctx, hyps, "root", visit);
  return HolSequent{ctx, hyps, d->goal};
}

}  // namespace effhol
