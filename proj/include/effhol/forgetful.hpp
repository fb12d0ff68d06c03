#pragma once

#include "effhol.hpp"
#include "hol.hpp"

namespace effhol {

// Erase programs, types and kinds, keeping the logical skeleton.
// Expression variables become term variables at the same position.

inline Term forget_index(const Term& s) {
  switch (s->tag) {
    case Tag::RefBase: return so_base();
    case Tag::Ref: return so_pred(forget_index(s->k(1)));
    case Tag::IForall: return forget_index(s->k(1));
    default: throw Error(Err::IndexMismatch, "forget: not an index");
  }
}

inline Term forget_spec(const Term& s);

inline Term forget_expr(const Term& e) {
  switch (e->tag) {
    case Tag::EVar: return h_var(e->idx);
    case Tag::ECompr: return h_compr(forget_index(e->k(1)), forget_spec(e->k(2)));
    case Tag::EComprBase: return h_compr0(forget_spec(e->k(1)));
    case Tag::EForall: return forget_expr(e->k(1));
    case Tag::EApp: return forget_expr(e->k(0));
    default: throw Error(Err::IndexMismatch, "forget: not an expression");
  }
}

// p in fn<arg> becomes arg in fn
inline Term forget_spec(const Term& s) {
  switch (s->tag) {
    case Tag::SMem: return h_mem(forget_expr(s->k(2)), forget_expr(s->k(1)));
    case Tag::SMemBase: return h_mem0(forget_expr(s->k(1)));
    case Tag::SImp: return h_imp(forget_spec(s->k(0)), forget_spec(s->k(1)));
    case Tag::After: return forget_spec(s->k(2));
    case Tag::ForallType:
    case Tag::ForallProg: return forget_spec(s->k(1));
    case Tag::ForallExpr: return h_forall(forget_index(s->k(0)), forget_spec(s->k(1)));
    default: throw Error(Err::SpecIllFormed, "forget: not a specification");
  }
}

inline SortCtx forget_ctx(const Ctx& c) {
  SortCtx r;
  for (const auto& s : c.i) r.push_back(forget_index(s));
  return r;
}

inline std::vector<Term> forget_hyps(const std::vector<Term>& hs) {
  std::vector<Term> r;
  for (const auto& h : hs) r.push_back(forget_spec(h));
  return r;
}

inline HolD forget_deriv(const EffD& d) {
  auto p = [&](std::size_t i) { return forget_deriv(d->prem.at(i)); };
  Term g = forget_spec(d->goal);
  switch (d->rule) {
    case ERule::Id: return hd_id(g);
    case ERule::ImpI: return hd_impI(g, p(0));
    case ERule::ImpE: return hd(HRule::ImpE, g, {p(0), p(1)});
    case ERule::ExprI: return hd_uniI(g, p(0));
    case ERule::ExprE: return hd(HRule::UniE, g, {p(0)}, forget_expr(d->wit.at(0)));
    case ERule::MemI: return hd_memI(g, p(0));
    case ERule::MemE: return hd(HRule::MemE, g, {p(0)});
    case ERule::Mem0I: return hd_mem0I(g, p(0));
    case ERule::Mem0E: return hd(HRule::Mem0E, g, {p(0)});
    case ERule::Mon: {
      // the deduction under x becomes an implication, cut against the modality premise
      HolD a = p(0);
      HolD b = p(1);
      return hd(HRule::ImpE, g, {hd_impI(h_imp(b->goal, a->goal), a), b});
    }
    case ERule::ProgI:
    case ERule::ProgE:
    case ERule::TypeI:
    case ERule::TypeE:
    case ERule::ModI:
    case ERule::ModE:
    case ERule::Conv:
    case ERule::AntiRed:
      return p(0);
  }
  throw Error(Err::RuleMismatch, "forget: unknown rule");
}

}  // namespace effhol
