#pragma once

#include <string>
#include <utility>

#include "syntax.hpp"

namespace effhol {

enum class Err {
  UnboundVariable,
  IllFormedBody,
  SortMismatch,
  IllSorted,
  KindMismatch,
  TypeMismatch,
  IndexMismatch,
  SpecIllFormed,
  RuleMismatch,
  IllTyped,
  ReductionMismatch,
  FuelExhausted,
  TemplateMissing,
  RecheckFailed,
  LemmaViolation,
  LawViolated,
  CandidateRejected,
  Unsupported,
  SyntaxError,
  ScopeError,
  SchemaError,
};

inline const char* err_name(Err e) {
  switch (e) {
    case Err::UnboundVariable: return "UnboundVariable";
    case Err::IllFormedBody: return "IllFormedBody";
    case Err::SortMismatch: return "SortMismatch";
    case Err::IllSorted: return "IllSorted";
    case Err::KindMismatch: return "KindMismatch";
    case Err::TypeMismatch: return "TypeMismatch";
    case Err::IndexMismatch: return "IndexMismatch";
    case Err::SpecIllFormed: return "SpecIllFormed";
    case Err::RuleMismatch: return "RuleMismatch";
    case Err::IllTyped: return "IllTyped";
    case Err::ReductionMismatch: return "ReductionMismatch";
    case Err::FuelExhausted: return "FuelExhausted";
    case Err::TemplateMissing: return "TemplateMissing";
    case Err::RecheckFailed: return "RecheckFailed";
    case Err::LemmaViolation: return "LemmaViolation";
    case Err::LawViolated: return "LawViolated";
    case Err::CandidateRejected: return "CandidateRejected";
    case Err::Unsupported: return "Unsupported";
    case Err::SyntaxError: return "SyntaxError";
    case Err::ScopeError: return "ScopeError";
    case Err::SchemaError: return "SchemaError";
  }
  return "Error";
}

class Error : public std::runtime_error {
 public:
  Err code;
  std::string path;
  std::string detail;

  Error(Err c, std::string d, std::string p = "")
      : std::runtime_error(compose(c, d, p)), code(c), path(std::move(p)), detail(std::move(d)) {}

  Error located(const std::string& p) const {
    if (!path.empty()) return *this;
    return Error(code, detail, p);
  }

 private:
  static std::string compose(Err c, const std::string& d, const std::string& p) {
    std::string s = err_name(c);
    if (!p.empty()) s += " at " + p;
    if (!d.empty()) s += ": " + d;
    return s;
  }
};

// ---------------------------------------------------------------------------
// Constructors

// sorts
inline Term so_base() { static const Term t = make(Tag::SBase, {}); return t; }
inline Term so_pred(Term s) { return make(Tag::SPred, {std::move(s)}); }

// IHOL terms and propositions
inline Term h_var(int i) { return make_var(Tag::HVar, i); }
inline Term h_compr(Term s, Term body) { return make(Tag::HCompr, {std::move(s), std::move(body)}); }
inline Term h_compr0(Term body) { return make(Tag::HComprBase, {std::move(body)}); }
inline Term h_mem0(Term t) { return make(Tag::HMemBase, {std::move(t)}); }
inline Term h_mem(Term elem, Term set) { return make(Tag::HMem, {std::move(elem), std::move(set)}); }
inline Term h_imp(Term a, Term b) { return make(Tag::HImp, {std::move(a), std::move(b)}); }
inline Term h_forall(Term s, Term body) { return make(Tag::HForall, {std::move(s), std::move(body)}); }

// kinds
inline Term k_star() { static const Term t = make(Tag::KStar, {}); return t; }
inline Term k_con(Term k) { return make(Tag::KCon, {std::move(k)}); }

// types
inline Term t_var(int i) { return make_var(Tag::TVar, i); }
inline Term t_app(Term f, Term a) { return make(Tag::TApp, {std::move(f), std::move(a)}); }
inline Term t_abs(Term k, Term b) { return make(Tag::TAbs, {std::move(k), std::move(b)}); }
inline Term t_fun(Term a, Term b) { return make(Tag::Fun, {std::move(a), std::move(b)}); }
inline Term t_all(Term k, Term b) { return make(Tag::TForall, {std::move(k), std::move(b)}); }
inline Term t_comp(Term a) { return make(Tag::Comp, {std::move(a)}); }

// programs
inline Term p_var(int i) { return make_var(Tag::PVar, i); }
inline Term p_tyabs(Term k, Term b) { return make(Tag::TyAbs, {std::move(k), std::move(b)}); }
inline Term p_abs(Term ty, Term b) { return make(Tag::Abs, {std::move(ty), std::move(b)}); }
inline Term p_tyapp(Term f, Term ty) { return make(Tag::TyApp, {std::move(f), std::move(ty)}); }
inline Term p_app(Term f, Term a) { return make(Tag::App, {std::move(f), std::move(a)}); }
inline Term p_ret(Term p) { return make(Tag::Ret, {std::move(p)}); }
inline Term p_bind(Term ty, Term first, Term rest) {
  return make(Tag::Bind, {std::move(ty), std::move(first), std::move(rest)});
}

// indices
inline Term i_ref0(Term ty) { return make(Tag::RefBase, {std::move(ty)}); }
inline Term i_ref(Term ty, Term arg) { return make(Tag::Ref, {std::move(ty), std::move(arg)}); }
inline Term i_all(Term k, Term b) { return make(Tag::IForall, {std::move(k), std::move(b)}); }

// expressions
inline Term e_var(int i) { return make_var(Tag::EVar, i); }
inline Term e_compr(Term ty, Term idx, Term body) {
  return make(Tag::ECompr, {std::move(ty), std::move(idx), std::move(body)});
}
inline Term e_compr0(Term ty, Term body) { return make(Tag::EComprBase, {std::move(ty), std::move(body)}); }
inline Term e_all(Term k, Term e) { return make(Tag::EForall, {std::move(k), std::move(e)}); }
inline Term e_app(Term e, Term ty) { return make(Tag::EApp, {std::move(e), std::move(ty)}); }

// specifications
inline Term s_mem(Term p, Term fn, Term arg) { return make(Tag::SMem, {std::move(p), std::move(fn), std::move(arg)}); }
inline Term s_mem0(Term p, Term e) { return make(Tag::SMemBase, {std::move(p), std::move(e)}); }
inline Term s_imp(Term a, Term b) { return make(Tag::SImp, {std::move(a), std::move(b)}); }
inline Term s_after(Term p, Term ty, Term body) {
  return make(Tag::After, {std::move(p), std::move(ty), std::move(body)});
}
inline Term s_all_type(Term k, Term b) { return make(Tag::ForallType, {std::move(k), std::move(b)}); }
inline Term s_all_prog(Term ty, Term b) { return make(Tag::ForallProg, {std::move(ty), std::move(b)}); }
inline Term s_all_expr(Term idx, Term b) { return make(Tag::ForallExpr, {std::move(idx), std::move(b)}); }

// untyped terms
inline Term u_var(int i) { return make_var(Tag::UVar, i); }
inline Term u_lam(Term b) { return make(Tag::ULam, {std::move(b)}); }
inline Term u_app(Term f, Term a) { return make(Tag::UApp, {std::move(f), std::move(a)}); }
inline Term u_ret(Term t) { return make(Tag::URet, {std::move(t)}); }
inline Term u_bind(Term t, Term rest) { return make(Tag::UBind, {std::move(t), std::move(rest)}); }
inline Term u_pair(Term a, Term b) { return make(Tag::UPair, {std::move(a), std::move(b)}); }
inline Term u_fst(Term t) { return make(Tag::UProj1, {std::move(t)}); }
inline Term u_snd(Term t) { return make(Tag::UProj2, {std::move(t)}); }

inline Term hole(int i) { return make_var(Tag::Hole, i); }

// ---------------------------------------------------------------------------
// Derived constants

// falsity: forall u:*. u in0
inline Term h_bot() { return h_forall(so_base(), h_mem0(h_var(0))); }
inline Term h_top() { return h_imp(h_bot(), h_bot()); }
inline Term h_not(Term a) { return h_imp(std::move(a), h_bot()); }

// forall u:*. (a => b => u in0) => u in0
inline Term h_and(const Term& a, const Term& b) {
  Term u = h_mem0(h_var(0));
  return h_forall(so_base(), h_imp(h_imp(shift(a, NsH, 1), h_imp(shift(b, NsH, 1), u)), u));
}

// forall v:*. (forall u:s. body => v in0) => v in0
inline Term h_exists(const Term& s, const Term& body) {
  Term inner = h_forall(s, h_imp(shift(body, NsH, 1, 1), h_mem0(h_var(1))));
  return h_forall(so_base(), h_imp(inner, h_mem0(h_var(0))));
}

inline Term t_bot() { return t_all(k_star(), t_var(0)); }
inline Term t_neg(Term a) { return t_fun(std::move(a), t_bot()); }

// forall X:*. forall y:ref0 X. forall x:X. x in0 y
inline Term s_bot() {
  return s_all_type(k_star(), s_all_expr(i_ref0(t_var(0)), s_all_prog(t_var(0), s_mem0(p_var(0), e_var(0)))));
}
inline Term s_top() { return s_imp(s_bot(), s_bot()); }
inline Term s_not(Term a) { return s_imp(std::move(a), s_bot()); }

// forall X:*. forall y:ref0 X. forall x:X. (a => b => x in0 y) => x in0 y
inline Term s_and(const Term& a, const Term& b) {
  Depth by{0, 1, 1, 1, 0};
  Term m = s_mem0(p_var(0), e_var(0));
  return s_all_type(k_star(),
                    s_all_expr(i_ref0(t_var(0)),
                               s_all_prog(t_var(0), s_imp(s_imp(shift_all(a, by), s_imp(shift_all(b, by), m)), m))));
}

}  // namespace effhol
