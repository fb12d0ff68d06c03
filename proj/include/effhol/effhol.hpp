#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "print.hpp"
#include "terms.hpp"

namespace effhol {

// Kind, index and type contexts. Entries are stored relative to the full
// current kind context (they are shifted when a kind binder is entered), and
// the innermost variable sits at the back.
struct Ctx {
  std::vector<Term> k;
  std::vector<Term> i;
  std::vector<Term> t;
};

inline Ctx ext_k(Ctx c, const Term& kind) {
  c.k.push_back(kind);
  for (auto& x : c.i) x = shift(x, NsK, 1);
  for (auto& x : c.t) x = shift(x, NsK, 1);
  return c;
}
inline Ctx ext_i(Ctx c, const Term& idx) {
  c.i.push_back(idx);
  return c;
}
inline Ctx ext_t(Ctx c, const Term& ty) {
  c.t.push_back(ty);
  return c;
}

inline Names names_of(const Ctx& c) {
  return Names::sized(0, static_cast<int>(c.k.size()), static_cast<int>(c.t.size()), static_cast<int>(c.i.size()));
}
inline std::string show_in(const Term& x, const Ctx& c) { return show(x, names_of(c)); }

// Context for descending into kid `i` of node `t`.
inline Ctx ctx_for_kid(const Ctx& c, const Node& t, std::size_t i) {
  const KidInfo& ki = info(t.tag).kids[i];
  Ctx r = c;
  if (ki.binds[NsK]) r = ext_k(r, t.k(static_cast<std::size_t>(ki.cls[NsK])));
  if (ki.binds[NsE]) r = ext_i(r, t.k(static_cast<std::size_t>(ki.cls[NsE])));
  if (ki.binds[NsP]) r = ext_t(r, t.k(static_cast<std::size_t>(ki.cls[NsP])));
  return r;
}

// ---------------------------------------------------------------------------
// Conversion: exhaustive contraction of type-level and expression-level beta.

constexpr long kNormFuel = 2000000;

namespace detail {
inline Term nf_rec(const Term& t, long& fuel) {
  if (t->kids.empty()) return t;
  std::vector<Term> nk;
  bool changed = false;
  for (const auto& c : t->kids) {
    Term n = nf_rec(c, fuel);
    changed = changed || n != c;
    nk.push_back(std::move(n));
  }
  Term r = changed ? std::make_shared<const Node>(t->tag, t->idx, std::move(nk)) : t;
  if ((r->is(Tag::TApp) && r->k(0)->is(Tag::TAbs)) || (r->is(Tag::EApp) && r->k(0)->is(Tag::EForall))) {
    if (--fuel < 0) throw Error(Err::FuelExhausted, "conversion normalization diverges");
    return nf_rec(subst(r->k(0)->k(1), NsK, 0, r->k(1)), fuel);
  }
  return r;
}
}  // namespace detail

inline Term conv_normalize(const Term& t) {
  long fuel = kNormFuel;
  return detail::nf_rec(t, fuel);
}
inline Term nf(const Term& t) { return conv_normalize(t); }
inline bool convertible(const Term& a, const Term& b) { return eq(nf(a), nf(b)); }

// ---------------------------------------------------------------------------
// Kinding, typing, indexing, well-formedness

inline Term lookup(const std::vector<Term>& v, int idx, const char* what) {
  if (idx < 0 || idx >= static_cast<int>(v.size()))
    throw Error(Err::UnboundVariable, std::string(what) + " #" + std::to_string(idx));
  return v[v.size() - 1 - static_cast<std::size_t>(idx)];
}

inline Term kind_of(const std::vector<Term>& kctx, const Term& ty) {
  if (!ty || ty->cat() != Cat::Type) throw Error(Err::KindMismatch, "expected a type");
  auto ext = [&](const Term& k) {
    std::vector<Term> c = kctx;
    c.push_back(k);
    return c;
  };
  auto star = [&](const Term& x, const char* where) {
    Term k = kind_of(kctx, x);
    if (!eq(k, k_star())) throw Error(Err::KindMismatch, std::string(where) + " component has kind " + show(k));
  };
  switch (ty->tag) {
    case Tag::TVar:
      try {
        return lookup(kctx, ty->idx, "type variable");
      } catch (const Error&) {
        throw Error(Err::UnboundVariable, "unbound type variable #" + std::to_string(ty->idx));
      }
    case Tag::TApp: {
      Term kf = kind_of(kctx, ty->k(0));
      if (!kf->is(Tag::KCon)) throw Error(Err::KindMismatch, "applied type has kind " + show(kf));
      Term ka = kind_of(kctx, ty->k(1));
      if (!eq(ka, kf->k(0))) throw Error(Err::KindMismatch, "argument kind " + show(ka) + ", expected " + show(kf->k(0)));
      return k_star();
    }
    case Tag::TAbs: {
      Term kb = kind_of(ext(ty->k(0)), ty->k(1));
      if (!eq(kb, k_star())) throw Error(Err::KindMismatch, "type abstraction body has kind " + show(kb));
      return k_con(ty->k(0));
    }
    case Tag::Fun:
      star(ty->k(0), "arrow");
      star(ty->k(1), "arrow");
      return k_star();
    case Tag::TForall: {
      Term kb = kind_of(ext(ty->k(0)), ty->k(1));
      if (!eq(kb, k_star())) throw Error(Err::KindMismatch, "quantified type body has kind " + show(kb));
      return k_star();
    }
    case Tag::Comp:
      star(ty->k(0), "computation");
      return k_star();
    default:
      throw Error(Err::KindMismatch, "expected a type");
  }
}

inline void check_star(const Ctx& c, const Term& ty) {
  Term k = kind_of(c.k, ty);
  if (!eq(k, k_star())) throw Error(Err::KindMismatch, "type " + show_in(ty, c) + " has kind " + show(k));
}

inline void index_wf(const std::vector<Term>& kctx, const Term& s) {
  if (!s || s->cat() != Cat::Index) throw Error(Err::IndexMismatch, "expected an index");
  switch (s->tag) {
    case Tag::RefBase:
    case Tag::Ref: {
      Term k = kind_of(kctx, s->k(0));
      if (!eq(k, k_star())) throw Error(Err::KindMismatch, "index carrier has kind " + show(k));
      if (s->is(Tag::Ref)) index_wf(kctx, s->k(1));
      return;
    }
    case Tag::IForall: {
      std::vector<Term> c = kctx;
      c.push_back(s->k(0));
      index_wf(c, s->k(1));
      return;
    }
    default:
      throw Error(Err::IndexMismatch, "expected an index");
  }
}

inline Term type_of(const Ctx& c, const Term& p);
inline Term index_of(const Ctx& c, const Term& e);
inline void spec_wf(const Ctx& c, const Term& s);

inline Term type_of(const Ctx& c, const Term& p) {
  if (!p || p->cat() != Cat::Prog) throw Error(Err::TypeMismatch, "expected a program");
  switch (p->tag) {
    case Tag::PVar:
      return nf(lookup(c.t, p->idx, "program variable"));
    case Tag::TyAbs:
      return t_all(p->k(0), type_of(ext_k(c, p->k(0)), p->k(1)));
    case Tag::Abs:
      check_star(c, p->k(0));
      return t_fun(nf(p->k(0)), type_of(ext_t(c, p->k(0)), p->k(1)));
    case Tag::TyApp: {
      Term tf = type_of(c, p->k(0));
      if (!tf->is(Tag::TForall)) throw Error(Err::TypeMismatch, "type application of " + show_in(tf, c));
      Term k = kind_of(c.k, p->k(1));
      if (!eq(k, tf->k(0))) throw Error(Err::KindMismatch, "type argument has kind " + show(k));
      return nf(subst(tf->k(1), NsK, 0, p->k(1)));
    }
    case Tag::App: {
      Term tf = type_of(c, p->k(0));
      if (!tf->is(Tag::Fun)) throw Error(Err::TypeMismatch, "application of non-function type " + show_in(tf, c));
      Term ta = type_of(c, p->k(1));
      if (!eq(ta, tf->k(0)))
        throw Error(Err::TypeMismatch, "argument type " + show_in(ta, c) + ", expected " + show_in(tf->k(0), c));
      return tf->k(1);
    }
    case Tag::Ret:
      return t_comp(type_of(c, p->k(0)));
    case Tag::Bind: {
      check_star(c, p->k(0));
      Term t1 = type_of(c, p->k(1));
      if (!eq(t1, t_comp(nf(p->k(0)))))
        throw Error(Err::TypeMismatch, "bound computation has type " + show_in(t1, c));
      Term t2 = type_of(ext_t(c, p->k(0)), p->k(2));
      if (!t2->is(Tag::Comp)) throw Error(Err::TypeMismatch, "bind continuation is not a computation");
      return t2;
    }
    default:
      throw Error(Err::TypeMismatch, "expected a program");
  }
}

inline Term index_of(const Ctx& c, const Term& e) {
  if (!e || e->cat() != Cat::Expr) throw Error(Err::IndexMismatch, "expected an expression");
  switch (e->tag) {
    case Tag::EVar:
      return nf(lookup(c.i, e->idx, "expression variable"));
    case Tag::ECompr:
      check_star(c, e->k(0));
      index_wf(c.k, e->k(1));
      spec_wf(ext_t(ext_i(c, e->k(1)), e->k(0)), e->k(2));
      return i_ref(nf(e->k(0)), nf(e->k(1)));
    case Tag::EComprBase:
      check_star(c, e->k(0));
      spec_wf(ext_t(c, e->k(0)), e->k(1));
      return i_ref0(nf(e->k(0)));
    case Tag::EForall:
      return i_all(e->k(0), index_of(ext_k(c, e->k(0)), e->k(1)));
    case Tag::EApp: {
      Term ie = index_of(c, e->k(0));
      if (!ie->is(Tag::IForall)) throw Error(Err::IndexMismatch, "type application of expression of index " + show_in(ie, c));
      Term k = kind_of(c.k, e->k(1));
      if (!eq(k, ie->k(0))) throw Error(Err::KindMismatch, "type argument has kind " + show(k));
      return nf(subst(ie->k(1), NsK, 0, e->k(1)));
    }
    default:
      throw Error(Err::IndexMismatch, "expected an expression");
  }
}

inline void spec_wf(const Ctx& c, const Term& s) {
  if (!s || s->cat() != Cat::Spec) throw Error(Err::SpecIllFormed, "expected a specification");
  switch (s->tag) {
    case Tag::SMem: {
      Term tp = type_of(c, s->k(0));
      Term ifn = index_of(c, s->k(1));
      if (!ifn->is(Tag::Ref)) throw Error(Err::SpecIllFormed, "membership in expression of index " + show_in(ifn, c));
      if (!eq(ifn->k(0), tp))
        throw Error(Err::SpecIllFormed, "member has type " + show_in(tp, c) + ", carrier is " + show_in(ifn->k(0), c));
      Term ia = index_of(c, s->k(2));
      if (!eq(ia, ifn->k(1)))
        throw Error(Err::SpecIllFormed, "argument has index " + show_in(ia, c) + ", expected " + show_in(ifn->k(1), c));
      return;
    }
    case Tag::SMemBase: {
      Term tp = type_of(c, s->k(0));
      Term ie = index_of(c, s->k(1));
      if (!ie->is(Tag::RefBase)) throw Error(Err::SpecIllFormed, "base membership in expression of index " + show_in(ie, c));
      if (!eq(ie->k(0), tp))
        throw Error(Err::SpecIllFormed, "member has type " + show_in(tp, c) + ", carrier is " + show_in(ie->k(0), c));
      return;
    }
    case Tag::SImp:
      spec_wf(c, s->k(0));
      spec_wf(c, s->k(1));
      return;
    case Tag::After: {
      check_star(c, s->k(1));
      Term tp = type_of(c, s->k(0));
      if (!eq(tp, t_comp(nf(s->k(1)))))
        throw Error(Err::SpecIllFormed, "modality program has type " + show_in(tp, c));
      spec_wf(ext_t(c, s->k(1)), s->k(2));
      return;
    }
    case Tag::ForallType:
      spec_wf(ext_k(c, s->k(0)), s->k(1));
      return;
    case Tag::ForallProg:
      check_star(c, s->k(0));
      spec_wf(ext_t(c, s->k(0)), s->k(1));
      return;
    case Tag::ForallExpr:
      index_wf(c.k, s->k(0));
      spec_wf(ext_i(c, s->k(0)), s->k(1));
      return;
    default:
      throw Error(Err::SpecIllFormed, "expected a specification");
  }
}

inline void ctx_wf(const Ctx& c) {
  for (const auto& k : c.k)
    if (!k || k->cat() != Cat::Kind) throw Error(Err::KindMismatch, "kind context entry is not a kind");
  for (const auto& s : c.i) index_wf(c.k, s);
  for (const auto& t : c.t) check_star(c, t);
}

// The effect-free fragment has no computation types, return, bind or modality.
inline bool is_pure(const Term& t) {
  switch (t->tag) {
    case Tag::Comp:
    case Tag::Ret:
    case Tag::Bind:
    case Tag::After:
      return false;
    default:
      break;
  }
  for (const auto& c : t->kids)
    if (!is_pure(c)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Reduction

enum class Strategy { Base, Cbn };

inline const char* strategy_name(Strategy s) { return s == Strategy::Base ? "base" : "cbn"; }

inline std::optional<Strategy> parse_strategy(const std::string& s) {
  if (s == "base") return Strategy::Base;
  if (s == "cbn") return Strategy::Cbn;
  return std::nullopt;
}

inline bool is_value(const Term& p) { return p->is(Tag::PVar) || p->is(Tag::TyAbs) || p->is(Tag::Abs); }

inline Term step_root(const Term& p, Strategy st) {
  switch (p->tag) {
    case Tag::Bind:
      if (p->k(1)->is(Tag::Ret)) return subst(p->k(2), NsP, 0, p->k(1)->k(0));
      return nullptr;
    case Tag::TyApp:
      if (p->k(0)->is(Tag::TyAbs)) return subst(p->k(0)->k(1), NsK, 0, p->k(1));
      return nullptr;
    case Tag::App:
      if (p->k(0)->is(Tag::Abs) && (st == Strategy::Cbn || is_value(p->k(1))))
        return subst(p->k(0)->k(1), NsP, 0, p->k(1));
      return nullptr;
    case Tag::Abs:
      // eta, only in the extended strategy
      if (st == Strategy::Cbn) {
        const Term& b = p->k(1);
        if (b->is(Tag::App) && b->k(1)->is(Tag::PVar) && b->k(1)->idx == 0 && !occurs(b->k(0), NsP, 0))
          return shift(b->k(0), NsP, -1);
      }
      return nullptr;
    default:
      return nullptr;
  }
}

// One step. Base: root redexes only. Cbn: C ::= [] | C t | C p | lam x:t. C
inline Term step(const Term& p, Strategy st) {
  if (Term r = step_root(p, st)) return r;
  if (st == Strategy::Base) return nullptr;
  switch (p->tag) {
    case Tag::App:
      if (Term f = step(p->k(0), st)) return p_app(f, p->k(1));
      return nullptr;
    case Tag::TyApp:
      if (Term f = step(p->k(0), st)) return p_tyapp(f, p->k(1));
      return nullptr;
    case Tag::Abs:
      if (Term b = step(p->k(1), st)) return p_abs(p->k(0), b);
      return nullptr;
    default:
      return nullptr;
  }
}

struct MultiStep {
  Term term;
  int steps = 0;
  bool exhausted = false;
};

inline MultiStep multi_step(const Term& p, Strategy st, int fuel) {
  MultiStep r{p, 0, false};
  while (true) {
    Term n = step(r.term, st);
    if (!n) return r;
    if (r.steps >= fuel) {
      r.exhausted = true;
      return r;
    }
    r.term = n;
    ++r.steps;
  }
}

// Number of steps after which p1 reaches p2 (annotations compared up to
// conversion), or -1 if not within max_steps.
inline int reaches(const Term& p1, const Term& p2, Strategy st, int max_steps) {
  Term target = nf(p2);
  Term cur = p1;
  for (int n = 0; n <= max_steps; ++n) {
    if (eq(nf(cur), target)) return n;
    cur = step(cur, st);
    if (!cur) return -1;
  }
  return -1;
}

// ---------------------------------------------------------------------------
// Derivations

enum class ERule { Id, ImpI, ImpE, ProgI, ProgE, ExprI, ExprE, TypeI, TypeE, ModI, ModE, Mon, MemI, MemE, Mem0I, Mem0E, Conv, AntiRed };

inline const char* erule_name(ERule r) {
  switch (r) {
    case ERule::Id: return "id";
    case ERule::ImpI: return "impI";
    case ERule::ImpE: return "impE";
    case ERule::ProgI: return "progI";
    case ERule::ProgE: return "progE";
    case ERule::ExprI: return "exprI";
    case ERule::ExprE: return "exprE";
    case ERule::TypeI: return "typeI";
    case ERule::TypeE: return "typeE";
    case ERule::ModI: return "modI";
    case ERule::ModE: return "modE";
    case ERule::Mon: return "mon";
    case ERule::MemI: return "memI";
    case ERule::MemE: return "memE";
    case ERule::Mem0I: return "mem0I";
    case ERule::Mem0E: return "mem0E";
    case ERule::Conv: return "conv";
    case ERule::AntiRed: return "antired";
  }
  return "?";
}

inline std::optional<ERule> parse_erule(const std::string& s) {
  for (int i = 0; i <= static_cast<int>(ERule::AntiRed); ++i)
    if (s == erule_name(static_cast<ERule>(i))) return static_cast<ERule>(i);
  return std::nullopt;
}

inline int erule_arity(ERule r) {
  switch (r) {
    case ERule::Id: return 0;
    case ERule::ImpE:
    case ERule::Mon: return 2;
    default: return 1;
  }
}

inline int erule_witnesses(ERule r) {
  switch (r) {
    case ERule::ProgE:
    case ERule::ExprE:
    case ERule::TypeE: return 1;
    case ERule::AntiRed: return 4;
    default: return 0;
  }
}

struct EffDeriv;
using EffD = std::shared_ptr<const EffDeriv>;

struct EffDeriv {
  ERule rule;
  Term goal;
  std::vector<Term> wit;  // progE: p; exprE: e; typeE: type; antired: binder type, motive, p1, p2
  int steps = 0;
  Strategy strategy = Strategy::Base;
  std::vector<EffD> prem;  // mon: [deduction under x, modality premise]
};

struct EffSequent {
  Ctx ctx;
  std::vector<Term> hyps;
  Term goal;
};

inline EffD ed(ERule r, Term goal, std::vector<EffD> prem, std::vector<Term> wit = {}) {
  auto d = std::make_shared<EffDeriv>();
  d->rule = r;
  d->goal = std::move(goal);
  d->prem = std::move(prem);
  d->wit = std::move(wit);
  return d;
}

inline Error shape_error(const char* rule, const char* why) {
  return Error(Err::RuleMismatch, std::string(rule) + ": " + why);
}

inline EffD ed_id(Term g) { return ed(ERule::Id, std::move(g), {}); }
inline EffD ed_impI(Term g, EffD d) { return ed(ERule::ImpI, std::move(g), {std::move(d)}); }
inline EffD ed_impE(EffD d1, EffD d2) {
  if (!d1->goal->is(Tag::SImp)) throw shape_error("impE", "major premise is not an implication");
  Term g = d1->goal->k(1);
  return ed(ERule::ImpE, g, {std::move(d1), std::move(d2)});
}
inline EffD ed_progI(Term g, EffD d) { return ed(ERule::ProgI, std::move(g), {std::move(d)}); }
inline EffD ed_exprI(Term g, EffD d) { return ed(ERule::ExprI, std::move(g), {std::move(d)}); }
inline EffD ed_typeI(Term g, EffD d) { return ed(ERule::TypeI, std::move(g), {std::move(d)}); }
// Intro rules with the goal rebuilt from the premise and a binder classifier.
inline EffD ed_progI_over(Term ty, EffD d) { Term g = s_all_prog(std::move(ty), d->goal); return ed_progI(g, std::move(d)); }
inline EffD ed_exprI_over(Term idx, EffD d) { Term g = s_all_expr(std::move(idx), d->goal); return ed_exprI(g, std::move(d)); }
inline EffD ed_typeI_over(Term k, EffD d) { Term g = s_all_type(std::move(k), d->goal); return ed_typeI(g, std::move(d)); }
inline EffD ed_impI_over(Term a, EffD d) { Term g = s_imp(std::move(a), d->goal); return ed_impI(g, std::move(d)); }

inline EffD ed_progE(Term p, EffD d) {
  if (!d->goal->is(Tag::ForallProg)) throw shape_error("progE", "premise is not a program quantifier");
  Term g = subst(d->goal->k(1), NsP, 0, p);
  return ed(ERule::ProgE, g, {std::move(d)}, {std::move(p)});
}
inline EffD ed_exprE(Term e, EffD d) {
  if (!d->goal->is(Tag::ForallExpr)) throw shape_error("exprE", "premise is not an expression quantifier");
  Term g = subst(d->goal->k(1), NsE, 0, e);
  return ed(ERule::ExprE, g, {std::move(d)}, {std::move(e)});
}
inline EffD ed_typeE(Term ty, EffD d) {
  if (!d->goal->is(Tag::ForallType)) throw shape_error("typeE", "premise is not a type quantifier");
  Term g = subst(d->goal->k(1), NsK, 0, ty);
  return ed(ERule::TypeE, g, {std::move(d)}, {std::move(ty)});
}
inline EffD ed_modI(Term g, EffD d) { return ed(ERule::ModI, std::move(g), {std::move(d)}); }
inline EffD ed_modE(Term g, EffD d) { return ed(ERule::ModE, std::move(g), {std::move(d)}); }
inline EffD ed_mon(EffD a, EffD b) {
  if (!b->goal->is(Tag::After)) throw shape_error("mon", "second premise is not a modality");
  Term g = s_after(b->goal->k(0), b->goal->k(1), a->goal);
  return ed(ERule::Mon, g, {std::move(a), std::move(b)});
}
inline EffD ed_memI(Term g, EffD d) { return ed(ERule::MemI, std::move(g), {std::move(d)}); }
inline EffD ed_memE(EffD d) {
  const Term& m = d->goal;
  if (!m->is(Tag::SMem) || !m->k(1)->is(Tag::ECompr)) throw shape_error("memE", "premise shape");
  Term g = subst(subst(m->k(1)->k(2), NsP, 0, m->k(0)), NsE, 0, m->k(2));
  return ed(ERule::MemE, g, {std::move(d)});
}
inline EffD ed_mem0I(Term g, EffD d) { return ed(ERule::Mem0I, std::move(g), {std::move(d)}); }
inline EffD ed_mem0E(EffD d) {
  const Term& m = d->goal;
  if (!m->is(Tag::SMemBase) || !m->k(1)->is(Tag::EComprBase)) throw shape_error("mem0E", "premise shape");
  Term g = subst(m->k(1)->k(1), NsP, 0, m->k(0));
  return ed(ERule::Mem0E, g, {std::move(d)});
}
// Mem0I where the goal is p in0 e; computes nothing, kept for symmetry.
inline EffD ed_conv(Term g, EffD d) { return ed(ERule::Conv, std::move(g), {std::move(d)}); }
inline EffD ed_antired(Term ty, Term motive, Term p1, Term p2, int steps, Strategy st, EffD d) {
  Term g = subst(motive, NsP, 0, p1);
  auto r = std::make_shared<EffDeriv>();
  r->rule = ERule::AntiRed;
  r->goal = g;
  r->wit = {std::move(ty), std::move(motive), std::move(p1), std::move(p2)};
  r->steps = steps;
  r->strategy = st;
  r->prem = {std::move(d)};
  return r;
}
// Conv only when the goals differ syntactically.
inline EffD ed_conv_to(const Term& g, EffD d) {
  if (eq(d->goal, g)) return d;
  return ed_conv(g, std::move(d));
}

struct CheckOpts {
  bool pure_only = false;
  Strategy strategy = Strategy::Base;
  int max_steps = 10000;
};

using EffVisitor = std::function<void(const EffDeriv&, const EffSequent&, const std::string& path)>;

namespace detail {

inline std::vector<Term> shift_hyps(const std::vector<Term>& hs, int ns) {
  std::vector<Term> r;
  r.reserve(hs.size());
  for (const auto& h : hs) r.push_back(shift(h, ns, 1));
  return r;
}

inline void eff_check_rec(const EffD& d, const Ctx& c, const std::vector<Term>& hyps, const std::string& path,
                          const CheckOpts& o, const EffVisitor* visit);

inline void eff_check_node(const EffD& d, const Ctx& c, const std::vector<Term>& hyps, const std::string& path,
                           const CheckOpts& o, const EffVisitor* visit) {
  const char* rn = erule_name(d->rule);
  auto fail = [&](const std::string& why) { return Error(Err::RuleMismatch, std::string(rn) + ": " + why, path); };
  auto ill = [&](const std::string& why) { return Error(Err::IllTyped, std::string(rn) + ": " + why, path); };
  if (static_cast<int>(d->prem.size()) != erule_arity(d->rule)) throw fail("wrong number of premises");
  if (static_cast<int>(d->wit.size()) != erule_witnesses(d->rule)) throw fail("wrong number of witnesses");
  for (const auto& p : d->prem)
    if (!p || !p->goal || p->goal->cat() != Cat::Spec) throw fail("missing premise");
  for (const auto& w : d->wit)
    if (!w) throw fail("missing witness");
  if (!d->goal || d->goal->cat() != Cat::Spec) throw fail("goal is not a specification");
  if (o.pure_only) {
    if (d->rule == ERule::ModI || d->rule == ERule::ModE || d->rule == ERule::Mon)
      throw fail("modality rule in the effect-free fragment");
    if (!is_pure(d->goal)) throw fail("goal leaves the effect-free fragment");
    for (const auto& w : d->wit)
      if (!is_pure(w)) throw fail("witness leaves the effect-free fragment");
  }
  try {
    spec_wf(c, d->goal);
  } catch (const Error& e) {
    throw Error(e.code, std::string(rn) + ": goal ill-formed: " + e.detail, path);
  }
  if (visit) (*visit)(*d, EffSequent{c, hyps, d->goal}, path);

  const Term& g = d->goal;
  auto sub = [&](std::size_t i) { return path + "." + std::to_string(i); };
  auto pg = [&](std::size_t i) -> const Term& { return d->prem[i]->goal; };
  auto recur = [&](std::size_t i, const Ctx& cc, const std::vector<Term>& hs) {
    eff_check_rec(d->prem[i], cc, hs, sub(i), o, visit);
  };
  switch (d->rule) {
    case ERule::Id:
      for (const auto& h : hyps)
        if (eq(h, g)) return;
      throw fail("goal is not among the hypotheses");
    case ERule::ImpI: {
      if (!g->is(Tag::SImp)) throw fail("goal is not an implication");
      if (!eq(pg(0), g->k(1))) throw fail("premise does not prove the consequent");
      std::vector<Term> hs = hyps;
      hs.push_back(g->k(0));
      recur(0, c, hs);
      return;
    }
    case ERule::ImpE:
      if (!eq(pg(0), s_imp(pg(1), g))) throw fail("major premise is not minor premise implies goal");
      recur(0, c, hyps);
      recur(1, c, hyps);
      return;
    case ERule::ProgI:
      if (!g->is(Tag::ForallProg)) throw fail("goal is not a program quantifier");
      if (!eq(pg(0), g->k(1))) throw fail("premise does not prove the body");
      recur(0, ext_t(c, g->k(0)), shift_hyps(hyps, NsP));
      return;
    case ERule::ExprI:
      if (!g->is(Tag::ForallExpr)) throw fail("goal is not an expression quantifier");
      if (!eq(pg(0), g->k(1))) throw fail("premise does not prove the body");
      recur(0, ext_i(c, g->k(0)), shift_hyps(hyps, NsE));
      return;
    case ERule::TypeI:
      if (!g->is(Tag::ForallType)) throw fail("goal is not a type quantifier");
      if (!eq(pg(0), g->k(1))) throw fail("premise does not prove the body");
      recur(0, ext_k(c, g->k(0)), shift_hyps(hyps, NsK));
      return;
    case ERule::ProgE: {
      if (!pg(0)->is(Tag::ForallProg)) throw fail("premise is not a program quantifier");
      const Term& p = d->wit[0];
      Term tp;
      try {
        tp = type_of(c, p);
      } catch (const Error& e) {
        throw ill("witness program: " + e.detail);
      }
      if (!eq(tp, nf(pg(0)->k(0)))) throw ill("witness program has type " + show_in(tp, c));
      if (!eq(g, subst(pg(0)->k(1), NsP, 0, p))) throw fail("goal is not the instantiated body");
      recur(0, c, hyps);
      return;
    }
    case ERule::ExprE: {
      if (!pg(0)->is(Tag::ForallExpr)) throw fail("premise is not an expression quantifier");
      const Term& e = d->wit[0];
      Term ie;
      try {
        ie = index_of(c, e);
      } catch (const Error& er) {
        throw ill("witness expression: " + er.detail);
      }
      if (!eq(ie, nf(pg(0)->k(0)))) throw ill("witness expression has index " + show_in(ie, c));
      if (!eq(g, subst(pg(0)->k(1), NsE, 0, e))) throw fail("goal is not the instantiated body");
      recur(0, c, hyps);
      return;
    }
    case ERule::TypeE: {
      if (!pg(0)->is(Tag::ForallType)) throw fail("premise is not a type quantifier");
      const Term& ty = d->wit[0];
      Term k;
      try {
        k = kind_of(c.k, ty);
      } catch (const Error& er) {
        throw ill("witness type: " + er.detail);
      }
      if (!eq(k, pg(0)->k(0))) throw ill("witness type has kind " + show(k));
      if (!eq(g, subst(pg(0)->k(1), NsK, 0, ty))) throw fail("goal is not the instantiated body");
      recur(0, c, hyps);
      return;
    }
    case ERule::ModI:
      if (!g->is(Tag::After) || !g->k(0)->is(Tag::Ret)) throw fail("goal is not a modality over a return");
      if (!eq(pg(0), subst(g->k(2), NsP, 0, g->k(0)->k(0)))) throw fail("premise is not the body at the returned value");
      recur(0, c, hyps);
      return;
    case ERule::ModE: {
      if (!g->is(Tag::After) || !g->k(0)->is(Tag::Bind)) throw fail("goal is not a modality over a bind");
      const Term& b = g->k(0);
      Term want = s_after(b->k(1), b->k(0), s_after(b->k(2), g->k(1), shift(g->k(2), NsP, 1, 1)));
      if (!eq(pg(0), want)) throw fail("premise is not the nested modality");
      recur(0, c, hyps);
      return;
    }
    case ERule::Mon: {
      if (!g->is(Tag::After)) throw fail("goal is not a modality");
      const Term& b = pg(1);
      if (!b->is(Tag::After)) throw fail("second premise is not a modality");
      if (!eq(b->k(0), g->k(0)) || !eq(b->k(1), g->k(1))) throw fail("premises disagree on the computation");
      if (!eq(pg(0), g->k(2))) throw fail("first premise does not prove the goal body");
      std::vector<Term> hs = shift_hyps(hyps, NsP);
      hs.push_back(b->k(2));
      recur(0, ext_t(c, g->k(1)), hs);
      recur(1, c, hyps);
      return;
    }
    case ERule::MemI:
    case ERule::MemE: {
      bool intro = d->rule == ERule::MemI;
      const Term& m = intro ? g : pg(0);
      const Term& body = intro ? pg(0) : g;
      if (!m->is(Tag::SMem) || !m->k(1)->is(Tag::ECompr)) throw fail("membership in a comprehension expected");
      Term want = subst(subst(m->k(1)->k(2), NsP, 0, m->k(0)), NsE, 0, m->k(2));
      if (!eq(body, want)) throw fail("substituted body mismatch");
      recur(0, c, hyps);
      return;
    }
    case ERule::Mem0I:
    case ERule::Mem0E: {
      bool intro = d->rule == ERule::Mem0I;
      const Term& m = intro ? g : pg(0);
      const Term& body = intro ? pg(0) : g;
      if (!m->is(Tag::SMemBase) || !m->k(1)->is(Tag::EComprBase))
        throw fail("base membership in a base comprehension expected");
      if (!eq(body, subst(m->k(1)->k(1), NsP, 0, m->k(0)))) throw fail("substituted body mismatch");
      recur(0, c, hyps);
      return;
    }
    case ERule::Conv:
      if (!eq(nf(pg(0)), nf(g))) throw fail("premise and goal are not convertible");
      recur(0, c, hyps);
      return;
    case ERule::AntiRed: {
      const Term& ty = d->wit[0];
      const Term& motive = d->wit[1];
      const Term& p1 = d->wit[2];
      const Term& p2 = d->wit[3];
      if (d->strategy != o.strategy)
        throw Error(Err::ReductionMismatch, std::string("antired: strategy ") + strategy_name(d->strategy) +
                                                " not admitted here (" + strategy_name(o.strategy) + ")",
                    path);
      if (o.pure_only && (!is_pure(motive) || !is_pure(p1) || !is_pure(p2) || !is_pure(ty)))
        throw fail("witness leaves the effect-free fragment");
      try {
        check_star(c, ty);
        spec_wf(ext_t(c, ty), motive);
      } catch (const Error& e) {
        throw ill("motive: " + e.detail);
      }
      if (!eq(g, subst(motive, NsP, 0, p1))) throw fail("goal is not the motive at the redex");
      if (!eq(pg(0), subst(motive, NsP, 0, p2))) throw fail("premise is not the motive at the reduct");
      Term nty = nf(ty);
      for (const Term* p : {&p1, &p2}) {
        Term tp;
        try {
          tp = type_of(c, *p);
        } catch (const Error& e) {
          throw ill("reduction endpoint: " + e.detail);
        }
        if (!eq(tp, nty)) throw ill("reduction endpoint has type " + show_in(tp, c));
      }
      if (d->steps < 0 || d->steps > o.max_steps) throw Error(Err::ReductionMismatch, "antired: step bound out of range", path);
      if (reaches(p1, p2, d->strategy, d->steps) < 0)
        throw Error(Err::ReductionMismatch,
                    "antired: " + show_in(p1, c) + " does not reduce to " + show_in(p2, c) + " within " +
                        std::to_string(d->steps) + " steps",
                    path);
      recur(0, c, hyps);
      return;
    }
  }
}

inline void eff_check_rec(const EffD& d, const Ctx& c, const std::vector<Term>& hyps, const std::string& path,
                          const CheckOpts& o, const EffVisitor* visit) {
  if (!d) throw Error(Err::RuleMismatch, "missing derivation node", path);
  try {
    eff_check_node(d, c, hyps, path, o, visit);
  } catch (const Error& e) {
    if (!e.path.empty()) throw;
    throw e.located(path);
  }
}

}  // namespace detail

inline EffSequent check_effhol_derivation(const Ctx& c, const std::vector<Term>& hyps, const EffD& d,
                                          const CheckOpts& o = {}, const EffVisitor* visit = nullptr) {
  try {
    ctx_wf(c);
    if (o.pure_only) {
      for (const auto& t : c.t)
        if (!is_pure(t)) throw Error(Err::RuleMismatch, "context leaves the effect-free fragment");
    }
  } catch (const Error& e) {
    throw e.located("root");
  }
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    try {
      spec_wf(c, hyps[i]);
      if (o.pure_only && !is_pure(hyps[i])) throw Error(Err::RuleMismatch, "leaves the effect-free fragment");
    } catch (const Error& e) {
      throw Error(e.code, "hypothesis " + std::to_string(i) + " ill-formed: " + e.detail, "root");
    }
  }
  detail::eff_check_rec(d, c, hyps, "root", o, visit);
  return EffSequent{c, hyps, d->goal};
}

// Hoare-style triple: hypotheses entail after p x phi.
inline EffSequent make_triple(const Ctx& c, const std::vector<Term>& hyps, const Term& ty, const Term& p,
                              const Term& body) {
  Term tp = type_of(c, p);
  if (!eq(tp, t_comp(nf(ty))))
    throw Error(Err::IllTyped, "triple program has type " + show_in(tp, c) + ", expected a computation of " + show_in(ty, c));
  Term g = s_after(p, ty, body);
  spec_wf(c, g);
  for (const auto& h : hyps) spec_wf(c, h);
  return EffSequent{c, hyps, g};
}

}  // namespace effhol
