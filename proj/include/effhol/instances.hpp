#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "effhol.hpp"

namespace effhol {

// A pure instance interprets Comp, Ret, Bind and After inside the
// effect-free fragment. All arguments handed to an instance are already
// interpreted and live in the interpreted context.
class Instance {
 public:
  virtual ~Instance() = default;
  virtual std::string name() const = 0;
  virtual Strategy strategy() const = 0;
  virtual Term comp(const Term& ty) const = 0;
  virtual Term ret(const Term& ty, const Term& p) const = 0;
  // p2 lives under one extra program variable of type t1
  virtual Term bind(const Term& t1, const Term& t2, const Term& p1, const Term& p2) const = 0;
  // body lives under one extra program variable of type ty
  virtual Term after(const Term& ty, const Term& p, const Term& body) const = 0;

  // Law templates. prem proves body[x:=q].
  virtual EffD law_mod_i(const Term& ty, const Term& q, const Term& body, EffD prem) const {
    (void)ty, (void)q, (void)body, (void)prem;
    throw Error(Err::TemplateMissing, name() + ": no modI template");
  }
  // prem proves after(t1, p1, after(t2, p2, body shifted past x1))
  virtual EffD law_mod_e(const Term& t1, const Term& t2, const Term& p1, const Term& p2, const Term& body,
                         EffD prem) const {
    (void)t1, (void)t2, (void)p1, (void)p2, (void)body, (void)prem;
    throw Error(Err::TemplateMissing, name() + ": no modE template");
  }
  // a proves phi2 under x:ty with phi1 assumed; b proves after(ty, p, phi1)
  virtual EffD law_mon(const Term& ty, const Term& p, const Term& phi1, const Term& phi2, EffD a, EffD b) const {
    (void)ty, (void)p, (void)phi1, (void)phi2, (void)a, (void)b;
    throw Error(Err::TemplateMissing, name() + ": no mon template");
  }
};

constexpr int kReplayBound = 64;

// ---------------------------------------------------------------------------
// Identity instance

class IdentityInstance : public Instance {
 public:
  std::string name() const override { return "id"; }
  Strategy strategy() const override { return Strategy::Cbn; }
  Term comp(const Term& ty) const override { return ty; }
  Term ret(const Term&, const Term& p) const override { return p; }
  Term bind(const Term& t1, const Term&, const Term& p1, const Term& p2) const override {
    return p_app(p_abs(t1, p2), p1);
  }
  Term after(const Term&, const Term& p, const Term& body) const override { return subst(body, NsP, 0, p); }

  EffD law_mod_i(const Term& ty, const Term& q, const Term& body, EffD prem) const override {
    return ed_conv_to(after(ty, ret(ty, q), body), std::move(prem));
  }
  EffD law_mod_e(const Term& t1, const Term& t2, const Term& p1, const Term& p2, const Term& body,
                 EffD prem) const override {
    Term redex = bind(t1, t2, p1, p2);
    Term reduct = subst(p2, NsP, 0, p1);
    int n = reaches(redex, reduct, strategy(), kReplayBound);
    if (n < 0) throw Error(Err::RecheckFailed, "id: bind does not reduce");
    EffD d = ed_conv_to(subst(body, NsP, 0, reduct), std::move(prem));
    return ed_antired(t2, body, redex, reduct, n, strategy(), d);
  }
  EffD law_mon(const Term& ty, const Term& p, const Term& phi1, const Term& phi2, EffD a, EffD b) const override {
    Term imp = s_imp(phi1, phi2);
    EffD all = ed_progI(s_all_prog(ty, imp), ed_impI(imp, ed_conv_to(phi2, std::move(a))));
    EffD inst = ed_progE(p, all);
    return ed_impE(inst, ed_conv_to(inst->goal->k(0), std::move(b)));
  }
};

// ---------------------------------------------------------------------------
// Continuation instance: M t = not not t, with the after modality given by
// biorthogonality against the pole {x : bottom | bottom}.

inline Term k_pole() { return e_compr0(t_bot(), s_bot()); }

// continuations k : not t sending every member of e into the pole
inline Term k_orth(const Term& e, const Term& ty) {
  Term body = s_all_prog(ty, s_imp(s_mem0(p_var(0), shift(e, NsP, 2)), s_mem0(p_app(p_var(1), p_var(0)), k_pole())));
  return e_compr0(t_neg(ty), body);
}

class ContinuationInstance : public Instance {
 public:
  std::string name() const override { return "cont"; }
  Strategy strategy() const override { return Strategy::Cbn; }
  Term comp(const Term& ty) const override { return t_neg(t_neg(ty)); }
  Term ret(const Term& ty, const Term& p) const override {
    return p_abs(t_neg(ty), p_app(p_var(0), shift(p, NsP, 1)));
  }
  Term bind(const Term& t1, const Term& t2, const Term& p1, const Term& p2) const override {
    Term k = p_abs(t1, p_app(shift(p2, NsP, 1, 1), p_var(1)));
    return p_abs(t_neg(t2), p_app(shift(p1, NsP, 1), k));
  }
  Term after(const Term& ty, const Term& p, const Term& body) const override {
    return s_mem0(p, biorth(ty, body));
  }
  Term biorth(const Term& ty, const Term& body) const { return k_orth(k_orth(e_compr0(ty, body), ty), t_neg(ty)); }

  // From r in0 orth(e, s) and q in0 e, conclude (r q) in0 pole.
  static EffD use_orth(EffD mem, const Term& q, EffD mq) {
    return ed_impE(ed_progE(q, ed_mem0E(std::move(mem))), std::move(mq));
  }
  // r in0 orth(e, s) from a proof of (r x) in0 pole under x:s, x in0 e.
  static EffD intro_orth(const Term& r, const Term& e, const Term& s, EffD body) {
    Term g = s_mem0(r, k_orth(e, s));
    Term all = subst(g->k(1)->k(1), NsP, 0, r);
    return ed_mem0I(g, ed_progI(all, ed_impI(all->k(1), std::move(body))));
  }
  EffD antired_pole(const Term& redex, const Term& reduct, EffD d) const {
    int n = reaches(redex, reduct, strategy(), kReplayBound);
    if (n < 0) throw Error(Err::RecheckFailed, "cont: continuation step does not reduce");
    return ed_antired(t_bot(), s_mem0(p_var(0), k_pole()), redex, reduct, n, strategy(), std::move(d));
  }

  EffD law_mod_i(const Term& ty, const Term& q, const Term& body, EffD prem) const override {
    Term a = e_compr0(ty, body);
    Term a_orth = k_orth(a, ty);
    Term r = ret(ty, q);
    Term h = s_mem0(q, a);
    Term goal = after(ty, r, body);
    EffD dq = ed_mem0I(h, ed_conv_to(subst(body, NsP, 0, q), std::move(prem)));
    // under k : not ty
    Term q1 = shift(q, NsP, 1);
    EffD inner = use_orth(ed_id(s_mem0(p_var(0), shift(a_orth, NsP, 1))), q1, ed_id(shift(h, NsP, 1)));
    EffD ar = antired_pole(p_app(shift(r, NsP, 1), p_var(0)), p_app(p_var(0), q1), inner);
    EffD main = intro_orth(r, a_orth, t_neg(ty), ar);
    return ed_impE(ed_impI(s_imp(h, goal), main), dq);
  }

  EffD law_mod_e(const Term& t1, const Term& t2, const Term& p1, const Term& p2, const Term& body,
                 EffD prem) const override {
    Term c = e_compr0(t2, body);
    Term c_orth = k_orth(c, t2);
    Term e = e_compr0(t1, after(t2, p2, shift(body, NsP, 1, 1)));
    Term hd = after(t1, p1, after(t2, p2, shift(body, NsP, 1, 1)));
    Term b = bind(t1, t2, p1, p2);
    Term goal = after(t2, b, body);
    // under k : not t2, the continuation handed to p1
    Term k1 = p_abs(t1, p_app(shift(p2, NsP, 1, 1), p_var(1)));
    // under k, x : t1
    Term hx = s_mem0(p_var(0), shift(e, NsP, 2));
    EffD dp2 = ed_mem0E(ed_id(hx));
    Term p2x = dp2->goal->k(0);
    EffD dk = ed_id(s_mem0(p_var(1), shift(c_orth, NsP, 2)));
    EffD pole2 = use_orth(dp2, p_var(1), dk);
    EffD ar2 = antired_pole(p_app(shift(k1, NsP, 1), p_var(0)), p_app(p2x, p_var(1)), pole2);
    EffD dk1 = intro_orth(k1, shift(e, NsP, 1), t1, ar2);
    // back under k
    EffD pole1 = use_orth(ed_id(shift(hd, NsP, 1)), k1, dk1);
    EffD ar1 = antired_pole(p_app(shift(b, NsP, 1), p_var(0)), p_app(shift(p1, NsP, 1), k1), pole1);
    EffD main = intro_orth(b, c_orth, t_neg(t2), ar1);
    return ed_impE(ed_impI(s_imp(hd, goal), main), ed_conv_to(hd, std::move(prem)));
  }

  EffD law_mon(const Term& ty, const Term& p, const Term& phi1, const Term& phi2, EffD a, EffD b) const override {
    Term c1 = e_compr0(ty, phi1);
    Term c2 = e_compr0(ty, phi2);
    Term c1_orth = k_orth(c1, ty);
    Term c2_orth = k_orth(c2, ty);
    Term gx = s_all_prog(ty, s_imp(phi1, phi2));
    Term bg = after(ty, p, phi1);
    Term goal = after(ty, p, phi2);
    EffD ax = ed_progI(gx, ed_impI(gx->k(1), ed_conv_to(phi2, std::move(a))));
    // under k : not ty, x : ty
    Term hx = s_mem0(p_var(0), shift(c1, NsP, 2));
    EffD d_phi1 = ed_mem0E(ed_id(hx));
    EffD d_phi2 = ed_impE(ed_progE(p_var(0), ed_id(shift(gx, NsP, 2))), d_phi1);
    EffD dq = ed_mem0I(s_mem0(p_var(0), shift(c2, NsP, 2)), ed_conv_to(shift(phi2, NsP, 1, 1), d_phi2));
    EffD pole2 = use_orth(ed_id(s_mem0(p_var(1), shift(c2_orth, NsP, 2))), p_var(0), dq);
    // under k
    EffD dk = intro_orth(p_var(0), shift(c1, NsP, 1), ty, pole2);
    EffD pole1 = use_orth(ed_id(shift(bg, NsP, 1)), p_var(0), dk);
    EffD main = intro_orth(p, c2_orth, t_neg(ty), pole1);
    Term c_b = s_imp(bg, goal);
    Term c_x = s_imp(gx, c_b);
    EffD cut = ed_impI(c_x, ed_impI(c_b, main));
    return ed_impE(ed_impE(cut, ax), ed_conv_to(bg, std::move(b)));
  }
};

// ---------------------------------------------------------------------------
// Declarative instance: every construct is a template whose holes are
// filled by shifting the arguments past the template's own binders.
//   comp:  ?0 = type
//   ret:   ?0 = type, ?1 = program
//   bind:  ?0 = t1, ?1 = t2, ?2 = p1, ?3 = (lam (x t1) p2)
//   after: ?0 = type, ?1 = program, ?2 = (compr0 (x type) body)

inline Term plug(const Term& tmpl, const std::vector<Term>& args) {
  std::function<Term(const Term&, const Depth&)> go = [&](const Term& t, const Depth& d) -> Term {
    if (t->is(Tag::Hole)) {
      if (t->idx >= static_cast<int>(args.size())) throw Error(Err::TemplateMissing, "hole ?" + std::to_string(t->idx));
      return shift_all(args[static_cast<std::size_t>(t->idx)], d);
    }
    if (t->kids.empty()) return t;
    const TagInfo& ti = info(t->tag);
    std::vector<Term> nk;
    for (std::size_t i = 0; i < t->kids.size(); ++i) {
      Depth dd = d;
      for (int n = 0; n < kNs; ++n) dd[n] += ti.kids[i].binds[n];
      nk.push_back(go(t->kids[i], dd));
    }
    return make(t->tag, std::move(nk));
  };
  return go(tmpl, Depth{0, 0, 0, 0, 0});
}

class DeclarativeInstance : public Instance {
 public:
  std::string label;
  Strategy strat = Strategy::Cbn;
  Term comp_t, ret_t, bind_t, after_t;

  std::string name() const override { return label; }
  Strategy strategy() const override { return strat; }
  Term comp(const Term& ty) const override { return plug(comp_t, {ty}); }
  Term ret(const Term& ty, const Term& p) const override { return plug(ret_t, {ty, p}); }
  Term bind(const Term& t1, const Term& t2, const Term& p1, const Term& p2) const override {
    return plug(bind_t, {t1, t2, p1, p_abs(t1, p2)});
  }
  Term after(const Term& ty, const Term& p, const Term& body) const override {
    return plug(after_t, {ty, p, e_compr0(ty, body)});
  }
};

// ---------------------------------------------------------------------------
// Interpretation of syntax and derivations

class Instantiator {
 public:
  explicit Instantiator(const Instance& inst) : I(inst) {}

  // c is the uninterpreted context of t
  Term term(const Ctx& c, const Term& t) const {
    switch (t->tag) {
      case Tag::Comp: return I.comp(term(c, t->k(0)));
      case Tag::Ret: {
        Term ty = type_of(c, t->k(0));
        return I.ret(term(c, ty), term(c, t->k(0)));
      }
      case Tag::Bind: {
        Ctx cx = ext_t(c, t->k(0));
        Term t2 = type_of(cx, t->k(2));
        if (!t2->is(Tag::Comp)) throw Error(Err::TypeMismatch, "bind continuation is not a computation");
        return I.bind(term(c, t->k(0)), term(c, t2->k(0)), term(c, t->k(1)), term(cx, t->k(2)));
      }
      case Tag::After:
        return I.after(term(c, t->k(1)), term(c, t->k(0)), term(ext_t(c, t->k(1)), t->k(2)));
      default: break;
    }
    if (t->kids.empty()) return t;
    std::vector<Term> nk;
    bool changed = false;
    for (std::size_t i = 0; i < t->kids.size(); ++i) {
      Term k = term(ctx_for_kid(c, *t, i), t->kids[i]);
      changed = changed || k != t->kids[i];
      nk.push_back(std::move(k));
    }
    return changed ? make(t->tag, std::move(nk)) : t;
  }

  Ctx context(const Ctx& c) const {
    Ctx r;
    r.k = c.k;
    Ctx partial;
    partial.k = c.k;
    for (const auto& s : c.i) r.i.push_back(term(partial, s));
    for (const auto& ty : c.t) r.t.push_back(term(partial, ty));
    return r;
  }

  EffD deriv(const EffD& d, const Ctx& c) const {
    const Term& g = d->goal;
    Term gi = term(c, g);
    auto rec = [&](std::size_t i, const Ctx& cc) { return deriv(d->prem.at(i), cc); };
    switch (d->rule) {
      case ERule::Id: return ed_id(gi);
      case ERule::ImpI: return ed_impI(gi, ed_conv_to(gi->k(1), rec(0, c)));
      case ERule::ImpE: {
        EffD d1 = rec(1, c);
        EffD d0 = ed_conv_to(s_imp(d1->goal, gi), rec(0, c));
        return ed(ERule::ImpE, gi, {d0, d1});
      }
      case ERule::ProgI: return ed_progI(gi, ed_conv_to(gi->k(1), rec(0, ext_t(c, g->k(0)))));
      case ERule::ExprI: return ed_exprI(gi, ed_conv_to(gi->k(1), rec(0, ext_i(c, g->k(0)))));
      case ERule::TypeI: return ed_typeI(gi, ed_conv_to(gi->k(1), rec(0, ext_k(c, g->k(0)))));
      case ERule::ProgE: return ed_conv_to(gi, ed_progE(term(c, d->wit[0]), rec(0, c)));
      case ERule::ExprE: return ed_conv_to(gi, ed_exprE(term(c, d->wit[0]), rec(0, c)));
      case ERule::TypeE: return ed_conv_to(gi, ed_typeE(term(c, d->wit[0]), rec(0, c)));
      case ERule::MemI: {
        Term want = subst(subst(gi->k(1)->k(2), NsP, 0, gi->k(0)), NsE, 0, gi->k(2));
        return ed_memI(gi, ed_conv_to(want, rec(0, c)));
      }
      case ERule::MemE: return ed_conv_to(gi, ed_memE(rec(0, c)));
      case ERule::Mem0I: {
        Term want = subst(gi->k(1)->k(1), NsP, 0, gi->k(0));
        return ed_mem0I(gi, ed_conv_to(want, rec(0, c)));
      }
      case ERule::Mem0E: return ed_conv_to(gi, ed_mem0E(rec(0, c)));
      case ERule::Conv: return ed_conv(gi, rec(0, c));
      case ERule::AntiRed: {
        const Term& ty = d->wit[0];
        Term ty_i = term(c, ty);
        Term motive = term(ext_t(c, ty), d->wit[1]);
        Term p1 = term(c, d->wit[2]);
        Term p2 = term(c, d->wit[3]);
        int n = reaches(p1, p2, I.strategy(), kReplayBound);
        if (n < 0)
          throw Error(Err::RecheckFailed, "antired: interpreted redex does not reach its reduct under " +
                                              std::string(strategy_name(I.strategy())));
        EffD prem = ed_conv_to(subst(motive, NsP, 0, p2), rec(0, c));
        return ed_conv_to(gi, ed_antired(ty_i, motive, p1, p2, n, I.strategy(), prem));
      }
      case ERule::ModI: {
        const Term& q = g->k(0)->k(0);
        Term ty = term(c, g->k(1));
        Term qi = term(c, q);
        Term body = term(ext_t(c, g->k(1)), g->k(2));
        EffD prem = ed_conv_to(subst(body, NsP, 0, qi), rec(0, c));
        return ed_conv_to(gi, I.law_mod_i(ty, qi, body, prem));
      }
      case ERule::ModE: {
        const Term& b = g->k(0);
        Term t1 = term(c, b->k(0));
        Term t2 = term(c, g->k(1));
        Term p1 = term(c, b->k(1));
        Term p2 = term(ext_t(c, b->k(0)), b->k(2));
        Term body = term(ext_t(c, g->k(1)), g->k(2));
        Term want = I.after(t1, p1, I.after(t2, p2, shift(body, NsP, 1, 1)));
        EffD prem = ed_conv_to(want, rec(0, c));
        return ed_conv_to(gi, I.law_mod_e(t1, t2, p1, p2, body, prem));
      }
      case ERule::Mon: {
        const Term& src_b = d->prem[1]->goal;
        Term ty = term(c, g->k(1));
        Term p = term(c, g->k(0));
        Ctx cx = ext_t(c, g->k(1));
        Term phi1 = term(cx, src_b->k(2));
        Term phi2 = term(cx, g->k(2));
        EffD a = ed_conv_to(phi2, rec(0, cx));
        EffD bb = ed_conv_to(I.after(ty, p, phi1), rec(1, c));
        return ed_conv_to(gi, I.law_mon(ty, p, phi1, phi2, a, bb));
      }
    }
    throw Error(Err::RuleMismatch, "unknown rule");
  }

 private:
  const Instance& I;
};

inline Term instantiate(const Instance& inst, const Ctx& c, const Term& t) { return Instantiator(inst).term(c, t); }

struct Instantiated {
  Ctx ctx;
  std::vector<Term> hyps;
  EffD deriv;
};

// Interprets a checked derivation and re-checks it in the effect-free fragment.
inline Instantiated instantiate_derivation(const Instance& inst, const Ctx& c, const std::vector<Term>& hyps,
                                           const EffD& d) {
  Instantiator in(inst);
  Instantiated r;
  r.ctx = in.context(c);
  for (const auto& h : hyps) r.hyps.push_back(in.term(c, h));
  r.deriv = in.deriv(d, c);
  CheckOpts o;
  o.pure_only = true;
  o.strategy = inst.strategy();
  try {
    check_effhol_derivation(r.ctx, r.hyps, r.deriv, o);
  } catch (const Error& e) {
    throw Error(Err::RecheckFailed, std::string(e.what()));
  }
  return r;
}

// ---------------------------------------------------------------------------
// call/cc under the continuation instance

struct CallCC {
  Term cc;        // cc^{a,b}
  Term thrower;   // throw_k under k : not a
  Term callcc;    // polymorphic, already interpreted
  Term source;    // uninterpreted: ret/M over the interpreted cc body
};

// throw_k = lam x:a. lam k':not b. k x  (k is the innermost variable of the context)
inline Term cc_throw(const Term& a, const Term& b) {
  return p_abs(a, p_abs(t_neg(b), p_app(p_var(2), p_var(1))));
}

// cc^{a,b} = lam z:((a -> M b) -> M a). lam k:not a. z throw_k k
inline Term cc_body(const Term& a, const Term& b) {
  ContinuationInstance K;
  Term zt = t_fun(t_fun(a, K.comp(b)), K.comp(a));
  return p_abs(zt, p_abs(t_neg(a), p_app(p_app(p_var(1), cc_throw(a, b)), p_var(0))));
}

inline CallCC build_callcc(const Term& a, const Term& b) {
  ContinuationInstance K;
  CallCC r;
  r.cc = cc_body(a, b);
  r.thrower = cc_throw(a, b);
  Term inner = cc_body(t_var(1), t_var(0));
  Ctx two = ext_k(ext_k(Ctx{}, k_star()), k_star());
  Term inner_ty = type_of(two, inner);
  Term in_all = p_tyabs(k_star(), K.ret(inner_ty, inner));
  Ctx one = ext_k(Ctx{}, k_star());
  Term in_all_ty = type_of(one, in_all);
  r.callcc = p_tyabs(k_star(), K.ret(in_all_ty, in_all));
  r.source = p_tyabs(k_star(), p_ret(p_tyabs(k_star(), p_ret(inner))));
  return r;
}

// ---------------------------------------------------------------------------
// Law checking on samples

struct LawSample {
  ERule law;
  Ctx ctx;
  std::vector<Term> hyps;
  EffD deriv;  // uninterpreted derivation whose root uses the law
};

struct LawReport {
  std::map<std::string, int> passed;
  std::map<std::string, int> failed;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

inline LawReport check_instance_laws(const Instance& inst, const std::vector<LawSample>& samples) {
  LawReport rep;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const LawSample& s = samples[i];
    const std::string law = erule_name(s.law);
    try {
      check_effhol_derivation(s.ctx, s.hyps, s.deriv);
      instantiate_derivation(inst, s.ctx, s.hyps, s.deriv);
      ++rep.passed[law];
    } catch (const Error& e) {
      ++rep.failed[law];
      rep.failures.push_back(Error(Err::LawViolated, law + " sample " + std::to_string(i) + ": " + e.what()).what());
    }
  }
  return rep;
}

// Each base reduction of p, interpreted, reaches the interpreted reduct.
inline bool preserves_reduction(const Instance& inst, const Ctx& c, const Term& p) {
  Term q = step_root(p, Strategy::Base);
  if (!q) return true;
  Term pi = instantiate(inst, c, p);
  Term qi = instantiate(inst, c, q);
  return reaches(pi, qi, inst.strategy(), kReplayBound) >= 0;
}

inline std::unique_ptr<Instance> builtin_instance(const std::string& name) {
  if (name == "id") return std::make_unique<IdentityInstance>();
  if (name == "cont") return std::make_unique<ContinuationInstance>();
  return nullptr;
}

}  // namespace effhol
