#pragma once

// Random type-directed generators shared by the property tests.

#include <random>
#include <string>
#include <vector>

#include "effhol/effhol.hpp"
#include "effhol/hol.hpp"
#include "effhol/instances.hpp"

namespace effhol::gen {

class Gen {
 public:
  explicit Gen(unsigned seed) : rng_(seed) {}

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  bool coin(int percent) { return pick(100) < percent; }

  // ---- IHOL

  Term sort(int depth) {
    if (depth <= 0 || coin(55)) return so_base();
    return so_pred(sort(depth - 1));
  }

  Term hol_term(const SortCtx& ctx, const Term& s, int depth) {
    std::vector<int> vars;
    for (int i = 0; i < static_cast<int>(ctx.size()); ++i)
      if (eq(ctx[ctx.size() - 1 - static_cast<std::size_t>(i)], s)) vars.push_back(i);
    if (!vars.empty() && (depth <= 0 || coin(50))) return h_var(vars[static_cast<std::size_t>(pick(static_cast<int>(vars.size())))]);
    if (s->is(Tag::SBase)) return h_compr0(hol_prop(ctx, depth - 1));
    return h_compr(s->k(0), hol_prop(extend(ctx, s->k(0)), depth - 1));
  }

  Term hol_prop(const SortCtx& ctx, int depth) {
    if (depth <= 0) return hol_leaf(ctx);
    int r = pick(5);
    switch (r) {
      case 0: return h_mem0(hol_term(ctx, so_base(), depth - 1));
      case 1: {
        Term s = sort(1);
        return h_mem(hol_term(ctx, s, depth - 1), hol_term(ctx, so_pred(s), depth - 1));
      }
      case 2: return h_imp(hol_prop(ctx, depth - 1), hol_prop(ctx, depth - 1));
      default: {
        Term s = sort(2);
        return h_forall(s, hol_prop(extend(ctx, s), depth - 1));
      }
    }
  }

  // atoms over variables only, or falsity when there are none
  Term hol_leaf(const SortCtx& ctx) {
    std::vector<Term> atoms;
    const int n = static_cast<int>(ctx.size());
    for (int i = 0; i < n; ++i) {
      const Term& si = ctx[static_cast<std::size_t>(n - 1 - i)];
      if (si->is(Tag::SBase)) atoms.push_back(h_mem0(h_var(i)));
      for (int j = 0; j < n; ++j)
        if (eq(ctx[static_cast<std::size_t>(n - 1 - j)], so_pred(si))) atoms.push_back(h_mem(h_var(i), h_var(j)));
    }
    if (atoms.empty() || coin(10)) return h_bot();
    return atoms[static_cast<std::size_t>(pick(static_cast<int>(atoms.size())))];
  }

  // ---- EffHOL types and programs

  // Base context: X:*, F:*=>*, y:ref0 X, abort:forall Z.Z, a:X, f:X->M X
  static Ctx base_ctx() {
    Ctx c;
    c = ext_k(c, k_star());
    c = ext_k(c, k_con(k_star()));
    c = ext_i(c, i_ref0(t_var(1)));
    c = ext_t(c, t_bot());
    c = ext_t(c, t_var(1));
    c = ext_t(c, t_fun(t_var(1), t_comp(t_var(1))));
    return c;
  }

  Term kind(int depth) {
    if (depth <= 0 || coin(70)) return k_star();
    return k_con(kind(depth - 1));
  }

  // a type of kind k
  Term type_of_kind(const std::vector<Term>& kc, const Term& k, int depth) {
    if (k->is(Tag::KCon)) {
      std::vector<Term> kk = kc;
      kk.push_back(k->k(0));
      return t_abs(k->k(0), type(kk, depth - 1));
    }
    return type(kc, depth);
  }

  // a type of kind *, sometimes with an unreduced type-level redex
  Term type(const std::vector<Term>& kc, int depth) {
    std::vector<int> stars, cons;
    for (int i = 0; i < static_cast<int>(kc.size()); ++i) {
      const Term& k = kc[kc.size() - 1 - static_cast<std::size_t>(i)];
      if (k->is(Tag::KStar)) stars.push_back(i);
      if (k->is(Tag::KCon) && k->k(0)->is(Tag::KStar)) cons.push_back(i);
    }
    int r = depth <= 0 ? 0 : pick(8);
    switch (r) {
      case 1:
      case 2: return t_fun(type(kc, depth - 1), type(kc, depth - 1));
      case 3: return t_comp(type(kc, depth - 1));
      case 4: {
        std::vector<Term> kk = kc;
        kk.push_back(k_star());
        return t_all(k_star(), type(kk, depth - 1));
      }
      case 5:
        if (!cons.empty()) return t_app(t_var(cons[static_cast<std::size_t>(pick(static_cast<int>(cons.size())))]), type(kc, depth - 1));
        [[fallthrough]];
      case 6: {
        // (tlam Y. body) arg
        Term k = kind(1);
        std::vector<Term> kk = kc;
        kk.push_back(k);
        return t_app(t_abs(k, type(kk, depth - 1)), type_of_kind(kc, k, depth - 1));
      }
      default:
        if (stars.empty()) return t_bot();
        return t_var(stars[static_cast<std::size_t>(pick(static_cast<int>(stars.size())))]);
    }
  }

  // Re-introduce a redex in front of a normal type: (tlam Y:*. ty^) sigma.
  Term denormalize(const std::vector<Term>& kc, const Term& ty) {
    if (!coin(denorm_percent)) return ty;
    return t_app(t_abs(k_star(), shift(ty, NsK, 1)), type(kc, 1));
  }

  int denorm_percent = 25;

  // a program whose type is convertible to ty (ty in normal form)
  Term prog(const Ctx& c, const Term& ty0, int depth) {
    Term ty = nf(ty0);
    std::vector<int> vars;
    for (int i = 0; i < static_cast<int>(c.t.size()); ++i)
      if (eq(nf(c.t[c.t.size() - 1 - static_cast<std::size_t>(i)]), ty)) vars.push_back(i);
    if (!vars.empty() && (depth <= 0 || coin(35))) return p_var(vars[static_cast<std::size_t>(pick(static_cast<int>(vars.size())))]);
    if (depth <= 0) return fallback(c, ty);
    int r = pick(10);
    if (r < 2) {
      // beta redex at the root
      Term a = type(c.k, 1);
      Term v = value(c, nf(a), depth - 1);
      return p_app(p_abs(denormalize(c.k, a), prog(ext_t(c, a), ty, depth - 1)), v);
    }
    if (r < 3) {
      // type redex at the root
      Term s = type(c.k, 1);
      Term body = prog(ext_k(c, k_star()), shift(ty, NsK, 1), depth - 1);
      return p_tyapp(p_tyabs(k_star(), body), s);
    }
    if (r < 5 && ty->is(Tag::Comp)) {
      Term a = type(c.k, 1);
      if (coin(60)) return p_bind(denormalize(c.k, a), p_ret(prog(c, a, depth - 1)), prog(ext_t(c, a), ty, depth - 1));
      return p_bind(denormalize(c.k, a), prog(c, t_comp(a), depth - 1), prog(ext_t(c, a), ty, depth - 1));
    }
    switch (ty->tag) {
      case Tag::Fun: return p_abs(denormalize(c.k, ty->k(0)), prog(ext_t(c, ty->k(0)), ty->k(1), depth - 1));
      case Tag::TForall: return p_tyabs(ty->k(0), prog(ext_k(c, ty->k(0)), ty->k(1), depth - 1));
      case Tag::Comp: return p_ret(prog(c, ty->k(0), depth - 1));
      default: break;
    }
    if (r < 7) {
      // apply a function to an argument
      Term a = type(c.k, 1);
      return p_app(prog(c, t_fun(a, ty), depth - 1), prog(c, a, depth - 1));
    }
    return fallback(c, ty);
  }

  // a program of type ty with a base redex at the root
  Term redex(const Ctx& c, const Term& ty0, int depth) {
    Term ty = nf(ty0);
    int r = pick(ty->is(Tag::Comp) ? 3 : 2);
    if (r == 0) {
      Term a = type(c.k, 1);
      return p_app(p_abs(denormalize(c.k, a), prog(ext_t(c, a), ty, depth - 1)), value(c, nf(a), depth - 1));
    }
    if (r == 1)
      return p_tyapp(p_tyabs(k_star(), prog(ext_k(c, k_star()), shift(ty, NsK, 1), depth - 1)), type(c.k, 1));
    Term a = type(c.k, 1);
    return p_bind(denormalize(c.k, a), p_ret(prog(c, a, depth - 1)), prog(ext_t(c, a), ty, depth - 1));
  }

  // a value of type ty: variable, abstraction or type abstraction when possible
  Term value(const Ctx& c, const Term& ty, int depth) {
    switch (ty->tag) {
      case Tag::Fun: return p_abs(ty->k(0), prog(ext_t(c, ty->k(0)), ty->k(1), depth));
      case Tag::TForall: return p_tyabs(ty->k(0), prog(ext_k(c, ty->k(0)), ty->k(1), depth));
      default: break;
    }
    for (int i = 0; i < static_cast<int>(c.t.size()); ++i)
      if (eq(nf(c.t[c.t.size() - 1 - static_cast<std::size_t>(i)]), ty)) return p_var(i);
    return prog(c, ty, depth);
  }

  // abort applied at ty; abort is the outermost program variable
  Term fallback(const Ctx& c, const Term& ty) {
    return p_tyapp(p_var(static_cast<int>(c.t.size()) - 1), ty);
  }

  // ---- specifications

  Term spec(const Ctx& c, int depth) {
    int r = depth <= 0 ? pick(2) : pick(7);
    switch (r) {
      case 0: {
        Term t = type(c.k, 1);
        return s_mem0(prog(c, t, 1), e_compr0(t, depth <= 0 ? s_top() : spec(ext_t(c, t), depth - 1)));
      }
      case 1: {
        // y : ref0 X is the outermost expression variable
        int y = static_cast<int>(c.i.size()) - 1;
        Term x = t_var(static_cast<int>(c.k.size()) - 1);
        return s_mem0(prog(c, x, 1), e_var(y));
      }
      case 2: return s_imp(spec(c, depth - 1), spec(c, depth - 1));
      case 3: {
        Term t = type(c.k, 1);
        return s_all_prog(denormalize(c.k, t), spec(ext_t(c, t), depth - 1));
      }
      case 4: {
        Term t = type(c.k, 1);
        return s_after(prog(c, t_comp(t), 2), denormalize(c.k, t), spec(ext_t(c, t), depth - 1));
      }
      case 5: {
        Term t = type(c.k, 1);
        Term s = type(c.k, 1);
        Term arg = e_compr0(s, spec(ext_t(c, s), depth - 1));
        Term fn = e_compr(t, i_ref0(s), spec(ext_t(ext_i(c, i_ref0(s)), t), depth - 1));
        return s_mem(prog(c, t, 1), fn, arg);
      }
      default: return s_all_type(k_star(), spec(ext_k(c, k_star()), depth - 1));
    }
  }

  // ---- law samples

  LawSample mod_i(const Ctx& c) {
    Term t = type(c.k, 1);
    Term body = spec(ext_t(c, t), 1);
    Term q = prog(c, t, 2);
    Term prem = subst(body, NsP, 0, q);
    Term g = s_after(p_ret(q), t, body);
    return {ERule::ModI, c, {prem}, ed_modI(g, ed_id(prem))};
  }

  LawSample mod_e(const Ctx& c) {
    Term t1 = type(c.k, 1);
    Term t2 = type(c.k, 1);
    Term p1 = prog(c, t_comp(t1), 2);
    Term p2 = prog(ext_t(c, t1), t_comp(t2), 2);
    Term body = spec(ext_t(c, t2), 1);
    Term g = s_after(p_bind(t1, p1, p2), t2, body);
    Term prem = s_after(p1, t1, s_after(p2, t2, shift(body, NsP, 1, 1)));
    return {ERule::ModE, c, {prem}, ed_modE(g, ed_id(prem))};
  }

  LawSample mon(const Ctx& c) {
    Term t = type(c.k, 1);
    Ctx cx = ext_t(c, t);
    Term phi1 = spec(cx, 1);
    Term phi2 = spec(cx, 1);
    Term p = prog(c, t_comp(t), 2);
    Term all = s_all_prog(t, s_imp(phi1, phi2));
    Term mod = s_after(p, t, phi1);
    EffD a = ed_impE(ed_progE(p_var(0), ed_id(shift(all, NsP, 1))), ed_id(phi1));
    return {ERule::Mon, c, {all, mod}, ed_mon(a, ed_id(mod))};
  }

  // a closed root redex; the reduct is its one base step
  LawSample antired(const Ctx& c) {
    for (;;) {
      Term t = type(c.k, 1);
      Term p1 = prog(c, t, 3);
      Term p2 = step(p1, Strategy::Base);
      if (!p2) continue;
      Term motive = spec(ext_t(c, t), 1);
      Term prem = subst(motive, NsP, 0, p2);
      return {ERule::AntiRed, c, {prem}, ed_antired(t, motive, p1, p2, 1, Strategy::Base, ed_id(prem))};
    }
  }

 private:
  std::mt19937 rng_;
};

}  // namespace effhol::gen
