#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ef.hpp"
#include "effhol.hpp"
#include "hol.hpp"
#include "instances.hpp"
#include "print.hpp"
#include "sexpr.hpp"
#include "translation.hpp"

namespace effhol {

// Named surface syntax. Terms mirror the canonical printer; derived
// connectives are macros expanded during elaboration:
//   prop:  bot  top  (not a)  (and a b)  (exists (u s) a)
//   spec:  bot  top  (not a)  (and a b)
//   type:  bottype  (neg t)
// (let NAME sexpr) binds $NAME for textual reuse in later declarations.

struct Env {
  std::array<std::vector<std::string>, kNs> v;

  int find(int ns, const std::string& n) const {
    const auto& xs = v[static_cast<std::size_t>(ns)];
    for (int i = static_cast<int>(xs.size()) - 1; i >= 0; --i)
      if (xs[static_cast<std::size_t>(i)] == n) return static_cast<int>(xs.size()) - 1 - i;
    return -1;
  }
  int size(int ns) const { return static_cast<int>(v[static_cast<std::size_t>(ns)].size()); }
};

inline int ns_of_cat(Cat c) {
  switch (c) {
    case Cat::HTerm: return NsH;
    case Cat::Type: return NsK;
    case Cat::Prog: return NsP;
    case Cat::Expr: return NsE;
    case Cat::UTerm: return NsU;
    default: return -1;
  }
}

inline Error scope_error(const Loc& l, const std::string& what) { return Error(Err::ScopeError, what, l.str()); }

namespace detail {
inline const std::map<std::pair<Cat, std::string>, Tag>& keyword_table() {
  static const auto table = [] {
    std::map<std::pair<Cat, std::string>, Tag> m;
    for (int i = 0; i < static_cast<int>(Tag::Count_); ++i) {
      Tag t = static_cast<Tag>(i);
      const TagInfo& ti = info(t);
      if (ti.var_ns >= 0 || ti.kids.empty()) continue;
      std::string kw = keyword(t);
      if (kw != "?") m[{ti.cat, kw}] = t;
    }
    return m;
  }();
  return table;
}

inline std::optional<int> parse_int(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::size_t i = 0;
  for (; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9') return std::nullopt;
  try {
    return std::stoi(s);
  } catch (...) {
    return std::nullopt;
  }
}
}  // namespace detail

// One elaborated declaration.
struct Decl {
  std::string kind;  // hol-prop hol-deriv type prog spec eff-deriv instance ef-samples ambient
  std::string name;
  Loc loc;
  bool eff_ctx = false;
  SortCtx sctx;
  Ctx ctx;
  std::vector<Term> hyps;
  Term term;
  HolD hol;
  EffD eff;
  std::shared_ptr<DeclarativeInstance> inst;
  EfSamples samples;
  std::map<const void*, Loc> node_locs;  // derivation node -> source position
};

struct Doc {
  std::vector<Decl> decls;
  std::vector<std::string> warnings;

  const Decl* find(const std::string& name, const std::string& kind = "") const {
    for (const auto& d : decls)
      if (d.name == name && (kind.empty() || d.kind == kind)) return &d;
    return nullptr;
  }
  const Decl& get(const std::string& name, const std::string& kind = "") const {
    if (const Decl* d = find(name, kind)) return *d;
    throw Error(Err::ScopeError, "no " + (kind.empty() ? std::string("declaration") : kind) + " named " + name);
  }
  std::vector<const Decl*> of_kind(const std::string& kind) const {
    std::vector<const Decl*> r;
    for (const auto& d : decls)
      if (d.kind == kind) r.push_back(&d);
    return r;
  }
};

class Elaborator {
 public:
  std::vector<std::string> warnings;
  std::map<std::string, SExpr> lets;

  SExpr expand_lets(const SExpr& e, int depth = 0) const {
    if (depth > 64) throw syntax_error(e.loc, "let expansion too deep");
    if (e.is_atom) {
      if (e.atom.size() > 1 && e.atom[0] == '$') {
        auto it = lets.find(e.atom.substr(1));
        if (it == lets.end()) throw scope_error(e.loc, "unknown let " + e.atom);
        return expand_lets(it->second, depth + 1);
      }
      return e;
    }
    SExpr r = e;
    for (auto& x : r.list) x = expand_lets(x, depth);
    return r;
  }

  void bind_name(Env& env, int ns, const SExpr& n) {
    if (!n.is_atom || n.atom.empty() || n.atom[0] == '(' || n.atom == "_")
      throw syntax_error(n.loc, "expected a binder name");
    if (env.find(ns, n.atom) >= 0)
      warnings.push_back(n.loc.str() + ": '" + n.atom + "' shadows an outer binder; the nearest one is used");
    env.v[static_cast<std::size_t>(ns)].push_back(n.atom);
  }

  Term term(const SExpr& sx, Cat cat, const Env& env) {
    try {
      return term_rec(sx, cat, env);
    } catch (const std::logic_error& e) {
      throw syntax_error(sx.loc, e.what());
    }
  }

  // ---- contexts

  // (ctx (sort u s) ...) for IHOL
  SortCtx sort_ctx(const SExpr& sx, Env& env) {
    SortCtx r;
    for (std::size_t i = 1; i < sx.size(); ++i) {
      const SExpr& en = sx[i];
      if (!en.head_is("sort") || en.size() != 3) throw syntax_error(en.loc, "expected (sort NAME SORT)");
      r.push_back(term(en[2], Cat::Sort, env));
      bind_name(env, NsH, en[1]);
    }
    return r;
  }

  // (ctx (kind X k) (index y i) (prog x t) ...) for EffHOL, in any order
  Ctx eff_ctx(const SExpr& sx, Env& env) {
    Ctx c;
    for (std::size_t i = 1; i < sx.size(); ++i) {
      const SExpr& en = sx[i];
      if (en.size() != 3 || !en[0].is_atom) throw syntax_error(en.loc, "expected (kind|index|prog NAME CLASS)");
      const std::string& h = en[0].atom;
      if (h == "kind") {
        c = ext_k(c, term(en[2], Cat::Kind, env));
        bind_name(env, NsK, en[1]);
      } else if (h == "index") {
        c = ext_i(c, term(en[2], Cat::Index, env));
        bind_name(env, NsE, en[1]);
      } else if (h == "prog") {
        c = ext_t(c, term(en[2], Cat::Type, env));
        bind_name(env, NsP, en[1]);
      } else {
        throw syntax_error(en.loc, "unknown context entry " + h);
      }
    }
    return c;
  }

  // ---- derivations

  HolD hol_deriv(const SExpr& sx, const Env& env) {
    if (!sx.is_list() || sx.size() < 2 || !sx[0].is_atom) throw syntax_error(sx.loc, "expected (RULE GOAL ...)");
    std::optional<HRule> rule;
    for (int r = 0; r <= static_cast<int>(HRule::Mem0E); ++r)
      if (sx[0].atom == hrule_name(static_cast<HRule>(r))) rule = static_cast<HRule>(r);
    if (!rule) throw syntax_error(sx[0].loc, "unknown IHOL rule " + sx[0].atom);
    const SExpr& gs = sx[1];
    Term wit;
    std::vector<const SExpr*> prem_sx;
    for (std::size_t i = 2; i < sx.size(); ++i) {
      if (sx[i].head_is("witness")) {
        if (sx[i].size() != 2) throw syntax_error(sx[i].loc, "expected (witness TERM)");
        wit = term(sx[i][1], Cat::HTerm, env);
      } else {
        prem_sx.push_back(&sx[i]);
      }
    }
    if (static_cast<int>(prem_sx.size()) != hrule_arity(*rule))
      throw syntax_error(sx.loc, std::string(hrule_name(*rule)) + ": expected " + std::to_string(hrule_arity(*rule)) +
                                     " premise(s)");
    if (*rule == HRule::UniE && !wit) throw syntax_error(sx.loc, "uniE: missing witness");
    bool computed = gs.is("_");
    Term goal = computed ? nullptr : term(gs, Cat::HProp, env);
    Env inner = env;
    if (*rule == HRule::UniI) {
      if (!goal || !goal->is(Tag::HForall)) throw syntax_error(gs.loc, "uniI: goal must be a universal");
      bind_name(inner, NsH, binder_name(gs, "forall", 1, "u", env.size(NsH)));
    }
    std::vector<HolD> prems;
    for (const SExpr* p : prem_sx) prems.push_back(hol_deriv(*p, *rule == HRule::UniI ? inner : env));
    try {
      if (computed) {
        switch (*rule) {
          case HRule::ImpE: return note(hd_impE(prems[0], prems[1]), sx.loc);
          case HRule::UniE: return note(hd_uniE(wit, prems[0]), sx.loc);
          case HRule::MemE: return note(hd_memE(prems[0]), sx.loc);
          case HRule::Mem0E: return note(hd_mem0E(prems[0]), sx.loc);
          default: throw syntax_error(gs.loc, std::string(hrule_name(*rule)) + ": goal cannot be computed");
        }
      }
    } catch (const Error& e) {
      if (e.code == Err::SyntaxError) throw;
      throw Error(e.code, e.detail, sx.loc.str());
    }
    return note(hd(*rule, goal, prems, wit), sx.loc);
  }

  EffD eff_deriv(const SExpr& sx, const Env& env) {
    if (!sx.is_list() || sx.size() < 2 || !sx[0].is_atom) throw syntax_error(sx.loc, "expected (RULE GOAL ...)");
    std::optional<ERule> rule = parse_erule(sx[0].atom);
    if (!rule) throw syntax_error(sx[0].loc, "unknown EffHOL rule " + sx[0].atom);
    const char* rn = erule_name(*rule);
    const SExpr& gs = sx[1];
    std::vector<Term> wit;
    Term motive, mty, from, to;
    int steps = -1;
    Strategy strat = Strategy::Base;
    std::vector<const SExpr*> prem_sx;
    for (std::size_t i = 2; i < sx.size(); ++i) {
      const SExpr& it = sx[i];
      const std::string& h = it.head();
      if (h == "witness") {
        if (it.size() != 2) throw syntax_error(it.loc, "expected (witness X)");
        Cat wc = *rule == ERule::ProgE ? Cat::Prog : *rule == ERule::ExprE ? Cat::Expr : Cat::Type;
        wit.push_back(term(it[1], wc, env));
      } else if (h == "motive") {
        if (it.size() != 3 || !it[1].is_list() || it[1].size() != 2)
          throw syntax_error(it.loc, "expected (motive (x TYPE) SPEC)");
        mty = term(it[1][1], Cat::Type, env);
        Env e2 = env;
        bind_name(e2, NsP, it[1][0]);
        motive = term(it[2], Cat::Spec, e2);
      } else if (h == "from" || h == "to") {
        if (it.size() != 2) throw syntax_error(it.loc, "expected (" + h + " PROG)");
        (h == "from" ? from : to) = term(it[1], Cat::Prog, env);
      } else if (h == "steps") {
        auto n = it.size() == 2 && it[1].is_atom ? detail::parse_int(it[1].atom) : std::nullopt;
        if (!n) throw syntax_error(it.loc, "expected (steps N)");
        steps = *n;
      } else if (h == "strategy") {
        auto s = it.size() == 2 && it[1].is_atom ? parse_strategy(it[1].atom) : std::nullopt;
        if (!s) throw syntax_error(it.loc, "expected (strategy base|cbn)");
        strat = *s;
      } else {
        prem_sx.push_back(&it);
      }
    }
    if (static_cast<int>(prem_sx.size()) != erule_arity(*rule))
      throw syntax_error(sx.loc, std::string(rn) + ": expected " + std::to_string(erule_arity(*rule)) + " premise(s)");
    if (*rule == ERule::AntiRed) {
      if (!motive || !from || !to || steps < 0) throw syntax_error(sx.loc, "antired: needs motive, from, to and steps");
    } else if (static_cast<int>(wit.size()) != erule_witnesses(*rule)) {
      throw syntax_error(sx.loc, std::string(rn) + ": missing witness");
    }
    bool computed = gs.is("_");
    Term goal = computed ? nullptr : term(gs, Cat::Spec, env);
    std::vector<EffD> prems;
    for (std::size_t i = 0; i < prem_sx.size(); ++i) {
      Env pe = env;
      auto need = [&](Tag t, const char* kw, int ns, const char* prefix, std::size_t name_pos) {
        if (!goal || !goal->is(t)) throw syntax_error(gs.loc, std::string(rn) + ": goal has the wrong shape");
        bind_name(pe, ns, binder_name(gs, kw, name_pos, prefix, env.size(ns)));
      };
      switch (*rule) {
        case ERule::ProgI: need(Tag::ForallProg, "forall-prog", NsP, "x", 1); break;
        case ERule::ExprI: need(Tag::ForallExpr, "forall-expr", NsE, "y", 1); break;
        case ERule::TypeI: need(Tag::ForallType, "forall-type", NsK, "X", 1); break;
        case ERule::Mon:
          if (i == 0) {
            if (computed) throw syntax_error(gs.loc, "mon: the goal names the bound result; it cannot be computed");
            need(Tag::After, "after", NsP, "x", 2);
          }
          break;
        default: break;
      }
      prems.push_back(eff_deriv(*prem_sx[i], pe));
    }
    try {
      if (*rule == ERule::AntiRed) {
        EffD d = ed_antired(mty, motive, from, to, steps, strat, prems[0]);
        if (!computed) std::const_pointer_cast<EffDeriv>(d)->goal = goal;
        return note(d, sx.loc);
      }
      if (computed) {
        switch (*rule) {
          case ERule::ImpE: return note(ed_impE(prems[0], prems[1]), sx.loc);
          case ERule::ProgE: return note(ed_progE(wit[0], prems[0]), sx.loc);
          case ERule::ExprE: return note(ed_exprE(wit[0], prems[0]), sx.loc);
          case ERule::TypeE: return note(ed_typeE(wit[0], prems[0]), sx.loc);
          case ERule::MemE: return note(ed_memE(prems[0]), sx.loc);
          case ERule::Mem0E: return note(ed_mem0E(prems[0]), sx.loc);
          default: throw syntax_error(gs.loc, std::string(rn) + ": goal cannot be computed");
        }
      }
    } catch (const Error& e) {
      if (e.code == Err::SyntaxError) throw;
      throw Error(e.code, e.detail, sx.loc.str());
    }
    return note(ed(*rule, goal, prems, wit), sx.loc);
  }

  // ---- documents

  Doc document(const std::string& text) {
    Doc doc;
    for (const SExpr& raw : read_sexprs(text)) {
      if (!raw.is_list() || raw.size() < 2 || !raw[0].is_atom || !raw[1].is_atom)
        throw syntax_error(raw.loc, "expected (KIND NAME ...)");
      const std::string& kind = raw[0].atom;
      if (kind == "let") {
        if (raw.size() != 3) throw syntax_error(raw.loc, "expected (let NAME SEXPR)");
        lets[raw[1].atom] = expand_lets(raw[2]);
        continue;
      }
      SExpr sx = expand_lets(raw);
      if (doc.find(raw[1].atom, kind)) throw scope_error(raw[1].loc, "duplicate declaration " + raw[1].atom);
      doc.decls.push_back(declaration(sx));
    }
    doc.warnings = warnings;
    return doc;
  }

  Decl declaration(const SExpr& sx) {
    Decl d;
    locs_ = &d.node_locs;
    d.kind = sx[0].atom;
    d.name = sx[1].atom;
    d.loc = sx.loc;
    std::size_t pos = 2;
    Env env;
    auto ctx_hyps = [&](bool eff, Cat hyp_cat) {
      d.eff_ctx = eff;
      if (pos < sx.size() && sx[pos].head_is("ctx")) {
        if (eff)
          d.ctx = eff_ctx(sx[pos], env);
        else
          d.sctx = sort_ctx(sx[pos], env);
        ++pos;
      }
      if (pos < sx.size() && sx[pos].head_is("hyps")) {
        for (std::size_t i = 1; i < sx[pos].size(); ++i) d.hyps.push_back(term(sx[pos][i], hyp_cat, env));
        ++pos;
      }
    };
    auto last = [&]() -> const SExpr& {
      if (pos + 1 != sx.size()) throw syntax_error(sx.loc, d.kind + " " + d.name + ": expected one body");
      return sx[pos];
    };
    if (d.kind == "hol-prop") {
      ctx_hyps(false, Cat::HProp);
      d.term = term(last(), Cat::HProp, env);
    } else if (d.kind == "hol-deriv") {
      ctx_hyps(false, Cat::HProp);
      d.hol = hol_deriv(last(), env);
    } else if (d.kind == "type" || d.kind == "prog" || d.kind == "spec") {
      ctx_hyps(true, Cat::Spec);
      Cat c = d.kind == "type" ? Cat::Type : d.kind == "prog" ? Cat::Prog : Cat::Spec;
      d.term = term(last(), c, env);
    } else if (d.kind == "eff-deriv" || d.kind == "ambient") {
      ctx_hyps(true, Cat::Spec);
      if (d.kind == "eff-deriv") d.eff = eff_deriv(last(), env);
      else if (pos != sx.size()) throw syntax_error(sx.loc, "ambient: only ctx and hyps are allowed");
    } else if (d.kind == "instance") {
      d.inst = instance(sx, d.name);
    } else if (d.kind == "ef-samples") {
      d.samples = samples(sx);
    } else {
      throw syntax_error(sx[0].loc, "unknown declaration kind " + d.kind);
    }
    locs_ = nullptr;
    return d;
  }

 private:
  std::map<const void*, Loc>* locs_ = nullptr;

  template <class D>
  D note(D d, const Loc& l) {
    if (locs_) (*locs_)[d.get()] = l;
    return d;
  }

  static SExpr binder_name(const SExpr& goal, const char* kw, std::size_t pos, const char* prefix, int depth) {
    if (goal.head_is(kw) && goal.size() > pos && goal[pos].is_list() && goal[pos].size() == 2 && goal[pos][0].is_atom)
      return goal[pos][0];
    // macro goals bind a name that cannot be written by hand
    return SExpr::make_atom(std::string("%") + prefix + std::to_string(depth), goal.loc);
  }

  std::shared_ptr<DeclarativeInstance> instance(const SExpr& sx, const std::string& name) {
    auto inst = std::make_shared<DeclarativeInstance>();
    inst->label = name;
    Env none;
    for (std::size_t i = 2; i < sx.size(); ++i) {
      const SExpr& it = sx[i];
      if (it.size() != 2) throw syntax_error(it.loc, "expected (FIELD VALUE)");
      const std::string& h = it.head();
      if (h == "strategy") {
        auto s = it[1].is_atom ? parse_strategy(it[1].atom) : std::nullopt;
        if (!s) throw syntax_error(it.loc, "expected base or cbn");
        inst->strat = *s;
      } else if (h == "comp") {
        inst->comp_t = term(it[1], Cat::Type, none);
      } else if (h == "ret") {
        inst->ret_t = term(it[1], Cat::Prog, none);
      } else if (h == "bind") {
        inst->bind_t = term(it[1], Cat::Prog, none);
      } else if (h == "after") {
        inst->after_t = term(it[1], Cat::Spec, none);
      } else {
        throw syntax_error(it.loc, "unknown instance field " + h);
      }
    }
    if (!inst->comp_t || !inst->ret_t || !inst->bind_t || !inst->after_t)
      throw syntax_error(sx.loc, "instance " + name + ": comp, ret, bind and after are required");
    return inst;
  }

  EfSamples samples(const SExpr& sx) {
    EfSamples s;
    Env none;
    for (std::size_t i = 2; i < sx.size(); ++i) {
      const SExpr& it = sx[i];
      const std::string& h = it.head();
      try {
        if (h == "prop") {
          if (it.size() < 2 || !it[1].is_atom) throw syntax_error(it.loc, "expected (prop NAME VALUE...)");
          std::vector<Term> vs;
          for (std::size_t k = 2; k < it.size(); ++k) vs.push_back(term(it[k], Cat::UTerm, none));
          s.props.push_back({it[1].atom, ef_prop(vs)});
        } else if (h == "relation") {
          if (it.size() != 4 || !it[1].is_atom || !it[3].is_atom) throw syntax_error(it.loc, "expected (relation A E B)");
          s.prop(it[1].atom);
          s.prop(it[3].atom);
          s.relations.push_back({it[1].atom, closed_u(it[2]), it[3].atom});
        } else if (h == "program" || h == "candidate") {
          if (it.size() != 2) throw syntax_error(it.loc, "expected (" + h + " TERM)");
          (h == "program" ? s.programs : s.candidates).push_back(closed_u(it[1]));
        } else if (h == "rest") {
          if (it.size() != 3) throw syntax_error(it.loc, "expected (rest v TERM)");
          Env e;
          bind_name(e, NsU, it[1]);
          s.rest.push_back(term(it[2], Cat::UTerm, e));
        } else {
          throw syntax_error(it.loc, "unknown sample field " + h);
        }
      } catch (const Error& e) {
        if (!e.path.empty()) throw;
        throw Error(e.code, e.detail, it.loc.str());
      }
    }
    return s;
  }

  Term closed_u(const SExpr& e) { return term(e, Cat::UTerm, Env{}); }

  Term hole_of(const SExpr& sx) const {
    if (!sx.is_atom || sx.atom.size() < 2 || sx.atom[0] != '?') return nullptr;
    std::string digits = sx.atom.substr(sx.atom[1] == 'h' ? 2 : 1);
    auto n = detail::parse_int(digits);
    if (!n) return nullptr;
    return hole(*n);
  }

  Term macro(const SExpr& sx, Cat cat, const Env& env) {
    const bool atom = sx.is_atom;
    const std::string h = atom ? sx.atom : sx.head();
    auto arity = [&](std::size_t n) {
      if (sx.size() != n + 1) throw syntax_error(sx.loc, h + ": expected " + std::to_string(n) + " argument(s)");
    };
    if (cat == Cat::HProp) {
      if (atom && h == "bot") return h_bot();
      if (atom && h == "top") return h_top();
      if (atom) return nullptr;
      if (h == "not") { arity(1); return h_not(term_rec(sx[1], cat, env)); }
      if (h == "and") { arity(2); return h_and(term_rec(sx[1], cat, env), term_rec(sx[2], cat, env)); }
      if (h == "exists") {
        arity(2);
        if (!sx[1].is_list() || sx[1].size() != 2) throw syntax_error(sx.loc, "exists: expected (exists (u SORT) PROP)");
        Term s = term_rec(sx[1][1], Cat::Sort, env);
        Env e2 = env;
        bind_name(e2, NsH, sx[1][0]);
        return h_exists(s, term_rec(sx[2], cat, e2));
      }
    } else if (cat == Cat::Spec) {
      if (atom && h == "bot") return s_bot();
      if (atom && h == "top") return s_top();
      if (atom) return nullptr;
      if (h == "not") { arity(1); return s_not(term_rec(sx[1], cat, env)); }
      if (h == "and") { arity(2); return s_and(term_rec(sx[1], cat, env), term_rec(sx[2], cat, env)); }
    } else if (cat == Cat::Type) {
      if (atom && h == "bottype" && env.find(NsK, h) < 0) return t_bot();
      if (!atom && h == "neg") { arity(1); return t_neg(term_rec(sx[1], cat, env)); }
    }
    return nullptr;
  }

  Term term_rec(const SExpr& sx, Cat cat, const Env& env) {
    if (Term hl = hole_of(sx)) return hl;
    if (Term m = macro(sx, cat, env)) return m;
    if (sx.is_atom) {
      if (sx.atom == "*") {
        if (cat == Cat::Sort) return so_base();
        if (cat == Cat::Kind) return k_star();
      }
      int ns = ns_of_cat(cat);
      if (ns < 0) throw syntax_error(sx.loc, "unexpected atom '" + sx.atom + "' where a " + cat_name(cat) + " is expected");
      int idx = env.find(ns, sx.atom);
      if (idx < 0) throw scope_error(sx.loc, "unbound name '" + sx.atom + "'");
      return make_var(var_tag(ns), idx);
    }
    if (sx.list.empty() || !sx[0].is_atom) throw syntax_error(sx.loc, "expected a keyword");
    const auto& kt = detail::keyword_table();
    auto it = kt.find({cat, sx[0].atom});
    if (it == kt.end()) throw syntax_error(sx[0].loc, "unknown " + std::string(cat_name(cat)) + " form '" + sx[0].atom + "'");
    const Tag tag = it->second;
    const TagInfo& ti = info(tag);
    std::vector<int> cls_ns(ti.kids.size(), -1);
    for (std::size_t i = 0; i < ti.kids.size(); ++i)
      for (int ns = 0; ns < kNs; ++ns)
        if (ti.kids[i].cls[ns] >= 0) cls_ns[static_cast<std::size_t>(ti.kids[i].cls[ns])] = ns;
    std::array<const SExpr*, kNs> binder{};
    std::vector<Term> kids;
    std::size_t pos = 1;
    auto next = [&]() -> const SExpr& {
      if (pos >= sx.size()) throw syntax_error(sx.loc, sx[0].atom + ": too few arguments");
      return sx[pos++];
    };
    for (std::size_t i = 0; i < ti.kids.size(); ++i) {
      const KidInfo& ki = ti.kids[i];
      if (cls_ns[i] >= 0) {
        const SExpr& b = next();
        if (!b.is_list() || b.size() != 2) throw syntax_error(b.loc, sx[0].atom + ": expected (NAME CLASS)");
        binder[static_cast<std::size_t>(cls_ns[i])] = &b[0];
        kids.push_back(term_rec(b[1], ki.cat, env));
        continue;
      }
      Env inner = env;
      for (int ns = 0; ns < kNs; ++ns) {
        if (ki.binds[ns] == 0) continue;
        const SExpr* nm = ki.cls[ns] >= 0 ? binder[static_cast<std::size_t>(ns)] : &next();
        bind_name(inner, ns, *nm);
      }
      kids.push_back(term_rec(next(), ki.cat, inner));
    }
    if (pos != sx.size()) throw syntax_error(sx[pos].loc, sx[0].atom + ": too many arguments");
    return make(tag, std::move(kids));
  }

  static const char* cat_name(Cat c) {
    switch (c) {
      case Cat::Sort: return "sort";
      case Cat::HTerm: return "term";
      case Cat::HProp: return "proposition";
      case Cat::Kind: return "kind";
      case Cat::Type: return "type";
      case Cat::Prog: return "program";
      case Cat::Index: return "index";
      case Cat::Expr: return "expression";
      case Cat::Spec: return "specification";
      case Cat::UTerm: return "untyped term";
      case Cat::Any: return "term";
    }
    return "term";
  }
};

inline Doc parse_doc(const std::string& text) { return Elaborator{}.document(text); }

// Elaborate a single closed term of the given category.
inline Term parse_term(const std::string& text, Cat cat) {
  Elaborator el;
  return el.term(read_sexpr(text), cat, Env{});
}

// ---------------------------------------------------------------------------
// Canonical printing

namespace detail {

inline std::string show_sized(const Term& t, const std::array<int, kNs>& n) {
  return show(t, Names::sized(n[NsH], n[NsK], n[NsP], n[NsE], n[NsU]));
}

inline std::string fresh_name(int ns, int depth) { return std::string(Names::prefix(ns)) + std::to_string(depth); }

inline void print_hol_deriv(std::ostream& os, const HolD& d, std::array<int, kNs> n, int indent) {
  os << std::string(static_cast<std::size_t>(indent), ' ') << "(" << hrule_name(d->rule) << " " << show_sized(d->goal, n);
  if (d->witness) os << " (witness " << show_sized(d->witness, n) << ")";
  if (d->rule == HRule::UniI) ++n[NsH];
  for (const auto& p : d->prem) {
    os << "\n";
    print_hol_deriv(os, p, n, indent + 2);
  }
  os << ")";
}

inline void print_eff_deriv(std::ostream& os, const EffD& d, std::array<int, kNs> n, int indent) {
  os << std::string(static_cast<std::size_t>(indent), ' ') << "(" << erule_name(d->rule) << " " << show_sized(d->goal, n);
  if (d->rule == ERule::AntiRed) {
    std::array<int, kNs> m = n;
    ++m[NsP];
    os << " (motive (" << fresh_name(NsP, n[NsP]) << " " << show_sized(d->wit[0], n) << ") "
       << show_sized(d->wit[1], m) << ") (from " << show_sized(d->wit[2], n) << ") (to "
       << show_sized(d->wit[3], n) << ") (steps " << d->steps << ") (strategy " << strategy_name(d->strategy)
       << ")";
  } else {
    for (const auto& w : d->wit) os << " (witness " << show_sized(w, n) << ")";
  }
  for (std::size_t i = 0; i < d->prem.size(); ++i) {
    std::array<int, kNs> m = n;
    switch (d->rule) {
      case ERule::ProgI: ++m[NsP]; break;
      case ERule::ExprI: ++m[NsE]; break;
      case ERule::TypeI: ++m[NsK]; break;
      case ERule::Mon:
        if (i == 0) ++m[NsP];
        break;
      default: break;
    }
    os << "\n";
    print_eff_deriv(os, d->prem[i], m, indent + 2);
  }
  os << ")";
}

}  // namespace detail

inline std::string print_hol_deriv(const HolD& d, int depth_h = 0) {
  std::ostringstream os;
  detail::print_hol_deriv(os, d, {depth_h, 0, 0, 0, 0}, 0);
  return os.str();
}

inline std::string print_eff_deriv(const EffD& d, const Ctx& c) {
  std::ostringstream os;
  detail::print_eff_deriv(os, d, {0, static_cast<int>(c.k.size()), static_cast<int>(c.t.size()),
                                  static_cast<int>(c.i.size()), 0},
                          0);
  return os.str();
}

inline std::string print_sort_ctx(const SortCtx& s) {
  std::string r = "(ctx";
  for (std::size_t i = 0; i < s.size(); ++i) r += " (sort " + detail::fresh_name(NsH, static_cast<int>(i)) + " " + show(s[i]) + ")";
  return r + ")";
}

inline std::string print_eff_ctx(const Ctx& c) {
  std::string r = "(ctx";
  const int nk = static_cast<int>(c.k.size());
  for (int i = 0; i < nk; ++i)
    r += " (kind " + detail::fresh_name(NsK, i) + " " + show(c.k[static_cast<std::size_t>(i)]) + ")";
  for (std::size_t i = 0; i < c.i.size(); ++i)
    r += " (index " + detail::fresh_name(NsE, static_cast<int>(i)) + " " + detail::show_sized(c.i[i], {0, nk, 0, 0, 0}) + ")";
  for (std::size_t i = 0; i < c.t.size(); ++i)
    r += " (prog " + detail::fresh_name(NsP, static_cast<int>(i)) + " " + detail::show_sized(c.t[i], {0, nk, 0, 0, 0}) + ")";
  return r + ")";
}

inline std::string print_decl(const Decl& d) {
  std::ostringstream os;
  os << "(" << d.kind << " " << d.name;
  std::array<int, kNs> n{0, 0, 0, 0, 0};
  if (d.kind == "instance") {
    os << "\n  (strategy " << strategy_name(d.inst->strat) << ")\n  (comp " << show(d.inst->comp_t) << ")\n  (ret "
       << show(d.inst->ret_t) << ")\n  (bind " << show(d.inst->bind_t) << ")\n  (after " << show(d.inst->after_t) << "))";
    return os.str();
  }
  if (d.kind == "ef-samples") {
    const EfSamples& s = d.samples;
    for (const auto& [name, p] : s.props) {
      os << "\n  (prop " << name;
      for (const auto& v : p.members) os << " " << show(v);
      os << ")";
    }
    for (const auto& r : s.relations) os << "\n  (relation " << r.from << " " << show(r.evidence) << " " << r.to << ")";
    for (const auto& p : s.programs) os << "\n  (program " << show(p) << ")";
    for (const auto& r : s.rest) os << "\n  (rest v0 " << show(r, Names::sized(0, 0, 0, 0, 1)) << ")";
    for (const auto& c : s.candidates) os << "\n  (candidate " << show(c) << ")";
    os << ")";
    return os.str();
  }
  if (d.eff_ctx) {
    os << "\n  " << print_eff_ctx(d.ctx);
    n = {0, static_cast<int>(d.ctx.k.size()), static_cast<int>(d.ctx.t.size()), static_cast<int>(d.ctx.i.size()), 0};
  } else {
    os << "\n  " << print_sort_ctx(d.sctx);
    n[NsH] = static_cast<int>(d.sctx.size());
  }
  if (!d.hyps.empty() || d.kind == "hol-deriv" || d.kind == "eff-deriv" || d.kind == "ambient") {
    os << "\n  (hyps";
    for (const auto& h : d.hyps) os << " " << detail::show_sized(h, n);
    os << ")";
  }
  if (d.term) os << "\n  " << detail::show_sized(d.term, n);
  if (d.hol) {
    std::ostringstream ds;
    detail::print_hol_deriv(ds, d.hol, n, 2);
    os << "\n" << ds.str();
  }
  if (d.eff) {
    std::ostringstream ds;
    detail::print_eff_deriv(ds, d.eff, n, 2);
    os << "\n" << ds.str();
  }
  os << ")";
  return os.str();
}

inline std::string print_doc(const Doc& doc) {
  std::string r;
  for (const auto& d : doc.decls) r += print_decl(d) + "\n\n";
  return r;
}

// Expands lets and macros: the canonical print of the elaborated document.
inline std::string macro_expand(const std::string& text) { return print_doc(parse_doc(text)); }

// Source position of the derivation node at a checker path such as root.0.1.
inline std::optional<Loc> locate(const Decl& d, const std::string& path) {
  if (path.rfind("root", 0) != 0) return std::nullopt;
  const void* node = d.hol ? static_cast<const void*>(d.hol.get()) : static_cast<const void*>(d.eff.get());
  HolD h = d.hol;
  EffD e = d.eff;
  std::size_t pos = 4;
  while (pos < path.size() && path[pos] == '.') {
    std::size_t end = path.find('.', pos + 1);
    auto k = detail::parse_int(path.substr(pos + 1, end == std::string::npos ? std::string::npos : end - pos - 1));
    if (!k) break;
    auto i = static_cast<std::size_t>(*k);
    if (h && i < h->prem.size()) {
      h = h->prem[i];
      node = h.get();
    } else if (e && i < e->prem.size()) {
      e = e->prem[i];
      node = e.get();
    } else {
      break;
    }
    pos = end == std::string::npos ? path.size() : end;
  }
  auto it = d.node_locs.find(node);
  if (it == d.node_locs.end()) return std::nullopt;
  return it->second;
}

inline Ambient ambient_of(const Decl& d) {
  if (d.kind != "ambient") throw Error(Err::ScopeError, d.name + " is not an ambient declaration");
  return Ambient{d.ctx, d.hyps};
}

}  // namespace effhol
