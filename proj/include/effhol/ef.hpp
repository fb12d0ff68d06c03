#pragma once

#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "effhol.hpp"

namespace effhol {

// Type erasure into the untyped computational lambda calculus with pairs,
// the lift of value sets to computations, and the evidenced frame built on it.

inline Term erase(const Term& p) {
  switch (p->tag) {
    case Tag::PVar: return u_var(p->idx);
    case Tag::Abs: return u_lam(erase(p->k(1)));
    case Tag::TyAbs: return erase(p->k(1));
    case Tag::TyApp: return erase(p->k(0));
    case Tag::App: return u_app(erase(p->k(0)), erase(p->k(1)));
    case Tag::Ret: return u_ret(erase(p->k(0)));
    case Tag::Bind: return u_bind(erase(p->k(1)), erase(p->k(2)));
    default: throw Error(Err::IllTyped, "erase: not a program");
  }
}

inline bool is_uvalue(const Term& t) {
  switch (t->tag) {
    case Tag::UVar:
    case Tag::ULam: return true;
    case Tag::UPair: return is_uvalue(t->k(0)) && is_uvalue(t->k(1));
    default: return false;
  }
}

enum class UStrategy { Base, Eval };

inline Term untyped_step_root(const Term& t) {
  switch (t->tag) {
    case Tag::UApp:
      if (t->k(0)->is(Tag::ULam)) return subst(t->k(0)->k(0), NsU, 0, t->k(1));
      return nullptr;
    case Tag::UBind:
      if (t->k(0)->is(Tag::URet)) return subst(t->k(1), NsU, 0, t->k(0)->k(0));
      return nullptr;
    case Tag::UProj1:
      if (t->k(0)->is(Tag::UPair) && is_uvalue(t->k(0))) return t->k(0)->k(0);
      return nullptr;
    case Tag::UProj2:
      if (t->k(0)->is(Tag::UPair) && is_uvalue(t->k(0))) return t->k(0)->k(1);
      return nullptr;
    default:
      return nullptr;
  }
}

// Base: root only, mirroring the typed base strategy.
// Eval: C ::= [] | C t | bind C t | fst C | snd C | ret C | <C, t> | <V, C>
inline Term untyped_step(const Term& t, UStrategy st = UStrategy::Eval) {
  if (Term r = untyped_step_root(t)) return r;
  if (st == UStrategy::Base) return nullptr;
  switch (t->tag) {
    case Tag::UApp:
      if (Term f = untyped_step(t->k(0), st)) return u_app(f, t->k(1));
      return nullptr;
    case Tag::UBind:
      if (Term f = untyped_step(t->k(0), st)) return u_bind(f, t->k(1));
      return nullptr;
    case Tag::UProj1:
      if (Term f = untyped_step(t->k(0), st)) return u_fst(f);
      return nullptr;
    case Tag::UProj2:
      if (Term f = untyped_step(t->k(0), st)) return u_snd(f);
      return nullptr;
    case Tag::URet:
      if (Term f = untyped_step(t->k(0), st)) return u_ret(f);
      return nullptr;
    case Tag::UPair:
      if (Term a = untyped_step(t->k(0), st)) return u_pair(a, t->k(1));
      if (!is_uvalue(t->k(0))) return nullptr;
      if (Term b = untyped_step(t->k(1), st)) return u_pair(t->k(0), b);
      return nullptr;
    default:
      return nullptr;
  }
}

constexpr long kEfFuel = 10000;

inline long default_fuel() {
  if (const char* s = std::getenv("EFFHOL_FUEL")) {
    char* end = nullptr;
    long v = std::strtol(s, &end, 10);
    if (end != s && *end == '\0' && v > 0) return v;
  }
  return kEfFuel;
}

struct UNormal {
  Term term;
  long steps = 0;
  bool exhausted = false;
};

inline UNormal untyped_normalize(const Term& t, long fuel = default_fuel()) {
  UNormal r{t, 0, false};
  while (Term n = untyped_step(r.term)) {
    if (r.steps >= fuel) {
      r.exhausted = true;
      return r;
    }
    r.term = n;
    ++r.steps;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Propositions and the evidence relation

enum class Verdict { Yes, No, Unknown, Unsupported };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "yes";
    case Verdict::No: return "no";
    case Verdict::Unknown: return "fuel-exhausted";
    case Verdict::Unsupported: return "unsupported";
  }
  return "?";
}

// A finite set of closed values, kept duplicate-free.
struct EfProp {
  std::vector<Term> members;

  bool contains(const Term& v) const {
    for (const auto& m : members)
      if (eq(m, v)) return true;
    return false;
  }
  void add(const Term& v) {
    if (!contains(v)) members.push_back(v);
  }
  bool subset_of(const EfProp& o) const {
    for (const auto& m : members)
      if (!o.contains(m)) return false;
    return true;
  }
};

inline EfProp ef_prop(const std::vector<Term>& vs) {
  EfProp p;
  for (const auto& v : vs) {
    if (!v || v->cat() != Cat::UTerm) throw Error(Err::IllTyped, "proposition member is not an untyped term");
    if (!closed_below(v, NsU, 0)) throw Error(Err::UnboundVariable, "proposition member is open: " + show(v));
    if (!is_uvalue(v)) throw Error(Err::IllTyped, "proposition member is not a value: " + show(v));
    p.add(v);
  }
  return p;
}

// p in lift A. Decided by running p under the identity semantics.
inline Verdict lift_member(const Term& p, const EfProp& a, const std::string& inst = "id",
                           long fuel = default_fuel()) {
  if (inst != "id") return Verdict::Unsupported;
  UNormal n = untyped_normalize(p, fuel);
  if (n.exhausted) return Verdict::Unknown;
  if (n.term->is(Tag::URet) && a.contains(n.term->k(0))) return Verdict::Yes;
  return Verdict::No;
}

inline Verdict conj_verdict(Verdict a, Verdict b) {
  if (a == Verdict::No || b == Verdict::No) return Verdict::No;
  if (a == Verdict::Unsupported || b == Verdict::Unsupported) return Verdict::Unsupported;
  if (a == Verdict::Unknown || b == Verdict::Unknown) return Verdict::Unknown;
  return Verdict::Yes;
}

struct EvidenceResult {
  Verdict verdict = Verdict::Yes;
  Term counterexample;  // first member that failed or ran out of fuel
};

inline EvidenceResult evidence_check(const EfProp& phi1, const Term& e, const EfProp& phi2,
                                     long fuel = default_fuel(), const std::string& inst = "id") {
  EvidenceResult r;
  for (const auto& v : phi1.members) {
    Verdict m = lift_member(u_app(e, v), phi2, inst, fuel);
    if (m == Verdict::Yes) continue;
    r.verdict = conj_verdict(r.verdict, m);
    if (!r.counterexample) r.counterexample = v;
    if (m == Verdict::No) return r;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Combinators

inline Term ef_id() { return u_lam(u_ret(u_var(0))); }

// lam x1. bind x2 <- e1 x1; e2 x2
inline Term ef_compose(const Term& e1, const Term& e2) {
  return u_lam(u_bind(u_app(e1, u_var(0)), u_app(e2, u_var(0))));
}

inline Term ef_top_value() { return ef_id(); }
inline EfProp ef_top() { return ef_prop({ef_top_value()}); }
inline Term ef_e_top() { return u_lam(u_ret(ef_top_value())); }

// lam x. bind x1 <- e1 x; bind x2 <- e2 x; ret <x1, x2>
inline Term ef_pair(const Term& e1, const Term& e2) {
  return u_lam(u_bind(u_app(e1, u_var(0)), u_bind(u_app(e2, u_var(1)), u_ret(u_pair(u_var(1), u_var(0))))));
}

inline Term ef_fst() { return u_lam(u_ret(u_fst(u_var(0)))); }
inline Term ef_snd() { return u_lam(u_ret(u_snd(u_var(0)))); }

// lam x1. ret (lam x2. e <x1, x2>)
inline Term ef_lambda(const Term& e) { return u_lam(u_ret(u_lam(u_app(e, u_pair(u_var(1), u_var(0)))))); }

inline Term ef_eval() { return u_lam(u_app(u_fst(u_var(0)), u_snd(u_var(0)))); }

inline EfProp ef_conj(const EfProp& a, const EfProp& b) {
  EfProp r;
  for (const auto& x : a.members)
    for (const auto& y : b.members) r.add(u_pair(x, y));
  return r;
}

// The candidate lam x2. e <v1, x2> used for a member v1 of the antecedent of lambda(e).
inline Term ef_lambda_candidate(const Term& e, const Term& v1) { return u_lam(u_app(e, u_pair(v1, u_var(0)))); }

// phi1 implies every member of the family, restricted to the given candidates.
inline EfProp ef_univ_impl(const EfProp& phi1, const std::vector<EfProp>& family, const std::vector<Term>& candidates,
                           long fuel = default_fuel()) {
  EfProp r;
  for (const auto& c : candidates) {
    if (!c->is(Tag::ULam) || !closed_below(c, NsU, 0))
      throw Error(Err::CandidateRejected, "candidate is not a closed abstraction: " + show(c));
    for (const auto& v : phi1.members)
      for (const auto& phi : family) {
        Verdict m = lift_member(subst(c->k(0), NsU, 0, v), phi, "id", fuel);
        if (m != Verdict::Yes)
          throw Error(Err::CandidateRejected,
                      show(c) + " on " + show(v) + ": " + verdict_name(m));
      }
    r.add(c);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Law suite

struct EfRelation {
  std::string from;
  Term evidence;
  std::string to;
};

struct EfSamples {
  std::vector<std::pair<std::string, EfProp>> props;
  std::vector<EfRelation> relations;   // claimed instances of the evidence relation
  std::vector<Term> programs;          // closed untyped programs for the lift properties
  std::vector<Term> rest;              // bodies under one variable for the bind property
  std::vector<Term> candidates;        // extra closed abstractions offered to universal implication

  const EfProp& prop(const std::string& n) const {
    for (const auto& [k, v] : props)
      if (k == n) return v;
    throw Error(Err::UnboundVariable, "unknown proposition " + n);
  }
};

struct EfCheck {
  std::string clause;
  std::string witness;
  Verdict verdict;
};

struct EfReport {
  std::vector<EfCheck> checks;

  bool clause_ok(const std::string& c) const {
    bool any = false;
    for (const auto& k : checks)
      if (k.clause == c) {
        any = true;
        if (k.verdict != Verdict::Yes) return false;
      }
    return any;
  }
  std::size_t count(const std::string& c) const {
    std::size_t n = 0;
    for (const auto& k : checks) n += k.clause == c;
    return n;
  }
  bool ok() const {
    for (const auto& k : checks)
      if (k.verdict != Verdict::Yes) return false;
    return !checks.empty();
  }
};

inline const std::vector<std::string>& ef_clauses() {
  static const std::vector<std::string> c = {"reflexivity", "transitivity", "top", "conjunction",
                                             "universal-implication", "lift-monotone", "lift-ret",
                                             "lift-bind", "lift-antired", "claimed"};
  return c;
}

namespace detail {

struct EfRunner {
  const EfSamples& s;
  long fuel;
  EfReport rep;

  void note(const std::string& clause, const std::string& w, Verdict v) { rep.checks.push_back({clause, w, v}); }

  void rel(const std::string& clause, const std::string& w, const EfProp& a, const Term& e, const EfProp& b) {
    EvidenceResult r = evidence_check(a, e, b, fuel);
    std::string ws = w;
    if (r.counterexample) ws += " fails on " + show(r.counterexample);
    note(clause, ws, r.verdict);
  }

  // all relations usable as hypotheses: claimed ones that hold, plus identities
  std::vector<EfRelation> known;

  void run() {
    for (const auto& [n, p] : s.props) rel("reflexivity", n + " -e_id-> " + n, p, ef_id(), p);

    for (const auto& r : s.relations) {
      EvidenceResult c = evidence_check(s.prop(r.from), r.evidence, s.prop(r.to), fuel);
      note("claimed", r.from + " -" + show(r.evidence) + "-> " + r.to, c.verdict);
      if (c.verdict == Verdict::Yes) known.push_back(r);
    }
    for (const auto& [n, p] : s.props) known.push_back({n, ef_id(), n});

    for (const auto& r1 : known)
      for (const auto& r2 : known)
        if (r1.to == r2.from)
          rel("transitivity", r1.from + " -> " + r1.to + " -> " + r2.to, s.prop(r1.from),
              ef_compose(r1.evidence, r2.evidence), s.prop(r2.to));

    EfProp top = ef_top();
    for (const auto& [n, p] : s.props) rel("top", n + " -e_top-> top", p, ef_e_top(), top);

    for (const auto& [n1, p1] : s.props)
      for (const auto& [n2, p2] : s.props) {
        EfProp c = ef_conj(p1, p2);
        rel("conjunction", n1 + "/\\" + n2 + " -e_fst-> " + n1, c, ef_fst(), p1);
        rel("conjunction", n1 + "/\\" + n2 + " -e_snd-> " + n2, c, ef_snd(), p2);
      }
    for (const auto& r1 : known)
      for (const auto& r2 : known)
        if (r1.from == r2.from)
          rel("conjunction", r1.from + " -pair-> " + r1.to + "/\\" + r2.to, s.prop(r1.from),
              ef_pair(r1.evidence, r2.evidence), ef_conj(s.prop(r1.to), s.prop(r2.to)));

    universal();
    properties();
  }

  void universal() {
    std::vector<std::pair<std::string, EfProp>> targets = s.props;
    targets.push_back({"top", ef_top()});
    for (const auto& [n1, p1] : s.props)
      for (const auto& [n2, p2] : s.props) {
        std::vector<Term> evs = {ef_fst(), ef_snd(), ef_e_top()};
        for (const auto& r : known)
          if (r.from == n2) evs.push_back(ef_compose(ef_snd(), r.evidence));
        for (const auto& r : known)
          if (r.from == n1) evs.push_back(ef_compose(ef_fst(), r.evidence));
        EfProp both = ef_conj(p1, p2);
        for (const auto& e : evs) {
          // largest sample family the evidence reaches
          std::vector<EfProp> fam;
          std::string fam_names;
          for (const auto& [tn, tp] : targets)
            if (evidence_check(both, e, tp, fuel).verdict == Verdict::Yes) {
              fam.push_back(tp);
              fam_names += (fam_names.empty() ? "" : ",") + tn;
            }
          if (fam.empty()) continue;
          std::vector<Term> cands;
          for (const auto& v : p1.members) cands.push_back(ef_lambda_candidate(e, v));
          for (const auto& c : s.candidates) cands.push_back(c);
          std::string w = n1 + " -lambda(" + show(e) + ")-> " + n2 + " => {" + fam_names + "}";
          EfProp impl;
          try {
            std::vector<Term> good;
            for (const auto& c : cands) {
              try {
                ef_univ_impl(p2, fam, {c}, fuel);
                good.push_back(c);
              } catch (const Error& err) {
                if (err.code != Err::CandidateRejected) throw;
              }
            }
            impl = ef_univ_impl(p2, fam, good, fuel);
          } catch (const Error& err) {
            note("universal-implication", w + ": " + err.what(), Verdict::No);
            continue;
          }
          rel("universal-implication", w, p1, ef_lambda(e), impl);
          EfProp app = ef_conj(impl, p2);
          for (std::size_t i = 0; i < fam.size(); ++i)
            rel("universal-implication", "eval on " + n2 + " => {" + fam_names + "} member " + std::to_string(i), app,
                ef_eval(), fam[i]);
        }
      }
  }

  void properties() {
    // monotonicity: A subset of B implies lift A subset of lift B
    for (const auto& [na, a] : s.props)
      for (const auto& [nb, b] : s.props) {
        if (!a.subset_of(b)) continue;
        for (const auto& p : s.programs) {
          Verdict in_a = lift_member(p, a, "id", fuel);
          if (in_a != Verdict::Yes) continue;
          note("lift-monotone", show(p) + " in lift " + na + " within " + nb, lift_member(p, b, "id", fuel));
        }
      }
    // ret: V in A implies ret V in lift A
    for (const auto& [n, a] : s.props)
      for (const auto& v : a.members) note("lift-ret", "ret " + show(v) + " in lift " + n, lift_member(u_ret(v), a, "id", fuel));
    // bind via the intermediate set C = { V | rest[V] in lift B }
    std::vector<Term> universe;
    for (const auto& [n, a] : s.props)
      for (const auto& v : a.members) universe.push_back(v);
    for (const auto& r : s.rest)
      for (const auto& [nb, b] : s.props) {
        EfProp mid;
        for (const auto& v : universe)
          if (lift_member(subst(r, NsU, 0, v), b, "id", fuel) == Verdict::Yes) mid.add(v);
        for (const auto& p : s.programs) {
          if (lift_member(p, mid, "id", fuel) != Verdict::Yes) continue;
          note("lift-bind", "bind " + show(p) + " " + show(u_lam(r)) + " in lift " + nb,
               lift_member(u_bind(p, r), b, "id", fuel));
        }
        for (const auto& v : mid.members)
          note("lift-bind", "bind ret " + show(v) + " " + show(u_lam(r)) + " in lift " + nb,
               lift_member(u_bind(u_ret(v), r), b, "id", fuel));
      }
    // anti-reduction: p -> p' and p' in lift A imply p in lift A
    for (const auto& p : s.programs) {
      Term q = untyped_step(p);
      if (!q) continue;
      for (const auto& [n, a] : s.props) {
        if (lift_member(q, a, "id", fuel) != Verdict::Yes) continue;
        note("lift-antired", show(p) + " in lift " + n, lift_member(p, a, "id", fuel));
      }
    }
  }
};

}  // namespace detail

inline EfReport ef_law_suite(const EfSamples& s, long fuel = default_fuel()) {
  detail::EfRunner r{s, fuel, {}, {}};
  r.run();
  return r.rep;
}

}  // namespace effhol
