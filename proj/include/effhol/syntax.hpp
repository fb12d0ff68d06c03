#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace effhol {

// Every syntactic category of both calculi (and the untyped target of erasure)
// shares one immutable node type. Binder structure is table driven.

enum class Cat : std::uint8_t { Sort, HTerm, HProp, Kind, Type, Prog, Index, Expr, Spec, UTerm, Any };

enum Ns : int { NsH = 0, NsK = 1, NsP = 2, NsE = 3, NsU = 4 };
constexpr int kNs = 5;
using Depth = std::array<int, kNs>;

enum class Tag : std::uint8_t {
  // IHOL
  SBase, SPred,
  HVar, HCompr, HComprBase,
  HMemBase, HMem, HImp, HForall,
  // EffHOL
  KStar, KCon,
  TVar, TApp, TAbs, Fun, TForall, Comp,
  PVar, TyAbs, Abs, TyApp, App, Ret, Bind,
  RefBase, Ref, IForall,
  EVar, ECompr, EComprBase, EForall, EApp,
  SMem, SMemBase, SImp, After, ForallType, ForallProg, ForallExpr,
  // untyped computational lambda calculus with pairs
  UVar, ULam, UApp, URet, UBind, UPair, UProj1, UProj2,
  // template placeholder
  Hole,
  Count_
};

struct KidInfo {
  Cat cat;
  Depth binds;                    // binders entered when descending into this kid
  std::array<std::int8_t, kNs> cls;  // sibling holding the classifier of each bound variable
};

struct TagInfo {
  const char* name;
  Cat cat;
  int var_ns;  // namespace when the tag is a variable, -1 otherwise
  std::vector<KidInfo> kids;
};

namespace detail {

inline KidInfo plain(Cat c) { return {c, {0, 0, 0, 0, 0}, {-1, -1, -1, -1, -1}}; }

inline KidInfo under(Cat c, int ns, int cls) {
  KidInfo k = plain(c);
  k.binds[ns] = 1;
  k.cls[ns] = static_cast<std::int8_t>(cls);
  return k;
}

inline KidInfo under2(Cat c, int ns1, int cls1, int ns2, int cls2) {
  KidInfo k = under(c, ns1, cls1);
  k.binds[ns2] = 1;
  k.cls[ns2] = static_cast<std::int8_t>(cls2);
  return k;
}

inline std::vector<TagInfo> build_table() {
  using C = Cat;
  std::vector<TagInfo> t(static_cast<std::size_t>(Tag::Count_));
  auto set = [&](Tag tag, TagInfo info) { t[static_cast<std::size_t>(tag)] = std::move(info); };
  set(Tag::SBase, {"SBase", C::Sort, -1, {}});
  set(Tag::SPred, {"SPred", C::Sort, -1, {plain(C::Sort)}});
  set(Tag::HVar, {"HVar", C::HTerm, NsH, {}});
  set(Tag::HCompr, {"HCompr", C::HTerm, -1, {plain(C::Sort), under(C::HProp, NsH, 0)}});
  set(Tag::HComprBase, {"HComprBase", C::HTerm, -1, {plain(C::HProp)}});
  set(Tag::HMemBase, {"HMemBase", C::HProp, -1, {plain(C::HTerm)}});
  set(Tag::HMem, {"HMem", C::HProp, -1, {plain(C::HTerm), plain(C::HTerm)}});
  set(Tag::HImp, {"HImp", C::HProp, -1, {plain(C::HProp), plain(C::HProp)}});
  set(Tag::HForall, {"HForall", C::HProp, -1, {plain(C::Sort), under(C::HProp, NsH, 0)}});

  set(Tag::KStar, {"KStar", C::Kind, -1, {}});
  set(Tag::KCon, {"KCon", C::Kind, -1, {plain(C::Kind)}});

  set(Tag::TVar, {"TVar", C::Type, NsK, {}});
  set(Tag::TApp, {"TApp", C::Type, -1, {plain(C::Type), plain(C::Type)}});
  set(Tag::TAbs, {"TAbs", C::Type, -1, {plain(C::Kind), under(C::Type, NsK, 0)}});
  set(Tag::Fun, {"Fun", C::Type, -1, {plain(C::Type), plain(C::Type)}});
  set(Tag::TForall, {"TForall", C::Type, -1, {plain(C::Kind), under(C::Type, NsK, 0)}});
  set(Tag::Comp, {"Comp", C::Type, -1, {plain(C::Type)}});

  set(Tag::PVar, {"PVar", C::Prog, NsP, {}});
  set(Tag::TyAbs, {"TyAbs", C::Prog, -1, {plain(C::Kind), under(C::Prog, NsK, 0)}});
  set(Tag::Abs, {"Abs", C::Prog, -1, {plain(C::Type), under(C::Prog, NsP, 0)}});
  set(Tag::TyApp, {"TyApp", C::Prog, -1, {plain(C::Prog), plain(C::Type)}});
  set(Tag::App, {"App", C::Prog, -1, {plain(C::Prog), plain(C::Prog)}});
  set(Tag::Ret, {"Ret", C::Prog, -1, {plain(C::Prog)}});
  set(Tag::Bind, {"Bind", C::Prog, -1, {plain(C::Type), plain(C::Prog), under(C::Prog, NsP, 0)}});

  set(Tag::RefBase, {"RefBase", C::Index, -1, {plain(C::Type)}});
  set(Tag::Ref, {"Ref", C::Index, -1, {plain(C::Type), plain(C::Index)}});
  set(Tag::IForall, {"IForall", C::Index, -1, {plain(C::Kind), under(C::Index, NsK, 0)}});

  set(Tag::EVar, {"EVar", C::Expr, NsE, {}});
  set(Tag::ECompr, {"ECompr", C::Expr, -1,
                    {plain(C::Type), plain(C::Index), under2(C::Spec, NsP, 0, NsE, 1)}});
  set(Tag::EComprBase, {"EComprBase", C::Expr, -1, {plain(C::Type), under(C::Spec, NsP, 0)}});
  set(Tag::EForall, {"EForall", C::Expr, -1, {plain(C::Kind), under(C::Expr, NsK, 0)}});
  set(Tag::EApp, {"EApp", C::Expr, -1, {plain(C::Expr), plain(C::Type)}});

  set(Tag::SMem, {"SMem", C::Spec, -1, {plain(C::Prog), plain(C::Expr), plain(C::Expr)}});
  set(Tag::SMemBase, {"SMemBase", C::Spec, -1, {plain(C::Prog), plain(C::Expr)}});
  set(Tag::SImp, {"SImp", C::Spec, -1, {plain(C::Spec), plain(C::Spec)}});
  set(Tag::After, {"After", C::Spec, -1, {plain(C::Prog), plain(C::Type), under(C::Spec, NsP, 1)}});
  set(Tag::ForallType, {"ForallType", C::Spec, -1, {plain(C::Kind), under(C::Spec, NsK, 0)}});
  set(Tag::ForallProg, {"ForallProg", C::Spec, -1, {plain(C::Type), under(C::Spec, NsP, 0)}});
  set(Tag::ForallExpr, {"ForallExpr", C::Spec, -1, {plain(C::Index), under(C::Spec, NsE, 0)}});

  set(Tag::UVar, {"UVar", C::UTerm, NsU, {}});
  set(Tag::ULam, {"ULam", C::UTerm, -1, {under(C::UTerm, NsU, -1)}});
  set(Tag::UApp, {"UApp", C::UTerm, -1, {plain(C::UTerm), plain(C::UTerm)}});
  set(Tag::URet, {"URet", C::UTerm, -1, {plain(C::UTerm)}});
  set(Tag::UBind, {"UBind", C::UTerm, -1, {plain(C::UTerm), under(C::UTerm, NsU, -1)}});
  set(Tag::UPair, {"UPair", C::UTerm, -1, {plain(C::UTerm), plain(C::UTerm)}});
  set(Tag::UProj1, {"UProj1", C::UTerm, -1, {plain(C::UTerm)}});
  set(Tag::UProj2, {"UProj2", C::UTerm, -1, {plain(C::UTerm)}});

  set(Tag::Hole, {"Hole", C::Any, -1, {}});
  return t;
}

}  // namespace detail

inline const TagInfo& info(Tag tag) {
  static const std::vector<TagInfo> table = detail::build_table();
  return table[static_cast<std::size_t>(tag)];
}

inline Cat cat_of(Tag tag) { return info(tag).cat; }

class Node;
using Term = std::shared_ptr<const Node>;

class Node {
 public:
  Tag tag;
  int idx;
  std::vector<Term> kids;
  std::size_t hash;

  Node(Tag t, int i, std::vector<Term> k) : tag(t), idx(i), kids(std::move(k)), hash(0) {
    std::size_t h = static_cast<std::size_t>(tag) * 0x9e3779b97f4a7c15ULL + static_cast<std::size_t>(idx + 7);
    for (const auto& c : kids) h = (h ^ c->hash) * 0x100000001b3ULL + 0x7f4a7c15;
    hash = h;
  }

  const Term& k(std::size_t i) const { return kids.at(i); }
  Cat cat() const { return cat_of(tag); }
  bool is(Tag t) const { return tag == t; }
};

inline Term make(Tag tag, std::vector<Term> kids) {
  const TagInfo& ti = info(tag);
  if (ti.var_ns >= 0 || tag == Tag::Hole) throw std::logic_error("make: variable tag needs an index");
  if (kids.size() != ti.kids.size())
    throw std::logic_error(std::string("make: arity mismatch for ") + ti.name);
  for (std::size_t i = 0; i < kids.size(); ++i) {
    if (!kids[i]) throw std::logic_error(std::string("make: null kid for ") + ti.name);
    Cat want = ti.kids[i].cat;
    Cat got = kids[i]->cat();
    if (want != Cat::Any && got != Cat::Any && want != got)
      throw std::logic_error(std::string("make: category mismatch under ") + ti.name);
  }
  return std::make_shared<const Node>(tag, -1, std::move(kids));
}

inline Term make_var(Tag tag, int idx) {
  if (info(tag).var_ns < 0 && tag != Tag::Hole) throw std::logic_error("make_var: not a variable tag");
  if (idx < 0) throw std::logic_error("make_var: negative index");
  return std::make_shared<const Node>(tag, idx, std::vector<Term>{});
}

inline bool eq(const Term& a, const Term& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->hash != b->hash || a->tag != b->tag || a->idx != b->idx || a->kids.size() != b->kids.size())
    return false;
  for (std::size_t i = 0; i < a->kids.size(); ++i)
    if (!eq(a->kids[i], b->kids[i])) return false;
  return true;
}

inline bool is_var(const Term& t) { return info(t->tag).var_ns >= 0; }
inline int var_ns(const Term& t) { return info(t->tag).var_ns; }

inline Tag var_tag(int ns) {
  switch (ns) {
    case NsH: return Tag::HVar;
    case NsK: return Tag::TVar;
    case NsP: return Tag::PVar;
    case NsE: return Tag::EVar;
    default: return Tag::UVar;
  }
}

inline std::size_t size(const Term& t) {
  std::size_t n = 1;
  for (const auto& c : t->kids) n += size(c);
  return n;
}

// ---------------------------------------------------------------------------
// Generic variable traversal

using VarFn = std::function<Term(const Node& var, int ns, const Depth& depth)>;

inline Term map_vars(const Term& t, const VarFn& f, Depth d = {0, 0, 0, 0, 0}) {
  const TagInfo& ti = info(t->tag);
  if (ti.var_ns >= 0) {
    Term r = f(*t, ti.var_ns, d);
    return r ? r : t;
  }
  if (t->kids.empty()) return t;
  std::vector<Term> nk;
  bool changed = false;
  nk.reserve(t->kids.size());
  for (std::size_t i = 0; i < t->kids.size(); ++i) {
    Depth dd = d;
    for (int n = 0; n < kNs; ++n) dd[n] += ti.kids[i].binds[n];
    Term c = map_vars(t->kids[i], f, dd);
    if (c != t->kids[i]) changed = true;
    nk.push_back(std::move(c));
  }
  if (!changed) return t;
  return std::make_shared<const Node>(t->tag, t->idx, std::move(nk));
}

inline Term shift(const Term& t, int ns, int by, int cutoff = 0) {
  if (by == 0) return t;
  return map_vars(t, [&](const Node& v, int vns, const Depth& d) -> Term {
    if (vns != ns || v.idx < cutoff + d[ns]) return nullptr;
    int ni = v.idx + by;
    if (ni < cutoff + d[ns]) throw std::logic_error("shift: variable escapes its scope");
    return make_var(v.tag, ni);
  });
}

inline Term shift_all(const Term& t, const Depth& by) {
  bool any = false;
  for (int n = 0; n < kNs; ++n) any = any || by[n] != 0;
  if (!any) return t;
  return map_vars(t, [&](const Node& v, int vns, const Depth& d) -> Term {
    if (by[vns] == 0 || v.idx < d[vns]) return nullptr;
    return make_var(v.tag, v.idx + by[vns]);
  });
}

// Replace variable j of namespace ns by s; s lives in the context with j removed.
inline Term subst(const Term& t, int ns, int j, const Term& s) {
  return map_vars(t, [&](const Node& v, int vns, const Depth& d) -> Term {
    if (vns != ns || v.idx < d[ns]) return nullptr;
    int rel = v.idx - d[ns];
    if (rel == j) return shift_all(s, d);
    if (rel > j) return make_var(v.tag, v.idx - 1);
    return nullptr;
  });
}

inline bool occurs(const Term& t, int ns, int j) {
  bool found = false;
  map_vars(t, [&](const Node& v, int vns, const Depth& d) -> Term {
    if (vns == ns && v.idx - d[ns] == j) found = true;
    return nullptr;
  });
  return found;
}

// True when every free variable of namespace ns has index < bound.
inline bool closed_below(const Term& t, int ns, int bound) {
  bool ok = true;
  map_vars(t, [&](const Node& v, int vns, const Depth& d) -> Term {
    if (vns == ns && v.idx - d[ns] >= bound) ok = false;
    return nullptr;
  });
  return ok;
}

inline bool contains_tag(const Term& t, Tag tag) {
  if (t->tag == tag) return true;
  for (const auto& c : t->kids)
    if (contains_tag(c, tag)) return true;
  return false;
}

}  // namespace effhol
