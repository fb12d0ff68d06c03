#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "syntax.hpp"

namespace effhol {

// Canonical printer. Binder names are regenerated from binder depth, so the
// output is stable and reparses to the same de Bruijn term.

struct Names {
  std::array<std::vector<std::string>, kNs> v;

  static const char* prefix(int ns) {
    static const char* p[kNs] = {"u", "X", "x", "y", "v"};
    return p[ns];
  }
  std::string fresh(int ns) const { return prefix(ns) + std::to_string(v[ns].size()); }
  void push(int ns, std::string n) { v[ns].push_back(std::move(n)); }
  std::string lookup(int ns, int idx) const {
    int n = static_cast<int>(v[ns].size());
    if (idx < n) return v[ns][n - 1 - idx];
    return std::string("?") + prefix(ns) + std::to_string(idx - n);
  }
  // names for a context of the given sizes (outermost first)
  static Names sized(int h, int k, int p, int e, int u = 0) {
    Names n;
    int c[kNs] = {h, k, p, e, u};
    for (int ns = 0; ns < kNs; ++ns)
      for (int i = 0; i < c[ns]; ++i) n.push(ns, n.fresh(ns));
    return n;
  }
};

namespace detail {

inline const char* keyword(Tag t) {
  switch (t) {
    case Tag::SPred: return "P";
    case Tag::HCompr: return "compr";
    case Tag::HComprBase: return "compr0";
    case Tag::HMemBase: return "member0";
    case Tag::HMem: return "member";
    case Tag::HImp: return "imp";
    case Tag::HForall: return "forall";
    case Tag::KCon: return "=>";
    case Tag::TApp: return "tapp";
    case Tag::TAbs: return "tlam";
    case Tag::Fun: return "->";
    case Tag::TForall: return "all";
    case Tag::Comp: return "M";
    case Tag::TyAbs: return "tyabs";
    case Tag::Abs: return "lam";
    case Tag::TyApp: return "tyapp";
    case Tag::App: return "app";
    case Tag::Ret: return "ret";
    case Tag::Bind: return "bind";
    case Tag::RefBase: return "ref0";
    case Tag::Ref: return "ref";
    case Tag::IForall: return "iall";
    case Tag::ECompr: return "compr";
    case Tag::EComprBase: return "compr0";
    case Tag::EForall: return "eall";
    case Tag::EApp: return "eapp";
    case Tag::SMem: return "member";
    case Tag::SMemBase: return "member0";
    case Tag::SImp: return "imp";
    case Tag::After: return "after";
    case Tag::ForallType: return "forall-type";
    case Tag::ForallProg: return "forall-prog";
    case Tag::ForallExpr: return "forall-expr";
    case Tag::ULam: return "lam";
    case Tag::UApp: return "app";
    case Tag::URet: return "ret";
    case Tag::UBind: return "bind";
    case Tag::UPair: return "pair";
    case Tag::UProj1: return "fst";
    case Tag::UProj2: return "snd";
    default: return "?";
  }
}

inline void print_rec(std::ostream& os, const Term& t, Names& names) {
  const TagInfo& ti = info(t->tag);
  if (ti.var_ns >= 0) {
    os << names.lookup(ti.var_ns, t->idx);
    return;
  }
  switch (t->tag) {
    case Tag::SBase:
    case Tag::KStar: os << "*"; return;
    case Tag::Hole: os << "?h" << t->idx; return;
    default: break;
  }
  os << "(" << keyword(t->tag);
  // which kids are classifiers, and of which namespace
  std::vector<int> cls_ns(t->kids.size(), -1);
  for (std::size_t i = 0; i < t->kids.size(); ++i)
    for (int ns = 0; ns < kNs; ++ns)
      if (ti.kids[i].cls[ns] >= 0) cls_ns[static_cast<std::size_t>(ti.kids[i].cls[ns])] = ns;
  for (std::size_t i = 0; i < t->kids.size(); ++i) {
    os << " ";
    if (cls_ns[i] >= 0) {
      os << "(" << names.fresh(cls_ns[i]) << " ";
      print_rec(os, t->kids[i], names);
      os << ")";
      continue;
    }
    const KidInfo& ki = ti.kids[i];
    Names inner = names;
    bool bound = false;
    for (int ns = 0; ns < kNs; ++ns) {
      if (ki.binds[ns] == 0) continue;
      bound = true;
      std::string nm = names.fresh(ns);
      if (ki.cls[ns] < 0) os << nm << " ";
      inner.push(ns, nm);
    }
    print_rec(os, t->kids[i], bound ? inner : names);
  }
  os << ")";
}

}  // namespace detail

inline std::string show(const Term& t, Names names = {}) {
  std::ostringstream os;
  detail::print_rec(os, t, names);
  return os.str();
}

}  // namespace effhol
