#pragma once

#include <memory>
#include <string>
#include <vector>

#include "terms.hpp"

namespace effhol {

struct Loc {
  int line = 0;
  int col = 0;
  std::string str() const { return std::to_string(line) + ":" + std::to_string(col); }
};

struct SExpr {
  bool is_atom = false;
  std::string atom;
  std::vector<SExpr> list;
  Loc loc;

  bool is_list() const { return !is_atom; }
  bool is(const std::string& a) const { return is_atom && atom == a; }
  // list whose first element is the given atom
  bool head_is(const std::string& a) const { return !is_atom && !list.empty() && list[0].is(a); }
  const std::string& head() const {
    static const std::string none;
    return !is_atom && !list.empty() && list[0].is_atom ? list[0].atom : none;
  }
  std::size_t size() const { return list.size(); }
  const SExpr& operator[](std::size_t i) const { return list.at(i); }

  static SExpr make_atom(std::string s, Loc l = {}) {
    SExpr e;
    e.is_atom = true;
    e.atom = std::move(s);
    e.loc = l;
    return e;
  }
  static SExpr make_list(std::vector<SExpr> xs, Loc l = {}) {
    SExpr e;
    e.list = std::move(xs);
    e.loc = l;
    return e;
  }
};

inline Error syntax_error(const Loc& l, const std::string& what) { return Error(Err::SyntaxError, what, l.str()); }

// Reads every top-level s-expression. ';' starts a comment to end of line.
inline std::vector<SExpr> read_sexprs(const std::string& text) {
  std::size_t i = 0;
  int line = 1, col = 1;
  auto adv = [&]() {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++i;
  };
  auto skip = [&]() {
    while (i < text.size()) {
      char c = text[i];
      if (c == ';') {
        while (i < text.size() && text[i] != '\n') adv();
      } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        adv();
      } else {
        break;
      }
    }
  };
  std::vector<SExpr> out;
  std::vector<SExpr> stack;
  while (true) {
    skip();
    if (i >= text.size()) break;
    Loc here{line, col};
    char c = text[i];
    if (c == '(') {
      stack.push_back(SExpr::make_list({}, here));
      adv();
      continue;
    }
    SExpr item;
    if (c == ')') {
      if (stack.empty()) throw syntax_error(here, "unbalanced ')'");
      item = std::move(stack.back());
      stack.pop_back();
      adv();
    } else {
      std::string a;
      while (i < text.size()) {
        char d = text[i];
        if (d == '(' || d == ')' || d == ';' || d == ' ' || d == '\t' || d == '\n' || d == '\r') break;
        a.push_back(d);
        adv();
      }
      item = SExpr::make_atom(std::move(a), here);
    }
    if (stack.empty())
      out.push_back(std::move(item));
    else
      stack.back().list.push_back(std::move(item));
  }
  if (!stack.empty()) throw syntax_error(stack.back().loc, "unclosed '('");
  return out;
}

inline SExpr read_sexpr(const std::string& text) {
  auto xs = read_sexprs(text);
  if (xs.size() != 1) throw syntax_error(xs.empty() ? Loc{1, 1} : xs[1].loc, "expected exactly one expression");
  return xs[0];
}

inline std::string write_sexpr(const SExpr& e) {
  if (e.is_atom) return e.atom;
  std::string s = "(";
  for (std::size_t k = 0; k < e.list.size(); ++k) {
    if (k) s += " ";
    s += write_sexpr(e.list[k]);
  }
  return s + ")";
}

}  // namespace effhol
