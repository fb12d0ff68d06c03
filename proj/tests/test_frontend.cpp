#include <catch_amalgamated.hpp>

#include "corpus.hpp"
#include "effhol/json_io.hpp"
#include "effhol/surface.hpp"

using namespace effhol;

namespace {

bool same_terms(const std::vector<Term>& a, const std::vector<Term>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!eq(a[i], b[i])) return false;
  return true;
}

bool same_hol(const HolD& a, const HolD& b) {
  if (!a || !b) return !a && !b;
  if (a->rule != b->rule || !eq(a->goal, b->goal) || a->prem.size() != b->prem.size()) return false;
  if ((a->witness == nullptr) != (b->witness == nullptr)) return false;
  if (a->witness && !eq(a->witness, b->witness)) return false;
  for (std::size_t i = 0; i < a->prem.size(); ++i)
    if (!same_hol(a->prem[i], b->prem[i])) return false;
  return true;
}

bool same_eff(const EffD& a, const EffD& b) {
  if (!a || !b) return !a && !b;
  if (a->rule != b->rule || !eq(a->goal, b->goal) || !same_terms(a->wit, b->wit)) return false;
  if (a->rule == ERule::AntiRed && (a->steps != b->steps || a->strategy != b->strategy)) return false;
  if (a->prem.size() != b->prem.size()) return false;
  for (std::size_t i = 0; i < a->prem.size(); ++i)
    if (!same_eff(a->prem[i], b->prem[i])) return false;
  return true;
}

bool same_decl(const Decl& a, const Decl& b) {
  if (a.kind != b.kind || a.name != b.name) return false;
  if (!same_terms(a.sctx, b.sctx) || !same_terms(a.hyps, b.hyps)) return false;
  if (!same_terms(a.ctx.k, b.ctx.k) || !same_terms(a.ctx.i, b.ctx.i) || !same_terms(a.ctx.t, b.ctx.t)) return false;
  if ((a.term == nullptr) != (b.term == nullptr) || (a.term && !eq(a.term, b.term))) return false;
  return same_hol(a.hol, b.hol) && same_eff(a.eff, b.eff);
}

Term prop(const std::string& s) { return parse_term(s, Cat::HProp); }

}  // namespace

TEST_CASE("parsing terms") {
  CHECK(eq(prop("(forall (u *) (member0 u))"), h_forall(so_base(), h_mem0(h_var(0)))));
  CHECK(eq(prop("(forall (s (P *)) (forall (u *) (member u s)))"),
           h_forall(so_pred(so_base()), h_forall(so_base(), h_mem(h_var(0), h_var(1))))));
  CHECK(eq(parse_term("(forall-type (X *) (forall-prog (x X) (after (ret x) (r X) top)))", Cat::Spec),
           s_all_type(k_star(), s_all_prog(t_var(0), s_after(p_ret(p_var(0)), t_var(0), s_top())))));
  CHECK(eq(parse_term("(all (X *) (-> X (M X)))", Cat::Type), t_all(k_star(), t_fun(t_var(0), t_comp(t_var(0))))));
}

TEST_CASE("macros") {
  Term bot = h_forall(so_base(), h_mem0(h_var(0)));
  CHECK(eq(prop("bot"), bot));
  CHECK(eq(prop("top"), h_imp(bot, bot)));
  CHECK(eq(prop("(forall (u *) (not (member0 u)))"), h_forall(so_base(), h_imp(h_mem0(h_var(0)), bot))));
  // a and b = forall r. (a => b => r) => r
  Term a = h_mem0(h_var(1));
  Term b = h_mem0(h_var(0));
  Term r = h_mem0(h_var(0));
  Term expect = h_forall(so_base(), h_imp(h_imp(h_mem0(h_var(2)), h_imp(h_mem0(h_var(1)), r)), r));
  CHECK(eq(prop("(forall (a *) (forall (b *) (and (member0 a) (member0 b))))"),
           h_forall(so_base(), h_forall(so_base(), expect))));
  (void)a;
  (void)b;
  // exists u. P u = forall r. (forall u. P u => r) => r
  Term ex = h_forall(so_base(), h_imp(h_forall(so_base(), h_imp(h_mem0(h_var(0)), h_mem0(h_var(1)))), h_mem0(h_var(0))));
  CHECK(eq(prop("(exists (u *) (member0 u))"), ex));
  CHECK(eq(parse_term("(all (X *) (neg X))", Cat::Type), t_all(k_star(), t_fun(t_var(0), t_bot()))));
  CHECK(eq(parse_term("bottype", Cat::Type), t_all(k_star(), t_var(0))));
  CHECK(eq(parse_term("(not bot)", Cat::Spec), s_imp(s_bot(), s_bot())));
}

TEST_CASE("let definitions expand") {
  Doc d = parse_doc("(let A (member0 a))\n(hol-prop p (ctx (sort a *)) (hyps) (imp $A $A))");
  const Decl& p = d.get("p", "hol-prop");
  CHECK(eq(p.term, h_imp(h_mem0(h_var(0)), h_mem0(h_var(0)))));
  std::string expanded = macro_expand("(let A (member0 a))\n(hol-prop p (ctx (sort a *)) (hyps) (not $A))");
  CHECK(expanded.find("$A") == std::string::npos);
  CHECK(expanded.find("not") == std::string::npos);
}

TEST_CASE("scope errors carry a position") {
  try {
    parse_doc("(hol-prop p (ctx (sort a *)) (hyps)\n  (member0 b))");
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.code == Err::ScopeError);
    CHECK(e.path == "2:12");  // the unbound atom itself
  }
  CHECK_THROWS_AS(parse_doc("(hol-prop p (ctx) (hyps) (member0"), Error);
}

TEST_CASE("shadowing is reported") {
  Doc d = parse_doc("(hol-prop p (ctx (sort a *)) (hyps) (forall (a *) (member0 a)))");
  REQUIRE(d.warnings.size() == 1);
  CHECK(d.warnings[0].find("shadows") != std::string::npos);
  CHECK(eq(d.get("p").term, h_forall(so_base(), h_mem0(h_var(0)))));
}

TEST_CASE("printing then parsing returns the same declarations") {
  for (const char* f : {"hol.sx", "effhol.sx", "peirce.sx", "adversarial_hol.sx", "adversarial_effhol.sx",
                        "ef_samples.sx", "krivine.sx", "ambient.sx"}) {
    INFO(f);
    Doc d1 = testing::load_corpus(f);
    std::string printed = print_doc(d1);
    Doc d2 = parse_doc(printed);
    REQUIRE(d1.decls.size() == d2.decls.size());
    for (std::size_t i = 0; i < d1.decls.size(); ++i) {
      INFO(d1.decls[i].name);
      CHECK(same_decl(d1.decls[i], d2.decls[i]));
    }
    CHECK(print_doc(d2) == printed);
  }
}

TEST_CASE("JSON roundtrip") {
  for (const char* f : {"hol.sx", "effhol.sx"}) {
    Doc d = testing::load_corpus(f);
    for (const auto& decl : d.decls) {
      if (decl.kind != "hol-deriv" && decl.kind != "eff-deriv") continue;
      INFO(decl.name);
      Decl back = derivation_from_json_text(derivation_to_json(decl).dump());
      CHECK(same_decl(decl, back));
    }
  }
}

TEST_CASE("JSON schema errors") {
  Doc d = testing::load_corpus("hol.sx");
  nlohmann::json j = derivation_to_json(d.get("K", "hol-deriv"));
  auto code = [](const nlohmann::json& x) {
    try {
      derivation_from_json(x);
    } catch (const Error& e) {
      return e.code;
    }
    return Err::Unsupported;
  };
  nlohmann::json bad_rule = j;
  bad_rule["derivation"]["rule"] = "cut";
  CHECK(code(bad_rule) == Err::SchemaError);
  nlohmann::json bad_wit = j;
  bad_wit["derivation"]["witnesses"].push_back("(compr0 bot)");
  CHECK(code(bad_wit) == Err::SchemaError);
  nlohmann::json bad_schema = j;
  bad_schema["schema"] = "other/0";
  CHECK(code(bad_schema) == Err::SchemaError);
  CHECK_THROWS_AS(derivation_from_json_text("{"), Error);
}

TEST_CASE("conjunction rules are derivable") {
  Doc d = testing::load_corpus("hol.sx");
  for (const char* n : {"and-intro", "and-fst"}) {
    const Decl& x = d.get(n, "hol-deriv");
    CHECK_NOTHROW(check_hol_derivation(x.sctx, x.hyps, x.hol));
  }
}

TEST_CASE("failing nodes map back to source") {
  Doc d = testing::load_corpus("adversarial_hol.sx");
  const Decl& x = d.get("bot-from-top", "hol-deriv");
  try {
    check_hol_derivation(x.sctx, x.hyps, x.hol);
    FAIL("accepted");
  } catch (const Error& e) {
    auto at = locate(x, e.path);
    REQUIRE(at);
    CHECK(at->line > 1);
  }
  CHECK(locate(x, "root"));
  CHECK_FALSE(locate(x, "elsewhere"));
}
