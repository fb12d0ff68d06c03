#include <catch_amalgamated.hpp>

#include "corpus.hpp"
#include "effhol/ef.hpp"
#include "effhol/print.hpp"
#include "gen.hpp"

using namespace effhol;

namespace {

Term idv() { return u_lam(u_ret(u_var(0))); }
Term constv() { return u_lam(u_lam(u_ret(u_var(1)))); }
Term omega() {
  Term w = u_lam(u_app(u_var(0), u_var(0)));
  return u_app(w, w);
}

}  // namespace

TEST_CASE("erasure") {
  Term poly = p_tyabs(k_star(), p_abs(t_var(0), p_ret(p_var(0))));
  CHECK(eq(erase(poly), idv()));
  Term b = p_bind(t_var(0), p_ret(p_var(1)), p_app(p_var(1), p_var(0)));
  CHECK(eq(erase(b), u_bind(u_ret(u_var(1)), u_app(u_var(1), u_var(0)))));
  CHECK(eq(erase(p_tyapp(p_var(0), t_bot())), u_var(0)));
}

TEST_CASE("untyped reduction") {
  CHECK(eq(untyped_step(u_app(idv(), constv())), u_ret(constv())));
  CHECK(eq(untyped_step(u_bind(u_ret(idv()), u_app(u_var(0), constv()))), u_app(idv(), constv())));
  CHECK(eq(untyped_step(u_fst(u_pair(idv(), constv()))), idv()));
  CHECK(eq(untyped_step(u_snd(u_pair(idv(), constv()))), constv()));
  // projection waits for both components to be values
  Term open_pair = u_pair(idv(), u_app(idv(), idv()));
  CHECK(eq(untyped_step(u_fst(open_pair)), u_fst(u_pair(idv(), u_ret(idv())))));
  CHECK(untyped_step(u_fst(open_pair), UStrategy::Base) == nullptr);
  CHECK(untyped_step(idv()) == nullptr);
}

TEST_CASE("lifted membership") {
  EfProp a = ef_prop({idv()});
  CHECK(lift_member(u_ret(idv()), a) == Verdict::Yes);
  CHECK(lift_member(u_app(idv(), idv()), a) == Verdict::Yes);
  CHECK(lift_member(u_ret(constv()), a) == Verdict::No);
  CHECK(lift_member(u_app(constv(), idv()), a) == Verdict::No);
  CHECK(lift_member(omega(), a, "id", 50) == Verdict::Unknown);
  CHECK(lift_member(u_ret(idv()), a, "cont") == Verdict::Unsupported);
  CHECK_THROWS_AS(ef_prop({u_var(0)}), Error);
  CHECK_THROWS_AS(ef_prop({u_ret(idv())}), Error);
}

TEST_CASE("evidence") {
  EfProp a = ef_prop({idv()});
  EfProp b = ef_prop({constv()});
  CHECK(evidence_check(a, ef_id(), a).verdict == Verdict::Yes);
  CHECK(evidence_check(a, ef_compose(ef_id(), ef_id()), a).verdict == Verdict::Yes);
  Term to_b = u_lam(u_ret(constv()));
  CHECK(evidence_check(a, ef_compose(ef_id(), to_b), b).verdict == Verdict::Yes);
  EvidenceResult wrong = evidence_check(a, ef_id(), b);
  CHECK(wrong.verdict == Verdict::No);
  CHECK(eq(wrong.counterexample, idv()));
  CHECK(evidence_check(a, u_lam(omega()), a, 40).verdict == Verdict::Unknown);
}

TEST_CASE("combinators") {
  CHECK(eq(ef_compose(idv(), constv()), u_lam(u_bind(u_app(idv(), u_var(0)), u_app(constv(), u_var(0))))));
  EfProp a = ef_prop({idv()});
  EfProp b = ef_prop({constv()});
  EfProp ab = ef_conj(a, b);
  REQUIRE(ab.members.size() == 1);
  CHECK(eq(ab.members[0], u_pair(idv(), constv())));
  Term to_b = u_lam(u_ret(constv()));
  CHECK(evidence_check(a, ef_pair(ef_id(), to_b), ab).verdict == Verdict::Yes);
  CHECK(evidence_check(ab, ef_fst(), a).verdict == Verdict::Yes);
  CHECK(evidence_check(ab, ef_snd(), b).verdict == Verdict::Yes);
  CHECK(evidence_check(a, ef_e_top(), ef_top()).verdict == Verdict::Yes);
  CHECK(eq(ef_lambda(ef_fst()), u_lam(u_ret(u_lam(u_app(ef_fst(), u_pair(u_var(1), u_var(0))))))));
}

TEST_CASE("universal implication") {
  EfProp a = ef_prop({idv()});
  EfProp b = ef_prop({constv()});
  // lam x. ret const sends anything into b
  Term good = u_lam(u_ret(constv()));
  EfProp imp = ef_univ_impl(a, {b}, {good});
  CHECK(imp.contains(good));
  try {
    ef_univ_impl(a, {b}, {idv()});
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.code == Err::CandidateRejected);
  }
  CHECK_THROWS_AS(ef_univ_impl(a, {b}, {u_ret(constv())}), Error);
  CHECK_THROWS_AS(ef_univ_impl(a, {b}, {u_lam(u_var(1))}), Error);
  // the evaluation combinator applies a member of the implication
  EfProp pairs = ef_conj(imp, a);
  CHECK(evidence_check(pairs, ef_eval(), b).verdict == Verdict::Yes);
}

TEST_CASE("more fuel never changes a decided verdict") {
  gen::Gen g(29);
  Ctx c = gen::Gen::base_ctx();
  EfProp any = ef_prop({idv(), constv()});
  int decided = 0;
  for (int i = 0; i < 200; ++i) {
    Term ty = g.type(c.k, 2);
    Term p = g.prog(c, t_comp(ty), 3);
    Term u = erase(p);
    Verdict small = lift_member(u, any, "id", 5);
    Verdict large = lift_member(u, any, "id", 500);
    if (small != Verdict::Unknown) {
      ++decided;
      CHECK(small == large);
    }
  }
  CHECK(decided > 0);
}

TEST_CASE("erasure commutes with root reduction") {
  gen::Gen g(31);
  Ctx c = gen::Gen::base_ctx();
  int reduced = 0;
  for (int i = 0; i < 300; ++i) {
    Term ty = g.type(c.k, 2);
    Term p = g.redex(c, ty, 3);
    Term q = step(p, Strategy::Base);
    if (!q) continue;
    ++reduced;
    Term ep = erase(p);
    Term eq_ = erase(q);
    // type steps vanish, the others become one untyped root step
    if (p->is(Tag::TyApp)) {
      CHECK(eq(ep, eq_));
    } else {
      Term r = untyped_step_root(ep);
      REQUIRE(r);
      CHECK(eq(r, eq_));
    }
  }
  CHECK(reduced > 100);
}

TEST_CASE("law suite on the corpus samples") {
  Doc doc = testing::load_corpus("ef_samples.sx");
  EfReport rep = ef_law_suite(doc.get("booleans", "ef-samples").samples);
  CHECK(rep.ok());
  for (const auto& c : ef_clauses())
    if (c != "claimed") CHECK(rep.clause_ok(c));
  CHECK(rep.count("claimed") == 4);
}

TEST_CASE("a false claim is reported") {
  EfSamples s;
  s.props = {{"A", ef_prop({idv()})}, {"B", ef_prop({constv()})}};
  s.relations = {{"A", ef_id(), "B"}};
  s.programs = {u_ret(idv())};
  s.rest = {u_ret(u_var(0))};
  EfReport rep = ef_law_suite(s, 100);
  CHECK_FALSE(rep.ok());
  CHECK_FALSE(rep.clause_ok("claimed"));
  CHECK(rep.clause_ok("reflexivity"));
}
