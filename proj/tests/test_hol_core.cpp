#include <catch_amalgamated.hpp>

#include "effhol/hol.hpp"
#include "effhol/print.hpp"
#include "gen.hpp"

using namespace effhol;

namespace {

Err code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code;
  }
  FAIL("no error raised");
  return Err::Unsupported;
}

}  // namespace

TEST_CASE("sorts of terms") {
  CHECK(eq(hol_sort_of({so_base()}, h_var(0)), so_base()));
  CHECK(eq(hol_sort_of({}, h_compr(so_base(), h_mem0(h_var(0)))), so_pred(so_base())));
  CHECK(eq(hol_sort_of({}, h_compr0(h_bot())), so_base()));
  CHECK(code_of([] { hol_sort_of({}, h_var(0)); }) == Err::UnboundVariable);
}

TEST_CASE("well-formed propositions") {
  CHECK_NOTHROW(hol_prop_wf({}, h_forall(so_base(), h_mem0(h_var(0)))));
  CHECK_NOTHROW(hol_prop_wf({so_pred(so_base())}, h_mem(h_compr0(h_bot()), h_var(0))));
  CHECK(code_of([] { hol_prop_wf({so_base()}, h_mem(h_var(0), h_var(0))); }) == Err::SortMismatch);
}

TEST_CASE("substitution") {
  Term psi = h_bot();
  CHECK(eq(hol_subst(h_mem0(h_var(0)), 0, h_compr0(psi)), h_mem0(h_compr0(psi))));
  // the substituted term is shifted under the binder
  Term t = h_var(3);
  Term under = h_forall(so_base(), h_mem(h_var(0), h_var(1)));
  CHECK(eq(hol_subst(under, 0, t), h_forall(so_base(), h_mem(h_var(0), h_var(4)))));
}

TEST_CASE("substituting a fresh variable then the original is the identity") {
  gen::Gen g(5);
  for (int i = 0; i < 200; ++i) {
    SortCtx s{so_base(), so_pred(so_base())};
    Term psi = g.hol_prop(s, 3);
    // a fresh variable next to position 0, renamed back onto it
    CHECK(eq(hol_subst(shift(psi, NsH, 1, 1), 1, h_var(0)), psi));
    // substituting for a variable that does not occur
    CHECK(eq(hol_subst(shift(psi, NsH, 1), 0, h_compr0(h_bot())), psi));
  }
}

TEST_CASE("derivation checking") {
  Term a = h_mem0(h_var(0));
  SortCtx s{so_base()};
  CHECK(eq(check_hol_derivation(s, {a}, hd_id(a)).goal, a));
  CHECK(eq(check_hol_derivation(s, {}, hd_impI(h_imp(a, a), hd_id(a))).goal, h_imp(a, a)));
  // mem0E needs a base comprehension under the membership
  HolD bad = hd(HRule::Mem0E, a, {hd_id(a)});
  CHECK(code_of([&] { check_hol_derivation(s, {a}, bad); }) == Err::RuleMismatch);
}

TEST_CASE("errors carry the path of the failing node") {
  Term a = h_mem0(h_var(0));
  HolD d = hd_impI(h_imp(a, a), hd_id(h_bot()));
  try {
    check_hol_derivation({so_base()}, {}, d);
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.path == "root");
  }
  HolD d2 = hd_impI(h_imp(a, h_bot()), hd_id(h_bot()));
  try {
    check_hol_derivation({so_base()}, {}, d2);
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.path == "root.0");
  }
}

TEST_CASE("universal rules") {
  Term body = h_imp(h_mem0(h_var(0)), h_mem0(h_var(0)));
  Term all = h_forall(so_base(), body);
  HolD intro = hd_uniI(all, hd_impI(body, hd_id(h_mem0(h_var(0)))));
  CHECK(eq(check_hol_derivation({}, {}, intro).goal, all));
  HolD elim = hd_uniE(h_compr0(h_bot()), intro);
  CHECK(eq(check_hol_derivation({}, {}, elim).goal, h_imp(h_mem0(h_compr0(h_bot())), h_mem0(h_compr0(h_bot())))));
  // witness of the wrong sort
  HolD wrong = hd_uniE(h_compr(so_base(), h_bot()), intro);
  CHECK_THROWS_AS(check_hol_derivation({}, {}, wrong), Error);
}
