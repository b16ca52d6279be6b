#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tightbounds/term.hpp"

using namespace tightbounds;

static TermPtr P(const std::string& s) { return parse_term(s); }

TEST_CASE("parse shapes") {
  auto t = P("\\x. x");
  CHECK(t->kind == Term::Kind::Lam);
  CHECK(t->a->kind == Term::Kind::Var);
  CHECK(t->a->name == "x");

  auto es = P("x[x := y][y := z]");
  CHECK(es->kind == Term::Kind::ESub);
  CHECK(es->name == "y");
  CHECK(es->a->kind == Term::Kind::ESub);
  CHECK(es->a->name == "x");

  // ES binds tighter than application
  auto p = P("(y x)[x := z] ((\\z.z) (\\z.z))");
  CHECK(p->kind == Term::Kind::App);
  CHECK(p->a->kind == Term::Kind::ESub);
  CHECK(p->b->kind == Term::Kind::App);

  CHECK_THROWS_AS(P("(x"), ParseError);
  CHECK_THROWS_AS(P("\\. x"), ParseError);
}

TEST_CASE("render round trip") {
  for (const char* s : {"\\x. x", "x (y z)", "x[x := y]", "(\\x1. (\\x0. x0 x1) x1) (\\z. z)",
                        "(y x)[x := z] ((\\z. z) (\\z. z))", "\\x. \\y. x y x"}) {
    auto t = P(s);
    CHECK(render_term(t) == s);
    CHECK(alpha_equal(parse_term(render_term(t)), t));
  }
  CHECK(render_term(mk_app(mk_var("x"), mk_app(mk_var("y"), mk_var("z")))) == "x (y z)");
  CHECK(render_term(mk_esub(mk_var("x"), "x", mk_var("y"))) == "x[x := y]");
}

TEST_CASE("free variables") {
  CHECK(free_vars(P("\\x. x y")) == std::set<std::string>{"y"});
  CHECK(free_vars(P("x[x := y]")) == std::set<std::string>{"y"});
  CHECK(free_vars(P("(\\x1. (\\x0. x0 x1) x1) (\\z. z)")).empty());
}

TEST_CASE("substitution") {
  CHECK(alpha_equal(substitute(P("x x"), "x", P("\\z.z")), P("(\\z.z) (\\z.z)")));
  // capture avoidance
  auto r = substitute(P("\\y. x"), "x", P("y"));
  CHECK(r->kind == Term::Kind::Lam);
  CHECK(r->name != "y");
  CHECK(r->a->name == "y");
  // vacuous
  CHECK(alpha_equal(substitute(P("y"), "x", P("(\\x. x x) (\\x. x x)")), P("y")));
}

TEST_CASE("unfold") {
  CHECK(alpha_equal(unfold(P("x[x := y][y := z]")), P("z")));
  CHECK(alpha_equal(unfold(P("\\x. x")), P("\\x. x")));
  CHECK(alpha_equal(unfold(P("(x x)[x := \\z.z]")), P("(\\z.z) (\\z.z)")));
  // idempotence and fv containment
  for (const char* s : {"x[x := y][y := z]", "(x x)[x := \\z.z]", "(y x)[x := z] (y y)"}) {
    auto u = unfold(P(s));
    CHECK(alpha_equal(unfold(u), u));
    auto fu = free_vars(u);
    auto ft = free_vars(P(s));
    for (const auto& v : fu) CHECK(ft.count(v) == 1);
  }
}

TEST_CASE("sizes") {
  CHECK(term_size(System::HD, P("\\z.z")) == 1);
  CHECK(term_size(System::LSC, P("\\z.z")) == 2);
  CHECK(term_size(System::HD, P("x (y z)")) == 1);
  CHECK(term_size(System::LO, P("x (y z)")) == 2);
  CHECK(term_size(System::MX, P("x (y z)")) == 2);
  CHECK_THROWS_AS(term_size(System::HD, P("x[x := y]")), NonPureTerm);
  // LO dominates HD
  for (const char* s : {"\\z.z", "x (y z)", "\\x. x x", "(\\x. x) y"})
    CHECK(term_size(System::LO, P(s)) >= term_size(System::HD, P(s)));
}

TEST_CASE("classification") {
  auto omega = std::string("(\\x. x x) (\\x. x x)");
  auto c = classify(System::HD, P("x (" + omega + ")"));
  CHECK(c.normal);
  CHECK(c.neutral);
  CHECK_FALSE(c.abs);
  CHECK_FALSE(classify(System::LO, P("x (" + omega + ")")).normal);

  // The argument of a linear head normal form is unconstrained.
  auto lh = classify(System::LSC, P("(y x)[x := z] ((\\z.z) (\\z.z))"));
  CHECK(lh.normal);
  CHECK(lh.neutral);

  auto ab = classify(System::LSC, P("(\\x. x)[y := z]"));
  CHECK(ab.abs);
  CHECK(ab.normal);
  CHECK_FALSE(ab.neutral);

  // e-redex under the substitution
  CHECK_FALSE(classify(System::LSC, P("x[x := y]")).normal);

  // neutral == normal && !abs on assorted terms
  for (const char* s : {"x", "\\x. x", "x y", "x (\\y. y)", "(\\x. x) y"})
    for (System sys : {System::HD, System::LO, System::MX}) {
      auto k = classify(sys, P(s));
      CHECK(k.neutral == (k.normal && !k.abs));
    }
}

TEST_CASE("t_n family construction") {
  auto t1 = make_tn(1);
  CHECK(free_vars(t1).empty());
}
