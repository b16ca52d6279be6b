#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tightbounds/derivation.hpp"
#include "tightbounds/synthesis.hpp"

using namespace tightbounds;

static TermPtr P(const std::string& s) { return parse_term(s); }
static const char* kT0 = "(\\x1. (\\x0. x0 x1) x1) (\\z. z)";

TEST_CASE("axioms") {
  auto ax = deriv_ax(System::HD, "x", ty_neutral());
  CHECK(check(ax) == Indices{0, 0, 0});
  CHECK(render_context(ax->ctx) == "x : [N]");
  CHECK(deriv_size(ax) == 0);  // ax not counted outside lsc

  auto lax = deriv_ax(System::LSC, "x", ty_neutral());
  CHECK(check(lax) == Indices{0, 0, 1});
  CHECK(deriv_size(lax) == 1);
}

TEST_CASE("checker rejects corrupted indices") {
  auto ax = deriv_ax(System::HD, "x", ty_neutral());
  Derivation bad = *ax;
  bad.idx = Indices{1, 0, 0};
  CHECK_THROWS_AS(check(std::make_shared<const Derivation>(bad)), IndexMismatch);

  Derivation badctx = *ax;
  TypingContext g;
  g.add("y", ty_neutral());
  badctx.ctx = g;
  CHECK_THROWS_AS(check(std::make_shared<const Derivation>(badctx)), ContextMismatch);

  // wrong rule set for the system
  Derivation badrule = *ax;
  badrule.rule = Rule::ES;
  CHECK_THROWS_AS(check(std::make_shared<const Derivation>(badrule)), RuleMismatch);
}

TEST_CASE("error paths pinpoint the node") {
  auto ax = deriv_ax(System::HD, "z", ty_abs());
  auto fr = deriv_fun_r(System::HD, "z", ax);
  Derivation inner = *ax;
  inner.idx = Indices{3, 0, 0};
  Derivation outer = *fr;
  outer.premises = {std::make_shared<const Derivation>(inner)};
  try {
    check(std::make_shared<const Derivation>(outer));
    CHECK(false);
  } catch (const IndexMismatch& e) {
    CHECK(e.node_path == "0");
  }
}

TEST_CASE("fun_r side conditions") {
  auto ax = deriv_ax(System::LO, "z", ty_atom(0));
  CHECK_THROWS_AS(deriv_fun_r(System::LO, "z", ax), SideConditionViolation);
  auto tight_ax = deriv_ax(System::LO, "z", ty_neutral());
  auto fr = deriv_fun_r(System::LO, "z", tight_ax);
  CHECK(fr->idx == Indices{0, 0, 1});
  CHECK(type_equal(concl_type(fr), ty_abs()));
}

TEST_CASE("infer_indices fills the arithmetic back in") {
  auto hd_ax = deriv_ax(System::HD, "x", ty_neutral());
  Derivation blank = *hd_ax;
  blank.idx = Indices{9, 0, 9};
  auto fixed = infer_indices(std::make_shared<const Derivation>(blank));
  CHECK(fixed->idx == Indices{0, 0, 0});

  // lsc fun_b over ax: \z.z : [A] -> A at (1,1,0)
  auto lsc_ax = deriv_ax(System::LSC, "z", ty_abs());
  auto fb = deriv_fun_b(System::LSC, "z", lsc_ax);
  CHECK(fb->idx == Indices{1, 1, 0});
  CHECK(render_type(concl_type(fb)) == "[A] -> A");
  CHECK(infer_indices(fb)->idx == fb->idx);

  // lo fun_r over ax: (0,1)
  auto lo = deriv_fun_r(System::LO, "z", deriv_ax(System::LO, "z", ty_neutral()));
  CHECK(lo->idx == Indices{0, 0, 1});
}

TEST_CASE("worked-example derivations for t0") {
  auto [hd_tr, hd_phi] = synthesize_tight(System::HD, P(kT0));
  CHECK(check(hd_phi) == Indices{6, 0, 1});
  CHECK(deriv_size(hd_phi) == 7);  // b + r
  CHECK(classify_derivation(hd_phi).tight);
  CHECK(type_equal(concl_type(hd_phi), ty_abs()));

  auto [lsc_tr, lsc_phi] = synthesize_tight(System::LSC, P(kT0));
  CHECK(check(lsc_phi) == Indices{6, 4, 2});
  CHECK(deriv_size(lsc_phi) == 12);  // ES-free: b + e + r
  CHECK(count_es_nodes(lsc_phi) == 0);
  CHECK(classify_derivation(lsc_phi).tight);
}

TEST_CASE("classification flags") {
  auto ax = deriv_ax(System::LO, "x", ty_atom(0));
  DerivFlags f = classify_derivation(ax);
  CHECK_FALSE(f.tight);
  CHECK(f.traditional);
  CHECK(f.shrinking);

  // ctx {x : [[] -> a0]} makes the empty multiset occur negatively
  auto fnax = deriv_ax(System::LO, "x", ty_arrow(MultiSet{}, ty_atom(0)));
  auto many = deriv_many(System::LO, P("\\z. z"), {});
  auto app = deriv_app_b(System::LO, fnax, many);
  DerivFlags g = classify_derivation(app);
  CHECK_FALSE(g.shrinking);
  CHECK(g.traditional);

  // tight implies shrinking on synthesized derivations
  auto [tr, phi] = synthesize_tight(System::LO, P("\\x. x ((\\y. y) x)"));
  DerivFlags h = classify_derivation(phi);
  CHECK(h.tight);
  CHECK(h.shrinking);
}

TEST_CASE("mx context law") {
  auto [tr, phi] = synthesize_tight(System::MX, P("(\\x. y) ((\\z. z) (\\w. w))"));
  check(phi);
  // tamper: add a spurious context entry
  Derivation bad = *phi;
  TypingContext g = bad.ctx;
  g.add("unused", ty_neutral());
  bad.ctx = g;
  CHECK_THROWS_AS(check(std::make_shared<const Derivation>(bad)), ContextMismatch);
}

TEST_CASE("serialization round trip is bit-exact") {
  auto [tr, phi] = synthesize_tight(System::LSC, P(kT0));
  std::string text = derivation_to_text(phi);
  DerivPtr back = derivation_from_text(text);
  CHECK(check(back) == phi->idx);
  CHECK(deriv_equal(back, phi));
  CHECK(derivation_to_text(back) == text);

  auto [tr2, hd] = synthesize_tight(System::HD, P(kT0));
  std::string t2 = derivation_to_text(hd);
  CHECK(derivation_to_text(derivation_from_text(t2)) == t2);
}

TEST_CASE("index size identity on assorted derivations") {
  for (const char* s : {"\\x. x", "\\x. x x", "(\\x. x) (\\y. y)", "\\x. x ((\\y. y) (\\z. z))"}) {
    for (System sys : {System::HD, System::LO, System::MX}) {
      auto [tr, phi] = synthesize_tight(sys, P(s));
      CHECK(phi->idx.b + phi->idx.r == deriv_size(phi));
    }
    auto [tr, phi] = synthesize_tight(System::LSC, P(s));
    CHECK(phi->idx.b + phi->idx.e + phi->idx.r + count_es_nodes(phi) == deriv_size(phi));
  }
}
