#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "tightbounds/types.hpp"

using namespace tightbounds;

TEST_CASE("multiset discipline") {
  auto a0 = ty_atom(0);
  MultiSet m;
  m.insert(a0);
  m.insert(a0);
  MultiSet single;
  single.insert(a0);
  CHECK(m != single);  // non-idempotent: [a0,a0] != [a0]
  CHECK(m.size() == 2);
  CHECK(m.united(single).size() == 3);
  MultiSet n = m;
  CHECK(n.remove_one(a0));
  CHECK(n == single);
  CHECK_FALSE(single.united(MultiSet{}).empty());
}

TEST_CASE("tightness and type size") {
  CHECK(is_tight(ty_neutral()));
  CHECK(is_tight(ty_abs()));
  CHECK_FALSE(is_tight(ty_atom(0)));
  MultiSet dom;
  dom.insert(ty_atom(0));
  auto arr = ty_arrow(dom, ty_atom(1));
  CHECK_FALSE(is_tight(arr));
  CHECK(type_size(ty_neutral()) == 0);
  CHECK(type_size(ty_atom(3)) == 0);
  CHECK(type_size(arr) == 1);
  MultiSet dom2;
  dom2.insert(arr);
  CHECK(type_size(ty_arrow(dom2, arr)) == 3);

  TypingContext g;
  g.add("x", arr);
  TypingContext h;
  h.add("x", arr);
  h.add("y", ty_atom(0));
  CHECK(type_size(g.united(h)) == type_size(g) + type_size(h));
}

TEST_CASE("type surface syntax") {
  for (const char* s : {"N", "A", "a0", "[a0] -> a0", "[] -> N", "[a0, a0] -> [A] -> a1",
                        "[[a0] -> a1] -> N"}) {
    auto t = parse_type(s);
    CHECK(render_type(t) == s);
  }
  auto g = parse_context("x : [N]; y : [A, [a0] -> a1]");
  CHECK(render_context(g) == "x : [N]; y : [A, [a0] -> a1]");
  CHECK(g.get("x").size() == 1);
  CHECK(g.get("z").empty());
}

TEST_CASE("polarity occurrences") {
  TypeOrMulti empty = MultiSet{};
  auto x = ty_atom(0);
  MultiSet mx;
  mx.insert(x);
  // occurs([], Pos, [X] -> X) is false
  CHECK_FALSE(occurs(empty, Polarity::Pos, ty_arrow(mx, x)));
  // occurs([], Neg, [] -> X) is true (reflexive base through the domain flip)
  CHECK(occurs(empty, Polarity::Neg, ty_arrow(MultiSet{}, x)));
  TypeOrMulti tx = x;
  CHECK(occurs(tx, Polarity::Pos, x));
  CHECK_FALSE(occurs(tx, Polarity::Neg, x));
  CHECK(occurs(tx, Polarity::Neg, ty_arrow(mx, ty_atom(1))));
}

namespace {

TypePtr random_type(std::mt19937_64& rng, int depth) {
  if (depth == 0 || rng() % 3 == 0) return ty_atom(static_cast<int>(rng() % 3));
  if (rng() % 4 == 0) return rng() % 2 ? ty_neutral() : ty_abs();
  MultiSet dom;
  unsigned n = rng() % 3;
  for (unsigned i = 0; i < n; ++i) dom.insert(random_type(rng, depth - 1));
  return ty_arrow(dom, random_type(rng, depth - 1));
}

std::vector<TypeOrMulti> subparts(const TypePtr& t) {
  std::vector<TypeOrMulti> out{t};
  if (t->kind == Type::Kind::Arrow) {
    out.push_back(t->domain);
    for (const auto& e : t->domain.elems()) {
      auto sub = subparts(e);
      out.insert(out.end(), sub.begin(), sub.end());
    }
    auto sub = subparts(t->codomain);
    out.insert(out.end(), sub.begin(), sub.end());
  }
  return out;
}

}  // namespace

TEST_CASE("transitivity of polarities") {
  std::mt19937_64 rng(7);
  int checked = 0;
  for (int i = 0; i < 200; ++i) {
    TypePtr T = random_type(rng, 3);
    for (const auto& U : subparts(T)) {
      std::vector<TypeOrMulti> unders;
      if (auto* ut = std::get_if<TypePtr>(&U))
        unders = subparts(*ut);
      else
        for (const auto& e : std::get<MultiSet>(U).elems()) unders.push_back(e);
      for (const auto& V : unders)
        for (Polarity a : {Polarity::Pos, Polarity::Neg})
          for (Polarity b : {Polarity::Pos, Polarity::Neg}) {
            bool ua, vb;
            if (auto* ut = std::get_if<TypePtr>(&U)) {
              ua = occurs(U, a, T);
              vb = occurs(V, b, *ut);
            } else {
              ua = occurs(U, a, T);
              vb = occurs(V, b, std::get<MultiSet>(U));
            }
            if (ua && vb) {
              CHECK(occurs(V, compose(a, b), T));
              ++checked;
            }
          }
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("tight constants contain no multisets") {
  TypeOrMulti empty = MultiSet{};
  for (const TypePtr& t : {ty_neutral(), ty_abs()}) {
    MultiSet m;
    m.insert(t);
    CHECK(is_tight(m));
    CHECK_FALSE(occurs(empty, Polarity::Pos, t));
  }
}
