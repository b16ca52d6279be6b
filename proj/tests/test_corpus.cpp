#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "tightbounds/synthesis.hpp"

using namespace tightbounds;

static std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

static const char* kT0 = "(\\x1. (\\x0. x0 x1) x1) (\\z. z)";

TEST_CASE("golden hd derivation for t0") {
  std::string text = slurp(std::string(TB_CORPUS_DIR) + "/t0_hd.json");
  DerivPtr d = derivation_from_text(text);
  CHECK(check(d) == Indices{6, 0, 1});
  CHECK(classify_derivation(d).tight);
  CHECK(derivation_to_text(d) == text);  // bit-exact round trip
  auto [tr, phi] = synthesize_tight(System::HD, parse_term(kT0));
  CHECK(deriv_equal(d, phi));
}

TEST_CASE("golden lsc derivation for t0") {
  std::string text = slurp(std::string(TB_CORPUS_DIR) + "/t0_lsc.json");
  DerivPtr d = derivation_from_text(text);
  CHECK(check(d) == Indices{6, 4, 2});
  CHECK(classify_derivation(d).tight);
  CHECK(derivation_to_text(d) == text);
  auto [tr, phi] = synthesize_tight(System::LSC, parse_term(kT0));
  CHECK(deriv_equal(d, phi));
}
