#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "tightbounds/generator.hpp"

using namespace tightbounds;

TEST_CASE("generation is deterministic per seed") {
  FuzzConfig cfg;
  cfg.system = System::LO;
  cfg.seed = 42;
  std::mt19937_64 a(cfg.seed), b(cfg.seed);
  for (int i = 0; i < 50; ++i) {
    auto t1 = generate_term(cfg, a);
    auto t2 = generate_term(cfg, b);
    CHECK(render_term(t1) == render_term(t2));
  }
  std::mt19937_64 c(cfg.seed + 1);
  bool all_same = true;
  for (int i = 0; i < 50; ++i) {
    std::mt19937_64 a2(cfg.seed);
    if (render_term(generate_term(cfg, c)) != render_term(generate_term(cfg, a2)))
      all_same = false;
  }
  CHECK_FALSE(all_same);
}

TEST_CASE("simply typed terms normalize under mx") {
  FuzzConfig cfg;
  cfg.system = System::MX;
  cfg.generator = GenKind::SimplyTyped;
  cfg.seed = 7;
  std::mt19937_64 rng(cfg.seed);
  for (int i = 0; i < 100; ++i) {
    auto t = generate_term(cfg, rng);
    Trace tr = evaluate(System::MX, t, kDefaultFuel);
    CHECK(tr.reached_normal);
  }
}

TEST_CASE("small fuzz batches run clean") {
  for (System sys : {System::HD, System::LO, System::LSC}) {
    FuzzConfig cfg;
    cfg.system = sys;
    cfg.count = 150;
    cfg.seed = 1;
    FuzzReport rep = run_fuzz(cfg);
    CHECK(rep.attempted == 150);
    CHECK(rep.failures.empty());
    CHECK(rep.normalized > 0);
  }
  FuzzConfig cfg;
  cfg.system = System::MX;
  cfg.count = 80;
  cfg.seed = 2;
  cfg.generator = GenKind::SimplyTyped;
  FuzzReport rep = run_fuzz(cfg);
  CHECK(rep.failures.empty());
  CHECK(rep.normalized == 80);
}

TEST_CASE("failures carry diagnostics") {
  // sanity on the report bookkeeping: every normalized case passed each battery check
  FuzzConfig cfg;
  cfg.system = System::HD;
  cfg.count = 40;
  cfg.seed = 9;
  FuzzReport rep = run_fuzz(cfg);
  REQUIRE(rep.failures.empty());
  CHECK(rep.passes.at("synthesize") == rep.normalized);
  CHECK(rep.passes.at("check") == rep.normalized);
  CHECK(rep.passes.at("reduce_chain") == rep.normalized);
  CHECK(rep.passes.at("head_iso") == rep.normalized);
}
