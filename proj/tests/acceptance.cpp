// Acceptance gate: one pass/fail line per criterion, exit 1 if any fail.
#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "tightbounds/generator.hpp"
#include "tightbounds/synthesis.hpp"

using namespace tightbounds;
using Clock = std::chrono::steady_clock;

namespace {

// Pinned tolerances. All value checks are exact; these bound wall-clock time.
constexpr double kMsWorkedExample = 10.0;   // criteria 1 and 2
constexpr double kMsTnFamily = 1000.0;     // criterion 3
constexpr double kMsFuzz = 60000.0;        // criteria 4 and 5
constexpr double kMsHeadIso = 10000.0;     // criterion 6
constexpr double kMsNormalForms = 10000.0; // criterion 7
constexpr double kMsProperties = 30000.0;  // criterion 8

const char* kT0 = "(\\x1. (\\x0. x0 x1) x1) (\\z. z)";

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& msg) {
  if (!ok) throw Failure(msg);
}

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::vector<FuzzReport> g_reports;  // filled by criterion 4, reused by 5

void criterion1() {
  auto t0 = Clock::now();
  auto [tr, phi] = synthesize_tight(System::HD, parse_term(kT0));
  double ms = ms_since(t0);
  require(tr.totals.k == 3, "expected k=3, got " + std::to_string(tr.totals.k));
  require(alpha_equal(tr.final, parse_term("\\z. z")), "normal form is not \\z. z");
  require(term_size(System::HD, tr.final) == 1, "head size of the normal form is not 1");
  require(phi->idx == Indices{6, 0, 1}, "indices are not (6,1)");
  require(check(phi) == phi->idx, "derivation does not re-check");
  require(classify_derivation(phi).tight, "derivation is not tight");
  require(ms < kMsWorkedExample, "took " + std::to_string(ms) + " ms");
}

void criterion2() {
  auto t0 = Clock::now();
  auto [tr, phi] = synthesize_tight(System::LSC, parse_term(kT0));
  double ms = ms_since(t0);
  require(tr.totals.k_m == 3, "expected 3 multiplicative steps, got " + std::to_string(tr.totals.k_m));
  require(tr.totals.k_e == 4, "expected 4 exponential steps, got " + std::to_string(tr.totals.k_e));
  require(term_size(System::LSC, tr.final) == 2, "linear head size of the normal form is not 2");
  require(phi->idx == Indices{6, 4, 2}, "indices are not (6,4,2)");
  require(check(phi) == phi->idx, "derivation does not re-check");
  require(classify_derivation(phi).tight, "derivation is not tight");
  require(ms < kMsWorkedExample, "took " + std::to_string(ms) + " ms");
}

void criterion3() {
  auto t0 = Clock::now();
  std::vector<int> ke;
  for (int n = 1; n <= 8; ++n) {
    Trace tr = evaluate(System::LSC, make_tn(n), 1 << 22);
    require(tr.reached_normal, "t_" + std::to_string(n) + " did not normalize");
    require(tr.totals.k_m == 2 * n, "t_" + std::to_string(n) + ": k_m=" +
                                        std::to_string(tr.totals.k_m) + ", want " +
                                        std::to_string(2 * n));
    ke.push_back(tr.totals.k_e);
  }
  for (size_t i = 2; i < ke.size(); ++i)
    require(ke[i] - ke[i - 1] > ke[i - 1] - ke[i - 2],
            "k_e first differences are not strictly increasing at n=" + std::to_string(i + 1));
  double ms = ms_since(t0);
  require(ms < kMsTnFamily, "took " + std::to_string(ms) + " ms");
}

void criterion4() {
  auto t0 = Clock::now();
  struct Batch {
    System system;
    int count;
    GenKind gen;
  };
  const Batch batches[] = {{System::HD, 1000, GenKind::Arbitrary},
                           {System::LO, 1000, GenKind::Arbitrary},
                           {System::LSC, 500, GenKind::Arbitrary},
                           {System::MX, 300, GenKind::SimplyTyped}};
  for (const Batch& b : batches) {
    FuzzConfig cfg;
    cfg.system = b.system;
    cfg.count = b.count;
    cfg.seed = 2026;
    cfg.generator = b.gen;
    FuzzReport rep = run_fuzz(cfg);
    std::ostringstream tag;
    tag << system_name(b.system) << " batch";
    require(rep.attempted == b.count, tag.str() + ": attempted != count");
    if (!rep.failures.empty()) {
      const auto& f = rep.failures.front();
      throw Failure(tag.str() + ": " + std::to_string(rep.failures.size()) + " failures, first " +
                    f.check_name + " on " + f.term + ": " + f.detail);
    }
    // the equalities b=2k etc. are asserted per case inside the battery
    require(rep.passes.at("equalities") == rep.normalized, tag.str() + ": equality checks skipped");
    require(rep.passes.at("tightness") == rep.normalized, tag.str() + ": tightness checks skipped");
    g_reports.push_back(std::move(rep));
  }
  double ms = ms_since(t0);
  require(ms < kMsFuzz, "took " + std::to_string(ms) + " ms");
}

void criterion5() {
  require(g_reports.size() == 4, "criterion 4 did not run");
  for (const FuzzReport& rep : g_reports)
    require(rep.passes.at("reduce_chain") == rep.normalized,
            "a normalized case skipped its subject-reduction chain");
}

void criterion6() {
  auto t0 = Clock::now();
  FuzzConfig cfg;
  cfg.system = System::HD;
  cfg.seed = 7;
  std::mt19937_64 rng(cfg.seed);
  int done = 0, guard = 0;
  while (done < 500) {
    require(++guard < 20000, "could not collect 500 hd-normalizing cases");
    TermPtr t = generate_term(cfg, rng);
    Trace tr = evaluate_guarded(System::HD, t, cfg.fuel, 20000);
    if (!tr.reached_normal) continue;
    auto [tr2, phi] = synthesize_tight(System::HD, t);
    DerivPtr lphi = head_iso(phi);
    require(check(lphi) == lphi->idx, "L(phi) does not check");
    require(lphi->idx.b == phi->idx.b && lphi->idx.r == phi->idx.r + 1,
            "root indices do not map (b,r) -> (b,e,r+1)");
    require(deriv_equal(check_unfolding(lphi), phi), "N(L(phi)) != phi");
    ++done;
  }
  double ms = ms_since(t0);
  require(ms < kMsHeadIso, "took " + std::to_string(ms) + " ms");
}

void criterion7() {
  auto t0 = Clock::now();
  FuzzConfig cfg;
  cfg.system = System::LO;
  cfg.seed = 11;
  std::mt19937_64 rng(cfg.seed);
  int done = 0, guard = 0;
  while (done < 500) {
    require(++guard < 20000, "could not collect 500 lo-normal forms");
    Trace tr = evaluate_guarded(System::LO, generate_term(cfg, rng), cfg.fuel, 20000);
    if (!tr.reached_normal) continue;
    TermPtr nf = tr.final;
    int size = term_size(System::LO, nf);
    DerivPtr tnf = type_normal_form(System::LO, nf);
    require(tnf->idx == Indices{0, 0, size}, "type_normal_form indices are not (0,size)");
    require(deriv_size(tnf) == size, "tight deriv_size != size");
    DerivPtr m = mts_type_normal_form(nf);
    require(m->idx == Indices{size, 0, 0}, "mts indices are not (size,0)");
    require(deriv_size(m) == size, "mts deriv_size != size");
    int tsz = type_size(concl_type(m)) + type_size(m->ctx);
    require(tsz == size, "size != type_size of the mts judgement");
    ++done;
  }
  double ms = ms_since(t0);
  require(ms < kMsNormalForms, "took " + std::to_string(ms) + " ms");
}

void criterion8() {
  auto t0 = Clock::now();
  std::mt19937_64 rng(13);

  // index/size identities on synthesized derivations, all systems
  {
    FuzzConfig cfg;
    cfg.seed = 13;
    int done = 0, guard = 0;
    while (done < 200) {
      require(++guard < 10000, "identity sampling starved");
      TermPtr t = generate_term(cfg, rng);
      for (System s : {System::HD, System::LO, System::MX, System::LSC}) {
        Trace tr = evaluate_guarded(s, t, cfg.fuel, 20000);
        if (!tr.reached_normal) continue;
        auto [tr2, phi] = synthesize_tight(s, t);
        int ds = deriv_size(phi);
        if (s == System::LSC)
          require(phi->idx.b + phi->idx.e + phi->idx.r + count_es_nodes(phi) == ds,
                  "b+e+r+#es != deriv_size");
        else
          require(phi->idx.b + phi->idx.r == ds, "b+r != deriv_size");
      }
      ++done;
    }
  }

  // tight spreading, neutral <=> normal and not abs, step-absent <=> normal
  {
    FuzzConfig cfg;
    cfg.seed = 17;
    std::mt19937_64 g2(cfg.seed);
    for (int i = 0; i < 400; ++i) {
      TermPtr t = generate_term(cfg, g2);
      for (System s : {System::HD, System::LO, System::MX}) {
        Classification c = classify(s, t);
        require(c.neutral == (c.normal && !c.abs), "neutral <=> normal and not abs");
        require(step(s, t).has_value() == !c.normal, "step-absent <=> normal");
        if (!c.normal) continue;
        DerivPtr d = type_normal_form(s, t);
        if (c.neutral)
          require(type_equal(concl_type(d), ty_neutral()), "tight typing of a neutral term is not N");
        if (c.abs) require(type_equal(concl_type(d), ty_abs()), "tight typing of an abstraction is not A");
      }
    }
  }

  // polarity transitivity on random small types
  {
    std::mt19937_64 g3(19);
    std::function<TypePtr(int)> rand_ty = [&](int depth) -> TypePtr {
      int pick = depth <= 0 ? int(g3() % 3) : int(g3() % 5);
      if (pick == 0) return ty_neutral();
      if (pick == 1) return ty_abs();
      if (pick == 2) return ty_atom(int(g3() % 3));
      MultiSet m;
      int k = int(g3() % 3);
      for (int i = 0; i < k; ++i) m.insert(rand_ty(depth - 1));
      return ty_arrow(m, rand_ty(depth - 1));
    };
    for (int i = 0; i < 300; ++i) {
      TypePtr inner = rand_ty(1);
      TypePtr mid = ty_arrow(MultiSet(std::vector<TypePtr>{inner}), ty_neutral());
      TypePtr outer = ty_arrow(MultiSet(std::vector<TypePtr>{mid}), ty_abs());
      // inner Neg in mid, mid Neg in outer => inner Pos in outer
      require(occurs(inner, Polarity::Neg, mid), "base case");
      require(occurs(mid, Polarity::Neg, outer), "base case");
      require(occurs(inner, Polarity::Pos, outer), "polarity composition failed");
    }
  }

  // shrinking inequalities: expand an mts typing back along the LO trace, then
  // reduce; every beta step must lose at least 2 on b (and never gain).
  {
    FuzzConfig cfg;
    cfg.seed = 23;
    std::mt19937_64 g4(cfg.seed);
    int done = 0, guard = 0;
    while (done < 150) {
      require(++guard < 20000, "shrinking sampling starved");
      TermPtr t = generate_term(cfg, g4);
      Trace tr = evaluate_guarded(System::LO, t, cfg.fuel, 20000);
      if (!tr.reached_normal || tr.steps.empty()) continue;
      DerivPtr phi = mts_type_normal_form(tr.final);
      require(classify_derivation(phi).traditional && classify_derivation(phi).shrinking,
              "mts typing is not traditional shrinking");
      for (size_t i = tr.steps.size(); i-- > 0;) {
        TermPtr src = i == 0 ? tr.initial : tr.steps[i - 1].result;
        phi = subject_expand(phi, tr.steps[i], src);
      }
      require(check(phi) == phi->idx, "expanded derivation does not check");
      DerivPtr cur = phi;
      for (const auto& st : tr.steps) {
        DerivPtr next = subject_reduce(cur, st);
        require(next->idx.b <= cur->idx.b, "b grew across a step (generic bound)");
        require(next->idx.b <= cur->idx.b - 2, "b lost less than 2 (shrinking bound)");
        cur = next;
      }
      ++done;
    }
  }

  double ms = ms_since(t0);
  require(ms < kMsProperties, "took " + std::to_string(ms) + " ms");
}

}  // namespace

int main() {
  struct Criterion {
    const char* label;
    void (*fn)();
  };
  const Criterion criteria[] = {
      {"1 head worked example: k=3, normal form \\z.z, tight (6,1), <10ms", criterion1},
      {"2 linear head worked example: 3m+4e, size 2, tight (6,4,2), <10ms", criterion2},
      {"3 t_n family n=1..8: k_m=2n, k_e superlinear, <1s", criterion3},
      {"4 fuzz equalities: 1000 hd + 1000 lo + 500 lsc + 300 mx, zero failures, <60s", criterion4},
      {"5 subject-reduction chains with exact per-step deltas on every fuzz case", criterion5},
      {"6 head isomorphism round trip on 500 hd cases, <10s", criterion6},
      {"7 normal-form typing identities on 500 lo-normal forms, <10s", criterion7},
      {"8 property suite: identities, spreading, neutrality, polarity, shrinking, <30s", criterion8},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    try {
      c.fn();
      std::cout << "[PASS] " << c.label << "\n";
    } catch (const std::exception& e) {
      ++failed;
      std::cout << "[FAIL] " << c.label << " -- " << e.what() << "\n";
    }
  }
  if (failed) std::cout << failed << " of 8 criteria failed\n";
  else std::cout << "all 8 criteria passed\n";
  return failed ? 1 : 0;
}
