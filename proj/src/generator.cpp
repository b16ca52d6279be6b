#include "tightbounds/generator.hpp"

#include <functional>

namespace tightbounds {

namespace {

const char* kPool[] = {"x0", "x1", "x2", "x3", "x4", "x5"};
constexpr int kPoolSize = 6;

TermPtr gen_arbitrary(std::mt19937_64& rng, int budget) {
  auto pick_name = [&] { return std::string(kPool[rng() % kPoolSize]); };
  if (budget <= 1) return mk_var(pick_name());
  switch (rng() % 6) {
    case 0:
    case 1:
      return mk_var(pick_name());
    case 2:
    case 3:
      return mk_lam(pick_name(), gen_arbitrary(rng, budget - 1));
    default: {
      int left = 1 + static_cast<int>(rng() % static_cast<unsigned>(budget - 1));
      return mk_app(gen_arbitrary(rng, left), gen_arbitrary(rng, budget - left));
    }
  }
}

// --- simply typed generation ------------------------------------------------

struct ST;
using STPtr = std::shared_ptr<const ST>;
struct ST {
  STPtr dom, cod;  // null dom = the base type
};

STPtr st_base() {
  static STPtr b = std::make_shared<const ST>();
  return b;
}
STPtr st_arrow(STPtr a, STPtr b) { return std::make_shared<const ST>(ST{std::move(a), std::move(b)}); }

bool st_equal(const STPtr& a, const STPtr& b) {
  if (!a->dom || !b->dom) return !a->dom && !b->dom;
  return st_equal(a->dom, b->dom) && st_equal(a->cod, b->cod);
}

STPtr random_st(std::mt19937_64& rng, int depth) {
  if (depth == 0 || rng() % 3 == 0) return st_base();
  return st_arrow(random_st(rng, depth - 1), random_st(rng, depth - 1));
}

struct StGen {
  std::mt19937_64& rng;
  std::vector<std::pair<std::string, STPtr>> scope;  // lambda-bound
  std::vector<std::pair<std::string, STPtr>> frees;  // invented constants
  int next_bound = 0;
  int next_free = 0;

  std::string fresh_free(const STPtr& ty) {
    std::string n = "f" + std::to_string(next_free++);
    frees.emplace_back(n, ty);
    return n;
  }

  // Applications "x t1 .. tk" whose head has type A1 -> .. -> Ak -> T.
  struct Chain {
    std::string head;
    std::vector<STPtr> args;
  };

  TermPtr gen(const STPtr& ty, int budget) {
    std::vector<Chain> chains;
    auto scan = [&](const std::vector<std::pair<std::string, STPtr>>& env) {
      for (const auto& [n, s] : env) {
        STPtr cur = s;
        std::vector<STPtr> args;
        for (int k = 0; k <= 2; ++k) {
          if (st_equal(cur, ty)) chains.push_back({n, args});
          if (!cur->dom) break;
          args.push_back(cur->dom);
          cur = cur->cod;
        }
      }
    };
    scan(scope);
    scan(frees);

    bool may_lam = ty->dom != nullptr;
    if (budget <= 1) {
      // cheapest closure: an existing zero-argument chain or a fresh constant
      for (const auto& c : chains)
        if (c.args.empty()) return mk_var(c.head);
      return mk_var(fresh_free(ty));
    }
    unsigned roll = static_cast<unsigned>(rng() % 10);
    if (may_lam && (roll < 5 || chains.empty())) {
      std::string x = "b" + std::to_string(next_bound++);
      scope.emplace_back(x, ty->dom);
      TermPtr body = gen(ty->cod, budget - 1);
      scope.pop_back();
      return mk_lam(x, body);
    }
    if (chains.empty() || roll >= 9) {
      // head a fresh constant, sometimes taking one generated argument
      if (budget > 3 && roll % 2 == 0) {
        STPtr a = random_st(rng, 1);
        std::string h = fresh_free(st_arrow(a, ty));
        return mk_app(mk_var(h), gen(a, budget - 1));
      }
      return mk_var(fresh_free(ty));
    }
    const Chain& c = chains[rng() % chains.size()];
    TermPtr t = mk_var(c.head);
    int n = static_cast<int>(c.args.size());
    for (int i = 0; i < n; ++i)
      t = mk_app(t, gen(c.args[i], std::max(1, (budget - 1) / n)));
    return t;
  }
};

TermPtr gen_simply_typed(std::mt19937_64& rng, int budget) {
  StGen g{rng};
  return g.gen(random_st(rng, 2), budget);
}

}  // namespace

TermPtr generate_term(const FuzzConfig& cfg, std::mt19937_64& rng) {
  int budget = 2 + static_cast<int>(rng() % static_cast<unsigned>(std::max(1, cfg.max_term_size)));
  if (cfg.generator == GenKind::SimplyTyped) return gen_simply_typed(rng, budget);
  TermPtr t = gen_arbitrary(rng, budget);
  auto fvs = free_vars(t);
  for (auto it = fvs.rbegin(); it != fvs.rend(); ++it) t = mk_lam(*it, t);
  return t;
}

namespace {

struct Battery {
  FuzzReport& report;
  std::string term_text;

  void pass(const std::string& name) { report.passes[name] += 1; }
  void fail(const std::string& name, const std::string& detail) {
    report.failures.push_back({term_text, name, detail});
  }

  bool step(const std::string& name, const std::function<void()>& body) {
    try {
      body();
      pass(name);
      return true;
    } catch (const std::exception& e) {
      fail(name, e.what());
      return false;
    }
  }
};

struct CheckFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void expect(bool cond, const std::string& msg) {
  if (!cond) throw CheckFailed(msg);
}

Indices expected_delta(System s, const StepRecord& st) {
  switch (st.kind) {
    case StepKind::Beta:
    case StepKind::MxNonErasing:
      return {-2, 0, 0};
    case StepKind::MxErasing:
      return {-2, 0, -st.erased_size};
    case StepKind::LscMultiplicative:
      return {-2, 0, 0};
    case StepKind::LscExponential:
      return {0, -1, 0};
  }
  return {0, 0, 0};
}

void size_identity(System s, const DerivPtr& phi) {
  int ds = deriv_size(phi);
  if (s == System::LSC)
    expect(phi->idx.b + phi->idx.e + phi->idx.r + count_es_nodes(phi) == ds,
           "b+e+r+#es != deriv_size");
  else
    expect(phi->idx.b + phi->idx.r == ds, "b+r != deriv_size");
}

// Node count with early exit: diverging samples can grow (and share) subterms
// so fast that a full walk never returns.
void count_nodes(const TermPtr& t, int cap, int& n) {
  if (++n > cap) return;
  if (t->kind == Term::Kind::Var) return;
  count_nodes(t->a, cap, n);
  if (n > cap) return;
  if (t->kind != Term::Kind::Lam) count_nodes(t->b, cap, n);
}

bool exceeds_size(const TermPtr& t, int cap) {
  int n = 0;
  count_nodes(t, cap, n);
  return n > cap;
}


void run_case(FuzzReport& report, const FuzzConfig& cfg, const TermPtr& t) {
  Battery bat{report, render_term(t)};
  Trace tr = evaluate_guarded(cfg.system, t, cfg.fuel, 20000);
  report.attempted += 1;
  if (!tr.reached_normal) {
    report.skipped_fuel += 1;
    return;
  }
  report.normalized += 1;
  const System s = cfg.system;

  DerivPtr phi;
  if (!bat.step("synthesize", [&] {
        auto [tr2, d] = synthesize_tight(s, t, cfg.fuel);
        phi = d;
      }))
    return;

  bat.step("check", [&] { check(phi); });

  bat.step("tightness", [&] {
    DerivFlags f = classify_derivation(phi);
    expect(f.tight, "synthesized derivation is not tight");
    if (s == System::MX) expect(f.mx_tight, "mx derivation is not mx-tight");
    expect(f.shrinking, "tight derivation must be shrinking");
  });

  bat.step("equalities", [&] {
    int size_nf = term_size(s, tr.final);
    switch (s) {
      case System::HD:
      case System::LO:
        expect(phi->idx.b == 2 * tr.totals.k, "b != 2k");
        expect(phi->idx.r == size_nf, "r != size");
        break;
      case System::MX:
        expect(phi->idx.b == 2 * tr.totals.k, "b != 2k");
        expect(phi->idx.r == size_nf + tr.totals.e_total, "r != size + e_total");
        break;
      case System::LSC:
        expect(phi->idx.b == 2 * tr.totals.k_m, "b != 2*k_m");
        expect(phi->idx.e == tr.totals.k_e, "e != k_e");
        expect(phi->idx.r == size_nf, "r != size");
        break;
    }
  });

  bat.step("size_identity", [&] { size_identity(s, phi); });

  bat.step("neutrality", [&] {
    Classification c = classify(s, tr.final);
    const TypePtr& ty = concl_type(phi);
    if (c.neutral) expect(ty->kind == Type::Kind::Neutral, "neutral final not typed N");
    if (c.abs) expect(ty->kind == Type::Kind::Abs, "abs final not typed A");
  });

  bat.step("reduce_chain", [&] {
    DerivPtr cur = phi;
    for (const auto& st : tr.steps) {
      DerivPtr next = subject_reduce(cur, st);
      check(next);
      Indices want = expected_delta(s, st);
      expect(next->idx.b == cur->idx.b + want.b, "b delta wrong");
      expect(next->idx.e == cur->idx.e + want.e, "e delta wrong");
      expect(next->idx.r == cur->idx.r + want.r, "r delta wrong");
      size_identity(s, next);
      cur = next;
    }
    expect(alpha_equal(cur->subject, tr.final), "chain did not land on the normal form");
    expect(cur->idx.b == 0, "final b != 0");
  });

  if (s == System::HD) {
    bat.step("head_iso", [&] {
      DerivPtr psi = head_iso(phi);
      check(psi);
      expect(psi->idx.b == phi->idx.b && psi->idx.r == phi->idx.r + 1,
             "iso indices are not (b, e, r+1)");
      DerivPtr back = head_iso(psi);
      expect(deriv_equal(back, phi), "iso round trip differs");
    });
  }

  if (s == System::LO) {
    bat.step("mts", [&] {
      DerivPtr m = mts_type_normal_form(tr.final);
      check(m);
      DerivFlags f = classify_derivation(m);
      expect(f.traditional && f.shrinking, "mts typing not traditional shrinking");
      int size_nf = term_size(System::LO, tr.final);
      expect(m->idx.b == size_nf && m->idx.r == 0, "mts indices differ from (size, 0)");
      expect(deriv_size(m) == size_nf, "mts deriv_size != size");
      int g = type_size(m->ctx), ty = type_size(concl_type(m));
      if (classify(System::LO, tr.final).neutral)
        expect(ty + size_nf == g, "neutral type-size equation fails");
      else
        expect(size_nf == g + ty, "normal type-size equation fails");
    });
  }
}

}  // namespace

Trace evaluate_guarded(System s, const TermPtr& t, int fuel, int size_cap) {

  Trace tr;
  tr.initial = t;
  tr.final = t;
  for (int i = 0; i < fuel; ++i) {
    auto st = step(s, tr.final);
    if (!st) {
      tr.reached_normal = true;
      return tr;
    }
    tr.final = st->result;
    tr.totals.k += 1;
    if (st->kind == StepKind::LscExponential) tr.totals.k_e += 1;
    else tr.totals.k_m += 1;
    if (st->kind == StepKind::MxErasing) tr.totals.e_total += st->erased_size;
    tr.steps.push_back(std::move(*st));
    if (exceeds_size(tr.final, size_cap)) return tr;
  }
  return tr;
}

FuzzReport run_fuzz(const FuzzConfig& cfg) {
  FuzzReport report;
  std::mt19937_64 rng(cfg.seed);
  for (int i = 0; i < cfg.count; ++i) {
    TermPtr t = generate_term(cfg, rng);
    run_case(report, cfg, t);
  }
  return report;
}

}  // namespace tightbounds
