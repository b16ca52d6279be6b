#include "tightbounds/strategy.hpp"

#include <stdexcept>

namespace tightbounds {

std::string step_kind_name(StepKind k) {
  switch (k) {
    case StepKind::Beta: return "beta";
    case StepKind::MxErasing: return "mx-erasing";
    case StepKind::MxNonErasing: return "mx-beta";
    case StepKind::LscMultiplicative: return "lsc-m";
    case StepKind::LscExponential: return "lsc-e";
  }
  return "?";
}

namespace {

StepRecord lift(StepRecord r, Dir d, TermPtr whole) {
  r.result = std::move(whole);
  r.redex_path.insert(r.redex_path.begin(), d);
  return r;
}

std::optional<StepRecord> step_hd(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Var:
      return std::nullopt;
    case Term::Kind::Lam:
      if (auto r = step_hd(t->a))
        return lift(std::move(*r), Dir::LamBody, mk_lam(t->name, r->result));
      return std::nullopt;
    case Term::Kind::App:
      if (t->a->kind == Term::Kind::Lam)
        return StepRecord{substitute(t->a->a, t->a->name, t->b), StepKind::Beta, {}};
      if (auto r = step_hd(t->a))
        return lift(std::move(*r), Dir::AppFn, mk_app(r->result, t->b));
      return std::nullopt;
    case Term::Kind::ESub:
      throw NonPureTerm("head strategy applied to a term with explicit substitutions");
  }
  return std::nullopt;
}

std::optional<StepRecord> step_lo(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Var:
      return std::nullopt;
    case Term::Kind::Lam:
      if (auto r = step_lo(t->a))
        return lift(std::move(*r), Dir::LamBody, mk_lam(t->name, r->result));
      return std::nullopt;
    case Term::Kind::App:
      if (t->a->kind == Term::Kind::Lam)
        return StepRecord{substitute(t->a->a, t->a->name, t->b), StepKind::Beta, {}};
      if (auto r = step_lo(t->a))
        return lift(std::move(*r), Dir::AppFn, mk_app(r->result, t->b));
      if (auto r = step_lo(t->b))
        return lift(std::move(*r), Dir::AppArg, mk_app(t->a, r->result));
      return std::nullopt;
    case Term::Kind::ESub:
      throw NonPureTerm("leftmost strategy applied to a term with explicit substitutions");
  }
  return std::nullopt;
}

std::optional<StepRecord> step_mx(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Var:
      return std::nullopt;
    case Term::Kind::Lam:
      if (auto r = step_mx(t->a))
        return lift(std::move(*r), Dir::LamBody, mk_lam(t->name, r->result));
      return std::nullopt;
    case Term::Kind::App:
      if (t->a->kind == Term::Kind::Lam) {
        auto fvs = free_vars(t->a->a);
        if (fvs.count(t->a->name))
          return StepRecord{substitute(t->a->a, t->a->name, t->b), StepKind::MxNonErasing, {}};
        // Erasing redex: the argument is normalized in place first so that
        // its reduction work is not lost, then dropped.
        if (auto r = step_mx(t->b))
          return lift(std::move(*r), Dir::AppArg, mk_app(t->a, r->result));
        StepRecord rec{t->a->a, StepKind::MxErasing, {}};
        rec.erased_size = term_size(System::LO, t->b);
        return rec;
      }
      if (auto r = step_mx(t->a))
        return lift(std::move(*r), Dir::AppFn, mk_app(r->result, t->b));
      if (auto r = step_mx(t->b))
        return lift(std::move(*r), Dir::AppArg, mk_app(t->a, r->result));
      return std::nullopt;
    case Term::Kind::ESub:
      throw NonPureTerm("maximal strategy applied to a term with explicit substitutions");
  }
  return std::nullopt;
}

// --- linear head reduction ---------------------------------------------

// t is of shape L<\x.b> iff lsc_abs(t); strip the substitution context L,
// renaming its binders away from `avoid` (the free variables of the
// incoming argument).
struct StrippedAbs {
  std::vector<std::pair<std::string, TermPtr>> wrappers;  // outermost first
  TermPtr lam;
};

StrippedAbs strip_sub_context(TermPtr t, const std::set<std::string>& avoid) {
  StrippedAbs out;
  while (t->kind == Term::Kind::ESub) {
    std::string y = t->name;
    TermPtr body = t->a;
    if (avoid.count(y)) {
      auto used = free_vars(body);
      for (auto& v : avoid) used.insert(v);
      std::string y2 = fresh_name(y, used);
      body = substitute(body, y, mk_var(y2));
      y = y2;
    }
    out.wrappers.emplace_back(y, t->b);
    t = body;
  }
  if (t->kind != Term::Kind::Lam)
    throw std::logic_error("strip_sub_context: not an answer");
  out.lam = t;
  return out;
}

bool lsc_abs(const TermPtr& t) {
  const Term* c = t.get();
  while (c->kind == Term::Kind::ESub) c = c->a.get();
  return c->kind == Term::Kind::Lam;
}

// Position of the free head occurrence of t, if t = H<<y>> for some free y.
std::optional<std::pair<std::string, Path>> lh_head(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Var:
      return std::make_pair(t->name, Path{});
    case Term::Kind::Lam: {
      auto h = lh_head(t->a);
      if (!h || h->first == t->name) return std::nullopt;
      h->second.insert(h->second.begin(), Dir::LamBody);
      return h;
    }
    case Term::Kind::App: {
      auto h = lh_head(t->a);
      if (!h) return std::nullopt;
      h->second.insert(h->second.begin(), Dir::AppFn);
      return h;
    }
    case Term::Kind::ESub: {
      auto h = lh_head(t->a);
      if (!h || h->first == t->name) return std::nullopt;
      h->second.insert(h->second.begin(), Dir::EsBody);
      return h;
    }
  }
  return std::nullopt;
}

// Replace the free head occurrence of x in t by s, renaming binders of the
// head context that would capture a free variable of s.
TermPtr replace_head(const TermPtr& t, const std::string& x, const TermPtr& s,
                     const std::set<std::string>& fv_s) {
  switch (t->kind) {
    case Term::Kind::Var:
      if (t->name != x) throw std::logic_error("replace_head: lost the head occurrence");
      return s;
    case Term::Kind::Lam: {
      TermPtr body = t->a;
      std::string y = t->name;
      if (fv_s.count(y)) {
        auto used = free_vars(body);
        for (auto& v : fv_s) used.insert(v);
        std::string y2 = fresh_name(y, used);
        body = substitute(body, y, mk_var(y2));
        y = y2;
      }
      return mk_lam(y, replace_head(body, x, s, fv_s));
    }
    case Term::Kind::App:
      return mk_app(replace_head(t->a, x, s, fv_s), t->b);
    case Term::Kind::ESub: {
      TermPtr body = t->a;
      std::string y = t->name;
      if (fv_s.count(y)) {
        auto used = free_vars(body);
        for (auto& v : fv_s) used.insert(v);
        std::string y2 = fresh_name(y, used);
        body = substitute(body, y, mk_var(y2));
        y = y2;
      }
      return mk_esub(replace_head(body, x, s, fv_s), y, t->b);
    }
  }
  throw std::logic_error("replace_head: unreachable");
}

std::optional<StepRecord> step_lsc(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Var:
      return std::nullopt;
    case Term::Kind::Lam:
      if (auto r = step_lsc(t->a))
        return lift(std::move(*r), Dir::LamBody, mk_lam(t->name, r->result));
      return std::nullopt;
    case Term::Kind::App: {
      if (lsc_abs(t->a)) {
        auto stripped = strip_sub_context(t->a, free_vars(t->b));
        TermPtr res = mk_esub(stripped.lam->a, stripped.lam->name, t->b);
        for (auto it = stripped.wrappers.rbegin(); it != stripped.wrappers.rend(); ++it)
          res = mk_esub(res, it->first, it->second);
        return StepRecord{res, StepKind::LscMultiplicative, {}};
      }
      if (auto r = step_lsc(t->a))
        return lift(std::move(*r), Dir::AppFn, mk_app(r->result, t->b));
      return std::nullopt;
    }
    case Term::Kind::ESub: {
      auto h = lh_head(t->a);
      if (h && h->first == t->name) {
        auto fvs = free_vars(t->b);
        TermPtr body = replace_head(t->a, t->name, t->b, fvs);
        StepRecord rec{mk_esub(body, t->name, t->b), StepKind::LscExponential, {}};
        rec.hole_path = h->second;
        return rec;
      }
      if (auto r = step_lsc(t->a))
        return lift(std::move(*r), Dir::EsBody, mk_esub(r->result, t->name, t->b));
      return std::nullopt;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<StepRecord> step(System s, const TermPtr& t) {
  switch (s) {
    case System::HD: return step_hd(t);
    case System::LO: return step_lo(t);
    case System::MX: return step_mx(t);
    case System::LSC: return step_lsc(t);
  }
  return std::nullopt;
}

Trace evaluate(System s, const TermPtr& t, int fuel) {
  Trace tr;
  tr.initial = t;
  TermPtr cur = t;
  for (int i = 0; i < fuel; ++i) {
    auto r = step(s, cur);
    if (!r) {
      tr.reached_normal = true;
      break;
    }
    cur = r->result;
    tr.totals.k += 1;
    tr.totals.e_total += r->erased_size;
    if (r->kind == StepKind::LscExponential)
      tr.totals.k_e += 1;
    else
      tr.totals.k_m += 1;
    tr.steps.push_back(std::move(*r));
  }
  if (!tr.reached_normal && !step(s, cur)) tr.reached_normal = true;
  tr.final = cur;
  return tr;
}

int applicable_rule_count(System s, const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Var:
      return 0;
    case Term::Kind::Lam:
      return applicable_rule_count(s, t->a);
    case Term::Kind::App: {
      if (s == System::LSC) {
        if (lsc_abs(t->a)) return 1;
        return applicable_rule_count(s, t->a);
      }
      if (t->a->kind == Term::Kind::Lam) {
        if (s != System::MX) return 1;
        if (free_vars(t->a->a).count(t->a->name)) return 1;
        int c = applicable_rule_count(s, t->b);
        return c > 0 ? c : 1;
      }
      int c = applicable_rule_count(s, t->a);
      if (c > 0 || s == System::HD) return c;
      return applicable_rule_count(s, t->b);
    }
    case Term::Kind::ESub: {
      if (s != System::LSC)
        throw NonPureTerm("explicit substitution outside the substitution calculus");
      auto h = lh_head(t->a);
      if (h && h->first == t->name) return 1;
      return applicable_rule_count(s, t->a);
    }
  }
  return 0;
}

}  // namespace tightbounds
