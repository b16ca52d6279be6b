#include "tightbounds/synthesis.hpp"

#include <algorithm>
#include <map>

namespace tightbounds {

namespace {

using Ren = std::map<std::string, std::string>;

TermPtr apply_ren(TermPtr t, const Ren& ren) {
  for (const auto& [from, to] : ren) t = substitute(t, from, mk_var(to));
  return t;
}

// Every name occurring in t, bound or free; renaming inside derivations is
// name-sensitive, so fresh names must dodge bound names as well.
void all_names(const TermPtr& t, std::set<std::string>& out) {
  switch (t->kind) {
    case Term::Kind::Var:
      out.insert(t->name);
      return;
    case Term::Kind::Lam:
      out.insert(t->name);
      all_names(t->a, out);
      return;
    case Term::Kind::App:
      all_names(t->a, out);
      all_names(t->b, out);
      return;
    case Term::Kind::ESub:
      out.insert(t->name);
      all_names(t->a, out);
      all_names(t->b, out);
      return;
  }
}

std::set<std::string> ren_targets(const Ren& ren) {
  std::set<std::string> out;
  for (const auto& [from, to] : ren) out.insert(to);
  return out;
}

// Renames the free variable y to the fresh name y2 throughout a derivation.
DerivPtr deriv_rename_free(const DerivPtr& d, const std::string& y, const std::string& y2) {
  switch (d->rule) {
    case Rule::Ax:
      return d->subject->name == y ? deriv_ax(d->system, y2, concl_type(d)) : d;
    case Rule::FunB:
    case Rule::FunR: {
      if (d->subject->name == y) return d;  // y is shadowed below
      auto body = deriv_rename_free(d->premises[0], y, y2);
      return d->rule == Rule::FunB ? deriv_fun_b(d->system, d->subject->name, body)
                                   : deriv_fun_r(d->system, d->subject->name, body);
    }
    case Rule::AppB:
      return deriv_app_b(d->system, deriv_rename_free(d->premises[0], y, y2),
                         deriv_rename_free(d->premises[1], y, y2));
    case Rule::AppHd:
      return deriv_app_hd(deriv_rename_free(d->premises[0], y, y2),
                          substitute(d->subject->b, y, mk_var(y2)));
    case Rule::AppLo:
      if (d->system == System::LSC)
        return deriv_app_result(deriv_rename_free(d->premises[0], y, y2),
                                substitute(d->subject->b, y, mk_var(y2)));
      return deriv_app_lo(d->system, deriv_rename_free(d->premises[0], y, y2),
                          deriv_rename_free(d->premises[1], y, y2));
    case Rule::Many: {
      if (d->premises.empty())
        return deriv_many(d->system, substitute(d->subject, y, mk_var(y2)), {});
      std::vector<DerivPtr> ps;
      for (const auto& p : d->premises) ps.push_back(deriv_rename_free(p, y, y2));
      TermPtr subj = ps[0]->subject;
      return deriv_many(d->system, subj, std::move(ps));
    }
    case Rule::ManyPos: {
      std::vector<DerivPtr> ps;
      for (const auto& p : d->premises) ps.push_back(deriv_rename_free(p, y, y2));
      return deriv_many_pos(std::move(ps));
    }
    case Rule::None_:
      return deriv_none(deriv_rename_free(d->premises[0], y, y2));
    case Rule::ES: {
      auto arg = deriv_rename_free(d->premises[1], y, y2);
      if (d->subject->name == y) return deriv_es(d->premises[0], y, arg);
      return deriv_es(deriv_rename_free(d->premises[0], y, y2), d->subject->name, arg);
    }
  }
  throw std::logic_error("deriv_rename_free: unreachable");
}

// --- type_normal_form ------------------------------------------------------

DerivPtr tnf(System s, const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Var:
      return deriv_ax(s, t->name, ty_neutral());
    case Term::Kind::Lam:
      return deriv_fun_r(s, t->name, tnf(s, t->a));
    case Term::Kind::App: {
      auto fn = tnf(s, t->a);
      if (s == System::HD) return deriv_app_hd(fn, t->b);
      if (s == System::LSC) return deriv_app_result(fn, t->b);
      return deriv_app_lo(s, fn, tnf(s, t->b));
    }
    case Term::Kind::ESub:
      // lh-normal, so the binder is not the head variable: its multiset is
      // empty and the argument is typed by an empty many.
      return deriv_es(tnf(s, t->a), t->name, deriv_many(System::LSC, t->b, {}));
  }
  throw std::logic_error("tnf: unreachable");
}

}  // namespace

DerivPtr type_normal_form(System s, const TermPtr& t) {
  if (!classify(s, t).normal)
    throw NotNormal("type_normal_form: term is not " + system_name(s) + "-normal: " +
                    render_term(t));
  return tnf(s, t);
}

// --- substitution surgery ----------------------------------------------------

namespace {

struct SubstCtx {
  System s;
  std::string x;  // empty once shadowed
  TermPtr u;
  std::set<std::string> fv_u;
  DerivPool* pool;
};

TermPtr subst_term(const SubstCtx& c, const TermPtr& t, const Ren& ren) {
  TermPtr r = apply_ren(t, ren);
  if (!c.x.empty()) r = substitute(r, c.x, c.u);
  return r;
}

DerivPtr pool_pull(DerivPool& pool, const TypePtr& tau) {
  for (auto it = pool.begin(); it != pool.end(); ++it)
    if (type_equal(concl_type(*it), tau)) {
      DerivPtr d = *it;
      pool.erase(it);
      return d;
    }
  throw PoolMismatch("no pool derivation concludes " + render_type(tau));
}

DerivPtr subst_walk(const SubstCtx& c, const DerivPtr& d, Ren ren) {
  switch (d->rule) {
    case Rule::Ax: {
      const std::string& n = d->subject->name;
      if (!c.x.empty() && n == c.x) return pool_pull(*c.pool, concl_type(d));
      auto it = ren.find(n);
      return it == ren.end() ? d : deriv_ax(c.s, it->second, concl_type(d));
    }
    case Rule::FunB:
    case Rule::FunR: {
      std::string y = d->subject->name;
      SubstCtx inner = c;
      if (y == c.x) inner.x.clear();  // shadowed
      ren.erase(y);
      if (!inner.x.empty() && c.fv_u.count(y)) {
        auto used = c.fv_u;
        all_names(d->subject, used);
        used.insert(c.x);
        auto tgt = ren_targets(ren);
        used.insert(tgt.begin(), tgt.end());
        std::string y2 = fresh_name(y, used);
        ren[y] = y2;
        y = y2;
      }
      auto body = subst_walk(inner, d->premises[0], ren);
      return d->rule == Rule::FunB ? deriv_fun_b(c.s, y, body) : deriv_fun_r(c.s, y, body);
    }
    case Rule::AppB:
      return deriv_app_b(c.s, subst_walk(c, d->premises[0], ren),
                         subst_walk(c, d->premises[1], ren));
    case Rule::AppHd:
      return deriv_app_hd(subst_walk(c, d->premises[0], ren), subst_term(c, d->subject->b, ren));
    case Rule::AppLo:
      if (c.s == System::LSC)
        return deriv_app_result(subst_walk(c, d->premises[0], ren),
                                subst_term(c, d->subject->b, ren));
      return deriv_app_lo(c.s, subst_walk(c, d->premises[0], ren),
                          subst_walk(c, d->premises[1], ren));
    case Rule::Many: {
      if (d->premises.empty())
        return deriv_many(c.s, subst_term(c, d->subject, ren), {});
      std::vector<DerivPtr> ps;
      for (const auto& p : d->premises) ps.push_back(subst_walk(c, p, ren));
      TermPtr subj = ps[0]->subject;
      return deriv_many(c.s, subj, std::move(ps));
    }
    case Rule::ManyPos: {
      std::vector<DerivPtr> ps;
      for (const auto& p : d->premises) ps.push_back(subst_walk(c, p, ren));
      return deriv_many_pos(std::move(ps));
    }
    case Rule::None_:
      return deriv_none(subst_walk(c, d->premises[0], ren));
    case Rule::ES: {
      auto arg = subst_walk(c, d->premises[1], ren);
      std::string y = d->subject->name;
      SubstCtx inner = c;
      if (y == c.x) inner.x.clear();
      Ren body_ren = ren;
      body_ren.erase(y);
      if (!inner.x.empty() && c.fv_u.count(y)) {
        auto used = c.fv_u;
        all_names(d->subject, used);
        used.insert(c.x);
        auto tgt = ren_targets(body_ren);
        used.insert(tgt.begin(), tgt.end());
        std::string y2 = fresh_name(y, used);
        body_ren[y] = y2;
        y = y2;
      }
      return deriv_es(subst_walk(inner, d->premises[0], body_ren), y, arg);
    }
  }
  throw std::logic_error("subst_walk: unreachable");
}

}  // namespace

DerivPtr substitute_derivation(System s, const DerivPtr& phi_t, const std::string& x,
                               DerivPool pool, const TermPtr& u_hint) {
  TermPtr u = pool.empty() ? u_hint : pool[0]->subject;
  for (const auto& p : pool)
    if (!alpha_equal(p->subject, u))
      throw PoolMismatch("pool members type different subjects");
  SubstCtx c{s, x, u, u ? free_vars(u) : std::set<std::string>{}, &pool};
  if (!u) c.x.clear();  // nothing known to substitute: x cannot occur
  DerivPtr out = subst_walk(c, phi_t, {});
  if (!pool.empty()) throw PoolMismatch("pool larger than the binder's multiset");
  return out;
}

// --- anti-substitution -------------------------------------------------------

namespace {

struct AntiCtx {
  System s;
  std::string x;
  DerivPool* pool;
};

DerivPtr anti_walk(const AntiCtx& c, const DerivPtr& d, const TermPtr& u, const Ren& ren);

std::vector<DerivPtr> anti_walk_each(const AntiCtx& c, const std::vector<DerivPtr>& ps,
                                     const TermPtr& u, const Ren& ren) {
  std::vector<DerivPtr> out;
  for (const auto& p : ps) out.push_back(anti_walk(c, p, u, ren));
  return out;
}

DerivPtr anti_walk(const AntiCtx& c, const DerivPtr& d, const TermPtr& u, const Ren& ren) {
  if (u->kind == Term::Kind::Var) {
    if (u->name == c.x) {  // a substitution site: cut the q derivation out
      c.pool->push_back(d);
      return deriv_ax(c.s, c.x, concl_type(d));
    }
    if (d->rule != Rule::Ax)
      throw SubjectMismatch("expected an axiom for " + u->name);
    auto it = ren.find(u->name);
    const std::string& want = it == ren.end() ? u->name : it->second;
    if (d->subject->name != want)
      throw SubjectMismatch("axiom names " + d->subject->name + ", expected " + want);
    return d;
  }
  switch (u->kind) {
    case Term::Kind::Lam: {
      if (d->rule != Rule::FunB && d->rule != Rule::FunR)
        throw SubjectMismatch("abstraction typed by " + rule_name(d->rule));
      if (u->name == c.x) return d;  // x shadowed: no sites below
      Ren inner = ren;
      inner[u->name] = d->subject->name;
      auto body = anti_walk(c, d->premises[0], u->a, inner);
      return d->rule == Rule::FunB ? deriv_fun_b(c.s, d->subject->name, body)
                                   : deriv_fun_r(c.s, d->subject->name, body);
    }
    case Term::Kind::App:
      switch (d->rule) {
        case Rule::AppB: {
          auto fn = anti_walk(c, d->premises[0], u->a, ren);
          const DerivPtr& m = d->premises[1];
          auto ps = anti_walk_each(c, m->premises, u->b, ren);
          DerivPtr arg;
          if (m->rule == Rule::ManyPos)
            arg = deriv_many_pos(std::move(ps));
          else if (m->rule == Rule::None_)
            arg = deriv_none(ps[0]);
          else {
            TermPtr subj = ps.empty() ? apply_ren(u->b, ren) : ps[0]->subject;
            arg = deriv_many(c.s, subj, std::move(ps));
          }
          return deriv_app_b(c.s, fn, arg);
        }
        case Rule::AppHd:
          return deriv_app_hd(anti_walk(c, d->premises[0], u->a, ren), apply_ren(u->b, ren));
        case Rule::AppLo:
          if (c.s == System::LSC)
            return deriv_app_result(anti_walk(c, d->premises[0], u->a, ren),
                                    apply_ren(u->b, ren));
          return deriv_app_lo(c.s, anti_walk(c, d->premises[0], u->a, ren),
                              anti_walk(c, d->premises[1], u->b, ren));
        default:
          throw SubjectMismatch("application typed by " + rule_name(d->rule));
      }
    case Term::Kind::ESub: {
      if (d->rule != Rule::ES) throw SubjectMismatch("es subject typed by " + rule_name(d->rule));
      const DerivPtr& m = d->premises[1];
      auto ps = anti_walk_each(c, m->premises, u->b, ren);
      TermPtr subj = ps.empty() ? apply_ren(u->b, ren) : ps[0]->subject;
      auto arg = deriv_many(c.s, subj, std::move(ps));
      if (u->name == c.x) return deriv_es(d->premises[0], d->subject->name, arg);
      Ren inner = ren;
      inner[u->name] = d->subject->name;
      return deriv_es(anti_walk(c, d->premises[0], u->a, inner), d->subject->name, arg);
    }
    default:
      throw SubjectMismatch("unexpected subject shape");
  }
}

}  // namespace

std::pair<DerivPtr, DerivPool> anti_substitute(System s, const DerivPtr& phi, const TermPtr& u,
                                               const std::string& x, const TermPtr& q) {
  DerivPool pool;
  AntiCtx c{s, x, &pool};
  DerivPtr phi_u = anti_walk(c, phi, u, {});
  return {phi_u, std::move(pool)};
}

// --- subject reduction -------------------------------------------------------

namespace {

// Spine navigation (lam-body / app-fn / es-body only), as used by head paths.
DerivPtr get_at_spine(const DerivPtr& d, const Path& path, size_t i) {
  if (i == path.size()) return d;
  return get_at_spine(d->premises[0], path, i + 1);
}

// Grafts psi at the head position, renaming binders of the head context
// that would capture a free variable of psi's subject.
DerivPtr graft_head(const DerivPtr& d, const Path& path, size_t i, const DerivPtr& psi,
                    const std::set<std::string>& fv_t) {
  if (i == path.size()) {
    if (d->rule != Rule::Ax)
      throw SubjectMismatch("hole path does not end at an axiom");
    return psi;
  }
  switch (d->rule) {
    case Rule::FunB:
    case Rule::FunR: {
      DerivPtr body = d->premises[0];
      std::string y = d->subject->name;
      if (fv_t.count(y)) {
        std::set<std::string> used = fv_t;
        all_names(body->subject, used);
        std::string y2 = fresh_name(y, used);
        body = deriv_rename_free(body, y, y2);
        y = y2;
      }
      body = graft_head(body, path, i + 1, psi, fv_t);
      return d->rule == Rule::FunB ? deriv_fun_b(d->system, y, body)
                                   : deriv_fun_r(d->system, y, body);
    }
    case Rule::AppB:
      return deriv_app_b(d->system, graft_head(d->premises[0], path, i + 1, psi, fv_t),
                         d->premises[1]);
    case Rule::AppLo:  // LSC result rule
      return deriv_app_result(graft_head(d->premises[0], path, i + 1, psi, fv_t), d->subject->b);
    case Rule::ES: {
      DerivPtr body = d->premises[0];
      std::string y = d->subject->name;
      if (fv_t.count(y)) {
        std::set<std::string> used = fv_t;
        all_names(body->subject, used);
        std::string y2 = fresh_name(y, used);
        body = deriv_rename_free(body, y, y2);
        y = y2;
      }
      body = graft_head(body, path, i + 1, psi, fv_t);
      return deriv_es(body, y, d->premises[1]);
    }
    default:
      throw SubjectMismatch("hole path crosses rule " + rule_name(d->rule));
  }
}

// Replaces the axiom at the head position by psi (graft direction for
// expansion: cutting content out, so no renaming is needed).
DerivPtr replace_at_spine(const DerivPtr& d, const Path& path, size_t i, const DerivPtr& repl) {
  if (i == path.size()) return repl;
  DerivPtr body = replace_at_spine(d->premises[0], path, i + 1, repl);
  switch (d->rule) {
    case Rule::FunB:
      return deriv_fun_b(d->system, d->subject->name, body);
    case Rule::FunR:
      return deriv_fun_r(d->system, d->subject->name, body);
    case Rule::AppB:
      return deriv_app_b(d->system, body, d->premises[1]);
    case Rule::AppLo:
      return deriv_app_result(body, d->subject->b);
    case Rule::ES:
      return deriv_es(body, d->subject->name, d->premises[1]);
    default:
      throw SubjectMismatch("hole path crosses rule " + rule_name(d->rule));
  }
}

// Beta base case shared by HD/LO/MX reduce: node = app_b over fun_b.
DerivPtr reduce_beta(const DerivPtr& node) {
  if (node->rule != Rule::AppB || node->premises[0]->rule != Rule::FunB)
    throw NotTypedAtRedex("redex is not typed by app_b over fun_b");
  const DerivPtr& fb = node->premises[0];
  const DerivPtr& many = node->premises[1];
  DerivPool pool = many->premises;
  if (many->rule == Rule::None_)
    throw NotTypedAtRedex("non-erasing redex with a none argument");
  return substitute_derivation(node->system, fb->premises[0], fb->subject->name,
                               std::move(pool), many->subject);
}

DerivPtr reduce_base(const DerivPtr& node, const StepRecord& st) {
  switch (st.kind) {
    case StepKind::Beta:
    case StepKind::MxNonErasing: {
      // With an empty pool the binder may still occur in untyped regions;
      // substitute_derivation only rewrites typed structure, so fall back
      // to rewriting those subjects from the step's result when needed.
      return reduce_beta(node);
    }
    case StepKind::MxErasing: {
      if (node->rule != Rule::AppB || node->premises[0]->rule != Rule::FunB)
        throw NotTypedAtRedex("erasing redex is not typed by app_b over fun_b");
      return node->premises[0]->premises[0];
    }
    case StepKind::LscMultiplicative: {
      if (node->rule != Rule::AppB)
        throw NotTypedAtRedex("multiplicative redex is not typed by app_b");
      const DerivPtr& many_v = node->premises[1];
      auto fv_v = free_vars(many_v->subject);
      // Collect the substitution-context chain down to the fun_b.
      std::vector<std::pair<std::string, DerivPtr>> chain;  // (binder, many)
      DerivPtr cur = node->premises[0];
      while (cur->rule == Rule::ES) {
        std::string y = cur->subject->name;
        DerivPtr body = cur->premises[0];
        if (fv_v.count(y)) {
          std::set<std::string> used = fv_v;
          all_names(body->subject, used);
          all_names(cur->premises[1]->subject, used);
          std::string y2 = fresh_name(y, used);
          body = deriv_rename_free(body, y, y2);
          y = y2;
        }
        chain.emplace_back(y, cur->premises[1]);
        cur = body;
      }
      if (cur->rule != Rule::FunB)
        throw NotTypedAtRedex("multiplicative redex does not close over fun_b");
      DerivPtr res = deriv_es(cur->premises[0], cur->subject->name, many_v);
      for (auto it = chain.rbegin(); it != chain.rend(); ++it)
        res = deriv_es(res, it->first, it->second);
      return res;
    }
    case StepKind::LscExponential: {
      if (node->rule != Rule::ES || !st.hole_path)
        throw NotTypedAtRedex("exponential redex is not typed by es");
      DerivPtr hole = get_at_spine(node->premises[0], *st.hole_path, 0);
      if (hole->rule != Rule::Ax || hole->subject->name != node->subject->name)
        throw NotTypedAtRedex("hole path does not reach an axiom for the binder");
      // Move one matching pool member from the many into the body.
      std::vector<DerivPtr> rest = node->premises[1]->premises;
      DerivPtr psi;
      for (auto it = rest.begin(); it != rest.end(); ++it)
        if (type_equal(concl_type(*it), concl_type(hole))) {
          psi = *it;
          rest.erase(it);
          break;
        }
      if (!psi) throw NotTypedAtRedex("no many premise matches the head axiom's type");
      auto fv_t = free_vars(psi->subject);
      DerivPtr body = graft_head(node->premises[0], *st.hole_path, 0, psi, fv_t);
      DerivPtr many = deriv_many(System::LSC, node->premises[1]->subject, std::move(rest));
      return deriv_es(body, node->subject->name, many);
    }
  }
  throw std::logic_error("reduce_base: unreachable");
}

// Walks the redex path; `other` is the corresponding subterm of the
// step's result (reduce) or source (expand), used to rewrite untyped
// regions and to rebuild redexes on expansion.
template <typename Base>
DerivPtr transform_at(const DerivPtr& d, const Path& path, size_t i, const TermPtr& other,
                      const Base& base) {
  if (i == path.size()) return base(d, other);
  Dir dir = path[i];
  switch (dir) {
    case Dir::LamBody: {
      if (d->rule != Rule::FunB && d->rule != Rule::FunR)
        throw SubjectMismatch("path enters a lambda not typed by fun_b/fun_r");
      auto body = transform_at(d->premises[0], path, i + 1, other->a, base);
      return d->rule == Rule::FunB ? deriv_fun_b(d->system, d->subject->name, body)
                                   : deriv_fun_r(d->system, d->subject->name, body);
    }
    case Dir::AppFn:
      switch (d->rule) {
        case Rule::AppB:
          return deriv_app_b(d->system, transform_at(d->premises[0], path, i + 1, other->a, base),
                             d->premises[1]);
        case Rule::AppHd:
          return deriv_app_hd(transform_at(d->premises[0], path, i + 1, other->a, base),
                              d->subject->b);
        case Rule::AppLo:
          if (d->system == System::LSC)
            return deriv_app_result(transform_at(d->premises[0], path, i + 1, other->a, base),
                                    d->subject->b);
          return deriv_app_lo(d->system,
                              transform_at(d->premises[0], path, i + 1, other->a, base),
                              d->premises[1]);
        default:
          throw SubjectMismatch("path enters an application typed by " + rule_name(d->rule));
      }
    case Dir::AppArg:
    case Dir::EsArg: {
      DerivPtr fn_or_body;
      DerivPtr marg;
      if (dir == Dir::AppArg) {
        if (d->rule == Rule::AppHd || (d->rule == Rule::AppLo && d->system == System::LSC)) {
          // untyped argument: rewrite the stored term to the other side's
          DerivPtr fn = d->premises[0];
          return d->rule == Rule::AppHd ? deriv_app_hd(fn, other->b)
                                        : deriv_app_result(fn, other->b);
        }
        if (d->rule == Rule::AppLo)
          return deriv_app_lo(d->system, d->premises[0],
                              transform_at(d->premises[1], path, i + 1, other->b, base));
        if (d->rule != Rule::AppB)
          throw SubjectMismatch("path enters an application typed by " + rule_name(d->rule));
        marg = d->premises[1];
      } else {
        if (d->rule != Rule::ES)
          throw SubjectMismatch("path enters a substitution not typed by es");
        marg = d->premises[1];
      }
      DerivPtr new_arg;
      if (marg->rule == Rule::None_) {
        new_arg = deriv_none(transform_at(marg->premises[0], path, i + 1, other->b, base));
      } else if (marg->premises.empty()) {
        new_arg = deriv_many(d->system, other->b, {});
      } else {
        std::vector<DerivPtr> ps;
        for (const auto& p : marg->premises)
          ps.push_back(transform_at(p, path, i + 1, other->b, base));
        TermPtr subj = ps[0]->subject;
        new_arg = marg->rule == Rule::ManyPos ? deriv_many_pos(std::move(ps))
                                              : deriv_many(d->system, subj, std::move(ps));
      }
      if (dir == Dir::AppArg) return deriv_app_b(d->system, d->premises[0], new_arg);
      return deriv_es(d->premises[0], d->subject->name, new_arg);
    }
    case Dir::EsBody: {
      if (d->rule != Rule::ES)
        throw SubjectMismatch("path enters a substitution not typed by es");
      return deriv_es(transform_at(d->premises[0], path, i + 1, other->a, base),
                      d->subject->name, d->premises[1]);
    }
  }
  throw std::logic_error("transform_at: unreachable");
}

}  // namespace

DerivPtr subject_reduce(const DerivPtr& phi, const StepRecord& step) {
  auto base = [&](const DerivPtr& node, const TermPtr&) { return reduce_base(node, step); };
  return transform_at(phi, step.redex_path, 0, step.result, base);
}

namespace {

DerivPtr expand_base(const DerivPtr& node, const TermPtr& before, const StepRecord& st) {
  System s = node->system;
  switch (st.kind) {
    case StepKind::Beta:
    case StepKind::MxNonErasing: {
      const TermPtr& lam = before->a;
      auto [phi_u, pool] = anti_substitute(s, node, lam->a, lam->name, before->b);
      DerivPtr fb = deriv_fun_b(s, lam->name, phi_u);
      DerivPtr many;
      if (s == System::MX)
        many = deriv_many_pos(std::move(pool));
      else
        many = deriv_many(s, pool.empty() ? before->b : pool[0]->subject, std::move(pool));
      return deriv_app_b(s, fb, many);
    }
    case StepKind::MxErasing: {
      const TermPtr& lam = before->a;
      DerivPtr none = deriv_none(type_normal_form(System::MX, before->b));
      DerivPtr fb = deriv_fun_b(System::MX, lam->name, node);
      return deriv_app_b(System::MX, fb, none);
    }
    case StepKind::LscMultiplicative: {
      int k = 0;
      for (const Term* c = before->a.get(); c->kind == Term::Kind::ESub; c = c->a.get()) ++k;
      std::vector<std::pair<std::string, DerivPtr>> chain;
      DerivPtr cur = node;
      for (int j = 0; j < k; ++j) {
        if (cur->rule != Rule::ES)
          throw SubjectMismatch("result lacks the substitution-context chain");
        chain.emplace_back(cur->subject->name, cur->premises[1]);
        cur = cur->premises[0];
      }
      if (cur->rule != Rule::ES)
        throw SubjectMismatch("result lacks the created substitution");
      DerivPtr fb = deriv_fun_b(System::LSC, cur->subject->name, cur->premises[0]);
      DerivPtr left = fb;
      for (auto it = chain.rbegin(); it != chain.rend(); ++it)
        left = deriv_es(left, it->first, it->second);
      return deriv_app_b(System::LSC, left, cur->premises[1]);
    }
    case StepKind::LscExponential: {
      if (node->rule != Rule::ES || !st.hole_path)
        throw SubjectMismatch("exponential expansion needs an es node and a hole path");
      DerivPtr psi = get_at_spine(node->premises[0], *st.hole_path, 0);
      DerivPtr ax = deriv_ax(System::LSC, node->subject->name, concl_type(psi));
      DerivPtr body = replace_at_spine(node->premises[0], *st.hole_path, 0, ax);
      std::vector<DerivPtr> ps = node->premises[1]->premises;
      ps.push_back(psi);
      DerivPtr many = deriv_many(System::LSC, psi->subject, std::move(ps));
      return deriv_es(body, node->subject->name, many);
    }
  }
  throw std::logic_error("expand_base: unreachable");
}

}  // namespace

DerivPtr subject_expand(const DerivPtr& phi_p, const StepRecord& step, const TermPtr& source) {
  auto base = [&](const DerivPtr& node, const TermPtr& before) {
    return expand_base(node, before, step);
  };
  return transform_at(phi_p, step.redex_path, 0, source, base);
}

// --- pipeline -----------------------------------------------------------------

std::pair<Trace, DerivPtr> synthesize_tight(System s, const TermPtr& t, int fuel) {
  Trace tr = evaluate(s, t, fuel);
  if (!tr.reached_normal)
    throw FuelExhausted("no normal form within " + std::to_string(fuel) + " steps: " +
                        render_term(t));
  DerivPtr phi = type_normal_form(s, tr.final);
  for (size_t i = tr.steps.size(); i-- > 0;) {
    const TermPtr& src = i == 0 ? tr.initial : tr.steps[i - 1].result;
    phi = subject_expand(phi, tr.steps[i], src);
  }
  return {std::move(tr), std::move(phi)};
}

// --- minimal traditional shrinking typings --------------------------------------

namespace {

struct MtsBuilder {
  int next_atom = 0;

  TypePtr fresh() { return ty_atom(next_atom++); }

  // lo-neutral t driven to a requested type.
  DerivPtr neutral(const TermPtr& t, const TypePtr& tau) {
    if (t->kind == Term::Kind::Var) return deriv_ax(System::LO, t->name, tau);
    // t = u v with u lo-neutral, v lo-normal
    auto [phi_v, sigma] = normal(t->b);
    MultiSet dom;
    dom.insert(sigma);
    DerivPtr phi_u = neutral(t->a, ty_arrow(dom, tau));
    DerivPtr many = deriv_many(System::LO, t->b, {phi_v});
    return deriv_app_b(System::LO, phi_u, many);
  }

  std::pair<DerivPtr, TypePtr> normal(const TermPtr& t) {
    if (t->kind == Term::Kind::Lam) {
      auto [phi_b, sigma] = normal(t->a);
      DerivPtr fb = deriv_fun_b(System::LO, t->name, phi_b);
      return {fb, concl_type(fb)};
    }
    TypePtr tau = fresh();
    return {neutral(t, tau), tau};
  }
};

int max_atom(const TypePtr& t) {
  switch (t->kind) {
    case Type::Kind::Atom:
      return t->atom;
    case Type::Kind::Arrow: {
      int m = max_atom(t->codomain);
      for (const auto& e : t->domain.elems()) m = std::max(m, max_atom(e));
      return m;
    }
    default:
      return -1;
  }
}

}  // namespace

DerivPtr mts_type_normal_form(const TermPtr& t, const TypePtr& tau) {
  Classification c = classify(System::LO, t);
  if (!c.normal) throw NotNormal("mts_type_normal_form: term is not lo-normal");
  MtsBuilder b;
  if (c.neutral) {
    TypePtr goal = tau;
    if (goal) {
      TypeOrMulti empty_multi = MultiSet{};
      bool tight_free = !occurs(empty_multi, Polarity::Pos, goal);
      if (is_tight(goal) || !tight_free)
        throw SideConditionViolation("requested type must be traditional and shrinking", "");
      b.next_atom = max_atom(goal) + 1;
    } else {
      goal = b.fresh();
    }
    return b.neutral(t, goal);
  }
  return b.normal(t).first;
}

// --- head isomorphism ------------------------------------------------------------

namespace {

DerivPtr iso_l(const DerivPtr& d) {
  switch (d->rule) {
    case Rule::Ax:
      return deriv_ax(System::LSC, d->subject->name, concl_type(d));
    case Rule::FunB:
      return deriv_fun_b(System::LSC, d->subject->name, iso_l(d->premises[0]));
    case Rule::FunR:
      return deriv_fun_r(System::LSC, d->subject->name, iso_l(d->premises[0]));
    case Rule::AppB:
      return deriv_app_b(System::LSC, iso_l(d->premises[0]), iso_l(d->premises[1]));
    case Rule::AppHd:
      return deriv_app_result(iso_l(d->premises[0]), d->subject->b);
    case Rule::Many: {
      std::vector<DerivPtr> ps;
      for (const auto& p : d->premises) ps.push_back(iso_l(p));
      return deriv_many(System::LSC, d->subject, std::move(ps));
    }
    default:
      throw RuleMismatch("rule " + rule_name(d->rule) + " has no hd image", "");
  }
}

DerivPtr iso_n(const DerivPtr& d) {
  if (!is_pure(d->subject))
    throw NonPureTerm("the inverse transport requires a pure subject");
  switch (d->rule) {
    case Rule::Ax:
      return deriv_ax(System::HD, d->subject->name, concl_type(d));
    case Rule::FunB:
      return deriv_fun_b(System::HD, d->subject->name, iso_n(d->premises[0]));
    case Rule::FunR:
      return deriv_fun_r(System::HD, d->subject->name, iso_n(d->premises[0]));
    case Rule::AppB:
      return deriv_app_b(System::HD, iso_n(d->premises[0]), iso_n(d->premises[1]));
    case Rule::AppLo:
      return deriv_app_hd(iso_n(d->premises[0]), d->subject->b);
    case Rule::Many: {
      std::vector<DerivPtr> ps;
      for (const auto& p : d->premises) ps.push_back(iso_n(p));
      return deriv_many(System::HD, d->subject, std::move(ps));
    }
    default:
      throw RuleMismatch("rule " + rule_name(d->rule) + " has no lsc preimage", "");
  }
}

}  // namespace

DerivPtr head_iso(const DerivPtr& phi) {
  if (phi->system == System::HD) return iso_l(phi);
  if (phi->system == System::LSC) return iso_n(phi);
  throw RuleMismatch("head isomorphism only connects hd and lsc", "");
}

// --- unfolding --------------------------------------------------------------------

namespace {

DerivPtr fold_es(const DerivPtr& d) {
  switch (d->rule) {
    case Rule::Ax:
      return d;
    case Rule::FunB:
      return deriv_fun_b(System::LSC, d->subject->name, fold_es(d->premises[0]));
    case Rule::FunR:
      return deriv_fun_r(System::LSC, d->subject->name, fold_es(d->premises[0]));
    case Rule::AppB:
      return deriv_app_b(System::LSC, fold_es(d->premises[0]), fold_es(d->premises[1]));
    case Rule::AppLo:
      return deriv_app_result(fold_es(d->premises[0]), unfold(d->subject->b));
    case Rule::Many: {
      if (d->premises.empty()) return deriv_many(System::LSC, unfold(d->subject), {});
      std::vector<DerivPtr> ps;
      for (const auto& p : d->premises) ps.push_back(fold_es(p));
      TermPtr subj = ps[0]->subject;
      return deriv_many(System::LSC, subj, std::move(ps));
    }
    case Rule::ES: {
      DerivPtr body = fold_es(d->premises[0]);
      DerivPtr many = fold_es(d->premises[1]);
      return substitute_derivation(System::LSC, body, d->subject->name, many->premises,
                                   many->subject);
    }
    default:
      throw RuleMismatch("rule " + rule_name(d->rule) + " cannot appear in lsc", "");
  }
}

}  // namespace

DerivPtr check_unfolding(const DerivPtr& phi_lsc) {
  if (phi_lsc->system != System::LSC)
    throw RuleMismatch("check_unfolding expects an lsc derivation", "");
  return iso_n(fold_es(phi_lsc));
}

}  // namespace tightbounds
