#include "tightbounds/derivation.hpp"

#include <sstream>

namespace tightbounds {

std::string rule_name(Rule r) {
  switch (r) {
    case Rule::Ax: return "ax";
    case Rule::FunB: return "fun_b";
    case Rule::FunR: return "fun_r";
    case Rule::AppB: return "app_b";
    case Rule::AppHd: return "app_hd";
    case Rule::AppLo: return "app_lo";
    case Rule::Many: return "many";
    case Rule::ManyPos: return "many_pos";
    case Rule::None_: return "none";
    case Rule::ES: return "es";
  }
  return "?";
}

std::optional<Rule> rule_from_name(const std::string& name) {
  static const std::map<std::string, Rule> table = {
      {"ax", Rule::Ax},         {"fun_b", Rule::FunB}, {"fun_r", Rule::FunR},
      {"app_b", Rule::AppB},    {"app_hd", Rule::AppHd}, {"app_lo", Rule::AppLo},
      {"many", Rule::Many},     {"many_pos", Rule::ManyPos}, {"none", Rule::None_},
      {"es", Rule::ES}};
  auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

DerivationError::DerivationError(const std::string& what, std::string path)
    : std::runtime_error(what + " [at node " + (path.empty() ? "root" : path) + "]"),
      node_path(std::move(path)) {}

const TypePtr& concl_type(const DerivPtr& d) {
  if (auto* t = std::get_if<TypePtr>(&d->concl)) return *t;
  throw std::logic_error("conclusion is a multiset, not a type");
}

const MultiSet& concl_multiset(const DerivPtr& d) {
  if (auto* m = std::get_if<MultiSet>(&d->concl)) return *m;
  throw std::logic_error("conclusion is a type, not a multiset");
}

namespace {

bool is_many_family(Rule r) {
  return r == Rule::Many || r == Rule::ManyPos || r == Rule::None_;
}

bool rule_admissible(System s, Rule r) {
  switch (s) {
    case System::HD:
      return r == Rule::Ax || r == Rule::FunB || r == Rule::FunR || r == Rule::AppB ||
             r == Rule::AppHd || r == Rule::Many;
    case System::LO:
      return r == Rule::Ax || r == Rule::FunB || r == Rule::FunR || r == Rule::AppB ||
             r == Rule::AppLo || r == Rule::Many;
    case System::MX:
      return r == Rule::Ax || r == Rule::FunB || r == Rule::FunR || r == Rule::AppB ||
             r == Rule::AppLo || r == Rule::ManyPos || r == Rule::None_;
    case System::LSC:
      return r == Rule::Ax || r == Rule::FunB || r == Rule::FunR || r == Rule::AppB ||
             r == Rule::AppLo || r == Rule::Many || r == Rule::ES;
  }
  return false;
}

bool tom_equal(const TypeOrMulti& a, const TypeOrMulti& b) {
  if (auto* ta = std::get_if<TypePtr>(&a)) {
    auto* tb = std::get_if<TypePtr>(&b);
    return tb && type_equal(*ta, *tb);
  }
  auto* mb = std::get_if<MultiSet>(&b);
  return mb && std::get<MultiSet>(a) == *mb;
}

std::string tom_render(const TypeOrMulti& c) {
  if (auto* t = std::get_if<TypePtr>(&c)) return render_type(*t);
  return render_multiset(std::get<MultiSet>(c));
}

struct Inferred {
  TypingContext ctx;
  std::optional<TypeOrMulti> concl;  // nullopt only for Ax (conclusion is an input)
  Indices idx;
};

const TypePtr& premise_type(const Derivation& d, size_t i, const std::string& path) {
  if (auto* t = std::get_if<TypePtr>(&d.premises[i]->concl)) return *t;
  throw RuleMismatch("premise " + std::to_string(i) + " must conclude a type", path);
}

void require_subject(const TermPtr& expected, const DerivPtr& premise, size_t i,
                     const std::string& path) {
  if (!alpha_equal(expected, premise->subject))
    throw RuleMismatch("premise " + std::to_string(i) + " types the wrong subterm", path);
}

void require_premises(const Derivation& d, size_t n, const std::string& path) {
  if (d.premises.size() != n)
    throw RuleMismatch(rule_name(d.rule) + " expects " + std::to_string(n) + " premise(s), got " +
                           std::to_string(d.premises.size()),
                       path);
}

// Re-derives the node's judgement from its premises (whose stored judgements
// are trusted here; check() validates them recursively first).
Inferred infer_node(const Derivation& d, const std::string& path) {
  const System s = d.system;
  const bool lsc = s == System::LSC;
  if (!rule_admissible(s, d.rule))
    throw RuleMismatch("rule " + rule_name(d.rule) + " is not part of the " + system_name(s) +
                           " system",
                       path);
  for (const auto& p : d.premises)
    if (p->system != s) throw RuleMismatch("premise belongs to a different system", path);

  Inferred out;
  switch (d.rule) {
    case Rule::Ax: {
      require_premises(d, 0, path);
      if (d.subject->kind != Term::Kind::Var)
        throw RuleMismatch("ax subject must be a variable", path);
      auto* t = std::get_if<TypePtr>(&d.concl);
      if (!t) throw RuleMismatch("ax must conclude a type", path);
      MultiSet m;
      m.insert(*t);
      out.ctx.set(d.subject->name, std::move(m));
      out.idx = lsc ? Indices{0, 0, 1} : Indices{0, 0, 0};
      return out;
    }

    case Rule::FunB:
    case Rule::FunR: {
      require_premises(d, 1, path);
      if (d.subject->kind != Term::Kind::Lam)
        throw RuleMismatch(rule_name(d.rule) + " subject must be an abstraction", path);
      const std::string& x = d.subject->name;
      require_subject(d.subject->a, d.premises[0], 0, path);
      const TypePtr& tau = premise_type(d, 0, path);
      const MultiSet& m = d.premises[0]->ctx.get(x);
      out.ctx = d.premises[0]->ctx.restricted(x);
      const Indices& p = d.premises[0]->idx;
      if (d.rule == Rule::FunB) {
        out.concl = ty_arrow(m, tau);
        out.idx = lsc ? Indices{p.b + 1, p.e + m.size(), p.r - m.size()}
                      : Indices{p.b + 1, 0, p.r};
      } else {
        if (!is_tight(tau))
          throw SideConditionViolation("fun_r premise type must be tight", path);
        if (!is_tight(m))
          throw SideConditionViolation("fun_r requires a tight multiset for the binder", path);
        out.concl = ty_abs();
        out.idx = Indices{p.b, p.e, p.r + 1};
      }
      return out;
    }

    case Rule::AppB: {
      require_premises(d, 2, path);
      if (d.subject->kind != Term::Kind::App)
        throw RuleMismatch("app_b subject must be an application", path);
      require_subject(d.subject->a, d.premises[0], 0, path);
      require_subject(d.subject->b, d.premises[1], 1, path);
      const TypePtr& fn = premise_type(d, 0, path);
      if (fn->kind != Type::Kind::Arrow)
        throw SideConditionViolation("app_b left premise must conclude an arrow type", path);
      if (!is_many_family(d.premises[1]->rule))
        throw RuleMismatch("app_b argument premise must be a many-family node", path);
      auto* m = std::get_if<MultiSet>(&d.premises[1]->concl);
      if (!m) throw RuleMismatch("app_b argument premise must conclude a multiset", path);
      if (!(*m == fn->domain))
        throw SideConditionViolation("argument multiset differs from the arrow domain", path);
      out.ctx = d.premises[0]->ctx.united(d.premises[1]->ctx);
      out.concl = fn->codomain;
      const Indices &p = d.premises[0]->idx, &q = d.premises[1]->idx;
      out.idx = Indices{p.b + q.b + 1, p.e + q.e, p.r + q.r};
      return out;
    }

    case Rule::AppHd:
    case Rule::AppLo: {
      if (d.subject->kind != Term::Kind::App)
        throw RuleMismatch(rule_name(d.rule) + " subject must be an application", path);
      // LSC reuses the AppLo tag for the result rule, which — like app_hd —
      // leaves the argument untyped.
      const bool untyped_arg = d.rule == Rule::AppHd || lsc;
      require_premises(d, untyped_arg ? 1 : 2, path);
      require_subject(d.subject->a, d.premises[0], 0, path);
      const TypePtr& fn = premise_type(d, 0, path);
      if (fn->kind != Type::Kind::Neutral)
        throw SideConditionViolation(rule_name(d.rule) + " left premise must conclude N", path);
      out.concl = ty_neutral();
      const Indices& p = d.premises[0]->idx;
      if (untyped_arg) {
        out.ctx = d.premises[0]->ctx;
        out.idx = Indices{p.b, p.e, p.r + 1};
      } else {
        require_subject(d.subject->b, d.premises[1], 1, path);
        const TypePtr& arg = premise_type(d, 1, path);
        if (!is_tight(arg))
          throw SideConditionViolation("app_lo argument premise must conclude a tight type", path);
        out.ctx = d.premises[0]->ctx.united(d.premises[1]->ctx);
        const Indices& q = d.premises[1]->idx;
        out.idx = Indices{p.b + q.b, 0, p.r + q.r + 1};
      }
      return out;
    }

    case Rule::Many:
    case Rule::ManyPos: {
      if (d.rule == Rule::ManyPos && d.premises.empty())
        throw SideConditionViolation("many_pos requires at least one premise", path);
      MultiSet m;
      Indices sum{0, 0, 0};
      for (size_t i = 0; i < d.premises.size(); ++i) {
        require_subject(d.subject, d.premises[i], i, path);
        m.insert(premise_type(d, i, path));
        out.ctx = out.ctx.united(d.premises[i]->ctx);
        sum.b += d.premises[i]->idx.b;
        sum.e += d.premises[i]->idx.e;
        sum.r += d.premises[i]->idx.r;
      }
      out.concl = std::move(m);
      out.idx = sum;
      return out;
    }

    case Rule::None_: {
      require_premises(d, 1, path);
      require_subject(d.subject, d.premises[0], 0, path);
      premise_type(d, 0, path);
      out.ctx = d.premises[0]->ctx;
      out.concl = MultiSet{};
      out.idx = d.premises[0]->idx;
      return out;
    }

    case Rule::ES: {
      require_premises(d, 2, path);
      if (d.subject->kind != Term::Kind::ESub)
        throw RuleMismatch("es subject must carry an explicit substitution", path);
      const std::string& x = d.subject->name;
      require_subject(d.subject->a, d.premises[0], 0, path);
      require_subject(d.subject->b, d.premises[1], 1, path);
      const TypePtr& tau = premise_type(d, 0, path);
      const MultiSet& m = d.premises[0]->ctx.get(x);
      if (d.premises[1]->rule != Rule::Many)
        throw RuleMismatch("es argument premise must be a many node", path);
      auto* argm = std::get_if<MultiSet>(&d.premises[1]->concl);
      if (!argm || !(*argm == m))
        throw SideConditionViolation("es argument multiset differs from the binder's multiset",
                                     path);
      out.ctx = d.premises[0]->ctx.restricted(x).united(d.premises[1]->ctx);
      out.concl = tau;
      const Indices &p = d.premises[0]->idx, &q = d.premises[1]->idx;
      out.idx = Indices{p.b + q.b, p.e + q.e + m.size(), p.r + q.r - m.size()};
      return out;
    }
  }
  throw std::logic_error("infer_node: unreachable");
}

void check_node(const Derivation& d, const std::string& path) {
  Inferred want = infer_node(d, path);
  if (d.idx.b < 0 || d.idx.e < 0 || d.idx.r < 0 || want.idx.r < 0)
    throw NegativeIndex("index arithmetic drove an index below zero", path);
  if (d.system != System::LSC && d.idx.e != 0)
    throw IndexMismatch("the e index is reserved for the substitution calculus", path);
  if (want.concl && !tom_equal(*want.concl, d.concl))
    throw RuleMismatch("stored conclusion " + tom_render(d.concl) + " differs from the rule's " +
                           tom_render(*want.concl),
                       path);
  if (!(want.ctx == d.ctx))
    throw ContextMismatch("stored context {" + render_context(d.ctx) +
                              "} differs from the recombined premises {" +
                              render_context(want.ctx) + "}",
                          path);
  if (want.idx != d.idx) {
    std::ostringstream os;
    os << "stored indices (" << d.idx.b << "," << (d.system == System::LSC ? std::to_string(d.idx.e) + "," : "")
       << d.idx.r << ") differ from the rule arithmetic (" << want.idx.b << ","
       << (d.system == System::LSC ? std::to_string(want.idx.e) + "," : "") << want.idx.r << ")";
    throw IndexMismatch(os.str(), path);
  }
  if (d.system == System::MX) {
    // x ∈ fv(t) iff Γ(x) ≠ [] holds at every node of the maximal system.
    auto fvs = free_vars(d.subject);
    auto dom = d.ctx.domain();
    if (std::set<std::string>(dom.begin(), dom.end()) != fvs)
      throw ContextMismatch("context domain differs from the subject's free variables", path);
  }
}

void check_rec(const DerivPtr& d, const std::string& path) {
  for (size_t i = 0; i < d->premises.size(); ++i)
    check_rec(d->premises[i], path.empty() ? std::to_string(i) : path + "." + std::to_string(i));
  check_node(*d, path);
}

}  // namespace

Indices check(const DerivPtr& d) {
  check_rec(d, "");
  return d->idx;
}

namespace {
DerivPtr infer_indices_rec(const DerivPtr& d, const std::string& path) {
  Derivation node = *d;
  node.premises.clear();
  for (size_t i = 0; i < d->premises.size(); ++i)
    node.premises.push_back(infer_indices_rec(
        d->premises[i], path.empty() ? std::to_string(i) : path + "." + std::to_string(i)));
  Inferred want = infer_node(node, path);
  if (want.idx.r < 0) throw NegativeIndex("index arithmetic drove r below zero", path);
  node.idx = want.idx;
  return std::make_shared<const Derivation>(std::move(node));
}
}  // namespace

DerivPtr infer_indices(const DerivPtr& d) { return infer_indices_rec(d, ""); }

int deriv_size(const DerivPtr& d) {
  bool counted;
  switch (d->rule) {
    case Rule::Ax:
      counted = d->system == System::LSC;
      break;
    case Rule::Many:
      counted = false;
      break;
    case Rule::ManyPos:
    case Rule::None_:
      counted = false;  // MX-only rules, excluded there
      break;
    default:
      counted = true;
  }
  int n = counted ? 1 : 0;
  for (const auto& p : d->premises) n += deriv_size(p);
  return n;
}

int count_es_nodes(const DerivPtr& d) {
  int n = d->rule == Rule::ES ? 1 : 0;
  for (const auto& p : d->premises) n += count_es_nodes(p);
  return n;
}

namespace {

bool has_tight_constant(const TypePtr& t);

bool has_tight_constant(const MultiSet& m) {
  for (const auto& t : m.elems())
    if (has_tight_constant(t)) return true;
  return false;
}

bool has_tight_constant(const TypePtr& t) {
  switch (t->kind) {
    case Type::Kind::Neutral:
    case Type::Kind::Abs:
      return true;
    case Type::Kind::Atom:
      return false;
    case Type::Kind::Arrow:
      return has_tight_constant(t->domain) || has_tight_constant(t->codomain);
  }
  return false;
}

bool scan_traditional(const DerivPtr& d) {
  if (auto* t = std::get_if<TypePtr>(&d->concl)) {
    if (has_tight_constant(*t)) return false;
  } else if (has_tight_constant(std::get<MultiSet>(d->concl))) {
    return false;
  }
  for (const auto& [x, m] : d->ctx.entries())
    if (has_tight_constant(m)) return false;
  for (const auto& p : d->premises)
    if (!scan_traditional(p)) return false;
  return true;
}

bool scan_garbage_tight(const DerivPtr& d) {
  if (d->rule == Rule::None_ && !is_tight(premise_type(*d, 0, ""))) return false;
  for (const auto& p : d->premises)
    if (!scan_garbage_tight(p)) return false;
  return true;
}

}  // namespace

DerivFlags classify_derivation(const DerivPtr& d) {
  DerivFlags f;
  f.garbage_tight = scan_garbage_tight(d);
  f.traditional = scan_traditional(d);
  TypeOrMulti empty_multi = MultiSet{};
  if (auto* t = std::get_if<TypePtr>(&d->concl)) {
    f.tight = is_tight(*t) && is_tight(d->ctx);
    f.shrinking = !occurs(empty_multi, Polarity::Neg, d->ctx) &&
                  !occurs(empty_multi, Polarity::Pos, *t);
  } else {
    const MultiSet& m = std::get<MultiSet>(d->concl);
    f.tight = is_tight(m) && is_tight(d->ctx);
    f.shrinking = !occurs(empty_multi, Polarity::Neg, d->ctx) &&
                  !occurs(empty_multi, Polarity::Pos, m);
  }
  f.mx_tight = f.tight && f.garbage_tight;
  return f;
}

// --- builders -------------------------------------------------------------

namespace {
DerivPtr finish(Derivation d) {
  Inferred want = infer_node(d, "");
  d.ctx = std::move(want.ctx);
  if (want.concl) d.concl = std::move(*want.concl);
  d.idx = want.idx;
  if (d.idx.r < 0) throw NegativeIndex("index arithmetic drove r below zero", "");
  auto out = std::make_shared<const Derivation>(std::move(d));
  check_node(*out, "");
  return out;
}
}  // namespace

DerivPtr deriv_ax(System s, const std::string& x, const TypePtr& tau) {
  Derivation d;
  d.system = s;
  d.rule = Rule::Ax;
  d.subject = mk_var(x);
  d.concl = tau;
  return finish(std::move(d));
}

DerivPtr deriv_fun_b(System s, const std::string& binder, const DerivPtr& body) {
  Derivation d;
  d.system = s;
  d.rule = Rule::FunB;
  d.subject = mk_lam(binder, body->subject);
  d.premises = {body};
  return finish(std::move(d));
}

DerivPtr deriv_fun_r(System s, const std::string& binder, const DerivPtr& body) {
  Derivation d;
  d.system = s;
  d.rule = Rule::FunR;
  d.subject = mk_lam(binder, body->subject);
  d.premises = {body};
  return finish(std::move(d));
}

DerivPtr deriv_app_b(System s, const DerivPtr& fn, const DerivPtr& arg_many) {
  Derivation d;
  d.system = s;
  d.rule = Rule::AppB;
  d.subject = mk_app(fn->subject, arg_many->subject);
  d.premises = {fn, arg_many};
  return finish(std::move(d));
}

DerivPtr deriv_app_hd(const DerivPtr& fn, const TermPtr& arg) {
  Derivation d;
  d.system = System::HD;
  d.rule = Rule::AppHd;
  d.subject = mk_app(fn->subject, arg);
  d.premises = {fn};
  return finish(std::move(d));
}

DerivPtr deriv_app_result(const DerivPtr& fn, const TermPtr& arg) {
  Derivation d;
  d.system = System::LSC;
  d.rule = Rule::AppLo;
  d.subject = mk_app(fn->subject, arg);
  d.premises = {fn};
  return finish(std::move(d));
}

DerivPtr deriv_app_lo(System s, const DerivPtr& fn, const DerivPtr& arg) {
  Derivation d;
  d.system = s;
  d.rule = Rule::AppLo;
  d.subject = mk_app(fn->subject, arg->subject);
  d.premises = {fn, arg};
  return finish(std::move(d));
}

DerivPtr deriv_many(System s, const TermPtr& subject, std::vector<DerivPtr> premises) {
  Derivation d;
  d.system = s;
  d.rule = Rule::Many;
  d.subject = subject;
  d.premises = std::move(premises);
  return finish(std::move(d));
}

DerivPtr deriv_many_pos(std::vector<DerivPtr> premises) {
  if (premises.empty())
    throw SideConditionViolation("many_pos requires at least one premise", "");
  Derivation d;
  d.system = System::MX;
  d.rule = Rule::ManyPos;
  d.subject = premises[0]->subject;
  d.premises = std::move(premises);
  return finish(std::move(d));
}

DerivPtr deriv_none(const DerivPtr& premise) {
  Derivation d;
  d.system = System::MX;
  d.rule = Rule::None_;
  d.subject = premise->subject;
  d.premises = {premise};
  return finish(std::move(d));
}

DerivPtr deriv_es(const DerivPtr& body, const std::string& binder, const DerivPtr& arg_many) {
  Derivation d;
  d.system = System::LSC;
  d.rule = Rule::ES;
  d.subject = mk_esub(body->subject, binder, arg_many->subject);
  d.premises = {body, arg_many};
  return finish(std::move(d));
}

DerivPtr rebuild(const DerivPtr& node, std::vector<DerivPtr> premises) {
  Derivation d = *node;
  d.premises = std::move(premises);
  switch (d.rule) {
    case Rule::FunB:
    case Rule::FunR:
      d.subject = mk_lam(node->subject->name, d.premises[0]->subject);
      break;
    case Rule::AppB:
      d.subject = mk_app(d.premises[0]->subject, d.premises[1]->subject);
      break;
    case Rule::AppHd:
      d.subject = mk_app(d.premises[0]->subject, node->subject->b);
      break;
    case Rule::AppLo:
      if (d.system == System::LSC)
        d.subject = mk_app(d.premises[0]->subject, node->subject->b);
      else
        d.subject = mk_app(d.premises[0]->subject, d.premises[1]->subject);
      break;
    case Rule::ES:
      d.subject = mk_esub(d.premises[0]->subject, node->subject->name, d.premises[1]->subject);
      break;
    case Rule::ManyPos:
    case Rule::None_:
      d.subject = d.premises.empty() ? node->subject : d.premises[0]->subject;
      break;
    case Rule::Many:
      if (!d.premises.empty()) d.subject = d.premises[0]->subject;
      break;
    case Rule::Ax:
      break;
  }
  return finish(std::move(d));
}

bool deriv_equal(const DerivPtr& a, const DerivPtr& b) {
  if (a->system != b->system || a->rule != b->rule || a->idx != b->idx) return false;
  if (!alpha_equal(a->subject, b->subject)) return false;
  if (!(a->ctx == b->ctx) || !tom_equal(a->concl, b->concl)) return false;
  if (a->premises.size() != b->premises.size()) return false;
  for (size_t i = 0; i < a->premises.size(); ++i)
    if (!deriv_equal(a->premises[i], b->premises[i])) return false;
  return true;
}

// --- serialization ---------------------------------------------------------

namespace {

nlohmann::json node_to_json(const DerivPtr& d) {
  nlohmann::json j;
  j["rule"] = rule_name(d->rule);
  j["term"] = render_term(d->subject);
  j["context"] = render_context(d->ctx);
  if (auto* t = std::get_if<TypePtr>(&d->concl))
    j["type"] = render_type(*t);
  else
    j["multiset"] = render_multiset(std::get<MultiSet>(d->concl));
  if (d->system == System::LSC)
    j["indices"] = {d->idx.b, d->idx.e, d->idx.r};
  else
    j["indices"] = {d->idx.b, d->idx.r};
  j["premises"] = nlohmann::json::array();
  for (const auto& p : d->premises) j["premises"].push_back(node_to_json(p));
  return j;
}

DerivPtr node_from_json(const nlohmann::json& j, System s) {
  Derivation d;
  d.system = s;
  auto r = rule_from_name(j.at("rule").get<std::string>());
  if (!r) throw ParseError("unknown rule name: " + j.at("rule").get<std::string>(), 0, 0);
  d.rule = *r;
  d.subject = parse_term(j.at("term").get<std::string>());
  d.ctx = parse_context(j.at("context").get<std::string>());
  if (j.contains("type"))
    d.concl = parse_type(j.at("type").get<std::string>());
  else
    d.concl = parse_multiset(j.at("multiset").get<std::string>());
  const auto& idx = j.at("indices");
  if (s == System::LSC) {
    if (idx.size() != 3) throw ParseError("lsc derivations carry 3 indices", 0, 0);
    d.idx = Indices{idx[0].get<int>(), idx[1].get<int>(), idx[2].get<int>()};
  } else {
    if (idx.size() != 2) throw ParseError("expected 2 indices", 0, 0);
    d.idx = Indices{idx[0].get<int>(), 0, idx[1].get<int>()};
  }
  for (const auto& p : j.at("premises")) d.premises.push_back(node_from_json(p, s));
  return std::make_shared<const Derivation>(std::move(d));
}

}  // namespace

nlohmann::json derivation_to_json(const DerivPtr& d) {
  nlohmann::json j;
  j["system"] = system_name(d->system);
  j["node"] = node_to_json(d);
  return j;
}

DerivPtr derivation_from_json(const nlohmann::json& j) {
  auto s = system_from_name(j.at("system").get<std::string>());
  if (!s) throw ParseError("unknown system: " + j.at("system").get<std::string>(), 0, 0);
  return node_from_json(j.at("node"), *s);
}

std::string derivation_to_text(const DerivPtr& d) { return derivation_to_json(d).dump(2) + "\n"; }

DerivPtr derivation_from_text(const std::string& text) {
  return derivation_from_json(nlohmann::json::parse(text));
}

}  // namespace tightbounds
