#include "tightbounds/term.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace tightbounds {

std::string system_name(System s) {
  switch (s) {
    case System::HD: return "hd";
    case System::LO: return "lo";
    case System::MX: return "mx";
    case System::LSC: return "lsc";
  }
  return "?";
}

std::optional<System> system_from_name(const std::string& name) {
  if (name == "hd") return System::HD;
  if (name == "lo") return System::LO;
  if (name == "mx") return System::MX;
  if (name == "lsc") return System::LSC;
  return std::nullopt;
}

TermPtr mk_var(std::string name) {
  return std::make_shared<Term>(Term{Term::Kind::Var, std::move(name), nullptr, nullptr});
}

TermPtr mk_lam(std::string binder, TermPtr body) {
  return std::make_shared<Term>(Term{Term::Kind::Lam, std::move(binder), std::move(body), nullptr});
}

TermPtr mk_app(TermPtr fn, TermPtr arg) {
  return std::make_shared<Term>(Term{Term::Kind::App, {}, std::move(fn), std::move(arg)});
}

TermPtr mk_esub(TermPtr body, std::string binder, TermPtr arg) {
  return std::make_shared<Term>(
      Term{Term::Kind::ESub, std::move(binder), std::move(body), std::move(arg)});
}

TermPtr subterm_at(const TermPtr& t, const Path& path) {
  TermPtr cur = t;
  for (Dir d : path) {
    switch (d) {
      case Dir::LamBody:
        if (cur->kind != Term::Kind::Lam) throw std::runtime_error("bad path: not a lambda");
        cur = cur->a;
        break;
      case Dir::AppFn:
        if (cur->kind != Term::Kind::App) throw std::runtime_error("bad path: not an application");
        cur = cur->a;
        break;
      case Dir::AppArg:
        if (cur->kind != Term::Kind::App) throw std::runtime_error("bad path: not an application");
        cur = cur->b;
        break;
      case Dir::EsBody:
        if (cur->kind != Term::Kind::ESub) throw std::runtime_error("bad path: not a substitution");
        cur = cur->a;
        break;
      case Dir::EsArg:
        if (cur->kind != Term::Kind::ESub) throw std::runtime_error("bad path: not a substitution");
        cur = cur->b;
        break;
    }
  }
  return cur;
}

bool is_pure(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Var: return true;
    case Term::Kind::Lam: return is_pure(t->a);
    case Term::Kind::App: return is_pure(t->a) && is_pure(t->b);
    case Term::Kind::ESub: return false;
  }
  return false;
}

namespace {

bool alpha_eq_rec(const TermPtr& t, const TermPtr& u,
                  std::map<std::string, int>& bt, std::map<std::string, int>& bu, int depth) {
  if (t->kind != u->kind) return false;
  switch (t->kind) {
    case Term::Kind::Var: {
      auto it = bt.find(t->name);
      auto iu = bu.find(u->name);
      if (it != bt.end() || iu != bu.end()) {
        return it != bt.end() && iu != bu.end() && it->second == iu->second;
      }
      return t->name == u->name;
    }
    case Term::Kind::Lam: {
      auto st = bt.find(t->name);
      auto su = bu.find(u->name);
      std::optional<int> ot, ou;
      if (st != bt.end()) ot = st->second;
      if (su != bu.end()) ou = su->second;
      bt[t->name] = depth;
      bu[u->name] = depth;
      bool r = alpha_eq_rec(t->a, u->a, bt, bu, depth + 1);
      if (ot) bt[t->name] = *ot; else bt.erase(t->name);
      if (ou) bu[u->name] = *ou; else bu.erase(u->name);
      return r;
    }
    case Term::Kind::App:
      return alpha_eq_rec(t->a, u->a, bt, bu, depth) && alpha_eq_rec(t->b, u->b, bt, bu, depth);
    case Term::Kind::ESub: {
      if (!alpha_eq_rec(t->b, u->b, bt, bu, depth)) return false;
      auto st = bt.find(t->name);
      auto su = bu.find(u->name);
      std::optional<int> ot, ou;
      if (st != bt.end()) ot = st->second;
      if (su != bu.end()) ou = su->second;
      bt[t->name] = depth;
      bu[u->name] = depth;
      bool r = alpha_eq_rec(t->a, u->a, bt, bu, depth + 1);
      if (ot) bt[t->name] = *ot; else bt.erase(t->name);
      if (ou) bu[u->name] = *ou; else bu.erase(u->name);
      return r;
    }
  }
  return false;
}

void free_vars_rec(const TermPtr& t, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (t->kind) {
    case Term::Kind::Var:
      if (!bound.count(t->name)) out.insert(t->name);
      break;
    case Term::Kind::Lam: {
      bool fresh = bound.insert(t->name).second;
      free_vars_rec(t->a, bound, out);
      if (fresh) bound.erase(t->name);
      break;
    }
    case Term::Kind::App:
      free_vars_rec(t->a, bound, out);
      free_vars_rec(t->b, bound, out);
      break;
    case Term::Kind::ESub: {
      free_vars_rec(t->b, bound, out);
      bool fresh = bound.insert(t->name).second;
      free_vars_rec(t->a, bound, out);
      if (fresh) bound.erase(t->name);
      break;
    }
  }
}

}  // namespace

bool alpha_equal(const TermPtr& t, const TermPtr& u) {
  std::map<std::string, int> bt, bu;
  return alpha_eq_rec(t, u, bt, bu, 0);
}

std::set<std::string> free_vars(const TermPtr& t) {
  std::set<std::string> bound, out;
  free_vars_rec(t, bound, out);
  return out;
}

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  std::string cand = base;
  while (avoid.count(cand)) cand += '\'';
  return cand;
}

TermPtr substitute(const TermPtr& t, const std::string& x, const TermPtr& u) {
  switch (t->kind) {
    case Term::Kind::Var:
      return t->name == x ? u : t;
    case Term::Kind::Lam: {
      if (t->name == x) return t;
      auto fv_body = free_vars(t->a);
      if (!fv_body.count(x)) return t;
      auto fv_u = free_vars(u);
      if (fv_u.count(t->name)) {
        std::set<std::string> avoid = fv_u;
        for (auto& v : fv_body) avoid.insert(v);
        avoid.insert(x);
        std::string y = fresh_name(t->name, avoid);
        TermPtr body = substitute(t->a, t->name, mk_var(y));
        return mk_lam(y, substitute(body, x, u));
      }
      return mk_lam(t->name, substitute(t->a, x, u));
    }
    case Term::Kind::App:
      return mk_app(substitute(t->a, x, u), substitute(t->b, x, u));
    case Term::Kind::ESub: {
      TermPtr arg = substitute(t->b, x, u);
      if (t->name == x) return mk_esub(t->a, t->name, arg);
      auto fv_body = free_vars(t->a);
      if (!fv_body.count(x)) return mk_esub(t->a, t->name, arg);
      auto fv_u = free_vars(u);
      if (fv_u.count(t->name)) {
        std::set<std::string> avoid = fv_u;
        for (auto& v : fv_body) avoid.insert(v);
        avoid.insert(x);
        std::string y = fresh_name(t->name, avoid);
        TermPtr body = substitute(t->a, t->name, mk_var(y));
        return mk_esub(substitute(body, x, u), y, arg);
      }
      return mk_esub(substitute(t->a, x, u), t->name, arg);
    }
  }
  return t;
}

TermPtr unfold(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Var: return t;
    case Term::Kind::Lam: return mk_lam(t->name, unfold(t->a));
    case Term::Kind::App: return mk_app(unfold(t->a), unfold(t->b));
    case Term::Kind::ESub:
      return substitute(unfold(t->a), t->name, unfold(t->b));
  }
  return t;
}

int term_size(System s, const TermPtr& t) {
  if (s != System::LSC && !is_pure(t)) {
    throw NonPureTerm("term_size: explicit substitution under " + system_name(s));
  }
  switch (t->kind) {
    case Term::Kind::Var:
      return s == System::LSC ? 1 : 0;
    case Term::Kind::Lam:
      return term_size(s, t->a) + 1;
    case Term::Kind::App:
      if (s == System::LO || s == System::MX) {
        return term_size(s, t->a) + term_size(s, t->b) + 1;
      }
      return term_size(s, t->a) + 1;
    case Term::Kind::ESub:
      return term_size(s, t->a);
  }
  return 0;
}

namespace {

// Result of the one-pass analysis of an LSC term: either the term is
// not linear-head normal, or its head variable is free (with the
// neutral flag tracking whether only the neutral rules were used), or
// the head variable is bound inside the term.
struct LhStatus {
  enum class Kind { NotNormal, FreeHead, ClosedHead } kind;
  std::string head;    // meaningful for FreeHead
  bool neutral = false;  // meaningful for FreeHead
};

LhStatus lh_status(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Var:
      return {LhStatus::Kind::FreeHead, t->name, true};
    case Term::Kind::App: {
      LhStatus s = lh_status(t->a);
      if (s.kind == LhStatus::Kind::FreeHead && s.neutral) return s;
      return {LhStatus::Kind::NotNormal, {}, false};
    }
    case Term::Kind::Lam: {
      LhStatus s = lh_status(t->a);
      if (s.kind == LhStatus::Kind::NotNormal) return s;
      if (s.kind == LhStatus::Kind::ClosedHead) return s;
      if (s.head == t->name) return {LhStatus::Kind::ClosedHead, {}, false};
      return {LhStatus::Kind::FreeHead, s.head, false};
    }
    case Term::Kind::ESub: {
      LhStatus s = lh_status(t->a);
      if (s.kind == LhStatus::Kind::NotNormal) return s;
      if (s.kind == LhStatus::Kind::FreeHead && s.head == t->name) {
        return {LhStatus::Kind::NotNormal, {}, false};  // exponential redex
      }
      return s;
    }
  }
  return {LhStatus::Kind::NotNormal, {}, false};
}

bool lsc_abs(const TermPtr& t) {
  if (t->kind == Term::Kind::Lam) return true;
  if (t->kind == Term::Kind::ESub) return lsc_abs(t->a);
  return false;
}

Classification classify_pure(System s, const TermPtr& t) {
  Classification c;
  switch (t->kind) {
    case Term::Kind::Var:
      c.normal = c.neutral = true;
      break;
    case Term::Kind::Lam: {
      Classification body = classify_pure(s, t->a);
      c.abs = true;
      c.normal = body.normal;
      break;
    }
    case Term::Kind::App: {
      Classification fn = classify_pure(s, t->a);
      bool arg_ok = s == System::HD || classify_pure(s, t->b).normal;
      c.neutral = fn.neutral && arg_ok;
      c.normal = c.neutral;
      break;
    }
    case Term::Kind::ESub:
      break;  // unreachable, guarded by caller
  }
  return c;
}

}  // namespace

Classification classify(System s, const TermPtr& t) {
  if (s == System::LSC) {
    Classification c;
    LhStatus st = lh_status(t);
    c.abs = lsc_abs(t);
    c.normal = st.kind != LhStatus::Kind::NotNormal;
    c.neutral = st.kind == LhStatus::Kind::FreeHead && st.neutral && !c.abs;
    return c;
  }
  if (!is_pure(t)) {
    throw NonPureTerm("classify: explicit substitution under " + system_name(s));
  }
  return classify_pure(s, t);
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Parser {
  const std::string& text;
  size_t pos = 0;
  int line = 1;
  int col = 1;

  explicit Parser(const std::string& text) : text(text) {}

  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, line, col); }

  char peek() const { return pos < text.size() ? text[pos] : '\0'; }

  char advance() {
    char c = text[pos++];
    if (c == '\n') {
      line++;
      col = 1;
    } else {
      col++;
    }
    return c;
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) advance();
  }

  bool eat(char c) {
    skip_ws();
    if (peek() == c) {
      advance();
      return true;
    }
    return false;
  }

  void expect(char c, const std::string& what) {
    if (!eat(c)) fail("expected '" + std::string(1, c) + "' " + what);
  }

  static bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }
  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  }

  bool at_lambda() {
    skip_ws();
    if (peek() == '\\') return true;
    // UTF-8 lambda
    return pos + 1 < text.size() && static_cast<unsigned char>(text[pos]) == 0xce &&
           static_cast<unsigned char>(text[pos + 1]) == 0xbb;
  }

  void eat_lambda() {
    if (peek() == '\\') {
      advance();
    } else {
      advance();
      advance();
    }
  }

  std::string ident() {
    skip_ws();
    if (!ident_start(peek())) fail("expected identifier");
    std::string s;
    while (pos < text.size() && ident_char(text[pos])) s += advance();
    return s;
  }

  TermPtr term() {
    if (at_lambda()) {
      eat_lambda();
      std::string x = ident();
      expect('.', "after lambda binder");
      return mk_lam(x, term());
    }
    return app();
  }

  TermPtr app() {
    TermPtr t = atom();
    for (;;) {
      skip_ws();
      char c = peek();
      if (c == '(' || ident_start(c) || at_lambda()) {
        TermPtr arg = at_lambda() ? term() : atom();
        t = mk_app(t, arg);
      } else {
        return t;
      }
    }
  }

  TermPtr atom() {
    skip_ws();
    TermPtr t;
    if (eat('(')) {
      t = term();
      expect(')', "to close parenthesis");
    } else if (ident_start(peek())) {
      t = mk_var(ident());
    } else {
      fail("expected term");
    }
    // Postfix explicit substitutions bind tighter than application.
    while (true) {
      skip_ws();
      if (peek() != '[') break;
      advance();
      std::string x = ident();
      skip_ws();
      if (!(eat(':') && peek() == '=')) fail("expected ':=' in substitution");
      advance();
      TermPtr arg = term();
      expect(']', "to close substitution");
      t = mk_esub(t, x, arg);
    }
    return t;
  }
};

enum class Ctx { Top, AppFn, AppArg, EsBase };

void render_rec(const TermPtr& t, Ctx ctx, std::string& out) {
  switch (t->kind) {
    case Term::Kind::Var:
      out += t->name;
      break;
    case Term::Kind::Lam: {
      bool parens = ctx != Ctx::Top;
      if (parens) out += '(';
      out += '\\';
      out += t->name;
      out += ". ";
      render_rec(t->a, Ctx::Top, out);
      if (parens) out += ')';
      break;
    }
    case Term::Kind::App: {
      bool parens = ctx == Ctx::AppArg || ctx == Ctx::EsBase;
      if (parens) out += '(';
      render_rec(t->a, Ctx::AppFn, out);
      out += ' ';
      render_rec(t->b, Ctx::AppArg, out);
      if (parens) out += ')';
      break;
    }
    case Term::Kind::ESub: {
      render_rec(t->a, Ctx::EsBase, out);
      out += '[';
      out += t->name;
      out += " := ";
      render_rec(t->b, Ctx::Top, out);
      out += ']';
      break;
    }
  }
}

}  // namespace

TermPtr parse_term(const std::string& text) {
  Parser p(text);
  TermPtr t = p.term();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input after term");
  return t;
}

std::string render_term(const TermPtr& t) {
  std::string out;
  render_rec(t, Ctx::Top, out);
  return out;
}

TermPtr make_tn(int n) {
  if (n < 1) throw std::invalid_argument("make_tn: n must be >= 1");
  auto xi = [](int i) { return "x" + std::to_string(i); };
  // Head spine x_0 x_1 ... x_{n-1}.
  TermPtr spine = mk_var(xi(0));
  for (int i = 1; i < n; ++i) spine = mk_app(spine, mk_var(xi(i)));
  // (\x_i. ...) x_{i+1} nesting, outermost binder applied to the identity.
  TermPtr t = mk_app(mk_lam(xi(0), spine), mk_var(xi(1)));
  for (int i = 1; i < n; ++i) t = mk_app(mk_lam(xi(i), t), mk_var(xi(i + 1)));
  TermPtr id = mk_lam("z", mk_var("z"));
  return mk_app(mk_lam(xi(n), t), id);
}

}  // namespace tightbounds
