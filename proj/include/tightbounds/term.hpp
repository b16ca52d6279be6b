#pragma once

#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace tightbounds {

// The four evaluation systems. MX shares predicates and sizes with LO
// on pure terms; LSC is the only system whose terms may contain
// explicit substitutions.
enum class System { HD, LO, MX, LSC };

std::string system_name(System s);
std::optional<System> system_from_name(const std::string& name);

struct Term;
using TermPtr = std::shared_ptr<const Term>;

// Immutable lambda-term, possibly with explicit substitutions.
//   Var:  name
//   Lam:  name (binder), a (body)
//   App:  a (function), b (argument)
//   ESub: a (body), name (binder), b (argument)   --  a[name := b]
struct Term {
  enum class Kind { Var, Lam, App, ESub };

  Kind kind;
  std::string name;
  TermPtr a;
  TermPtr b;
};

TermPtr mk_var(std::string name);
TermPtr mk_lam(std::string binder, TermPtr body);
TermPtr mk_app(TermPtr fn, TermPtr arg);
TermPtr mk_esub(TermPtr body, std::string binder, TermPtr arg);

// Path from the root of a term to one of its subterms.
enum class Dir { LamBody, AppFn, AppArg, EsBody, EsArg };
using Path = std::vector<Dir>;

TermPtr subterm_at(const TermPtr& t, const Path& path);

struct NonPureTerm : std::runtime_error {
  explicit NonPureTerm(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& what, int line, int col)
      : std::runtime_error(what), line(line), col(col) {}
  int line;
  int col;
};

bool is_pure(const TermPtr& t);
bool alpha_equal(const TermPtr& t, const TermPtr& u);
std::set<std::string> free_vars(const TermPtr& t);

// Capture-avoiding substitution of u for every free occurrence of x.
TermPtr substitute(const TermPtr& t, const std::string& x, const TermPtr& u);

// Folds every explicit substitution into a meta-level substitution,
// innermost first; pure terms are fixed points.
TermPtr unfold(const TermPtr& t);

// Strategy-dependent term size. HD ignores arguments, LO/MX count them,
// LSC counts variables (and ignores the substitution constructor).
int term_size(System s, const TermPtr& t);

struct Classification {
  bool normal = false;
  bool neutral = false;
  bool abs = false;
};

// Normal / neutral / abs predicates of the given system, computed in
// one pass so that neutral == normal && !abs by construction.
Classification classify(System s, const TermPtr& t);

TermPtr parse_term(const std::string& text);
std::string render_term(const TermPtr& t);

// Picks a name not occurring in `avoid` by priming `base`.
std::string fresh_name(const std::string& base, const std::set<std::string>& avoid);

// The family t_n used to witness the quadratic gap between
// multiplicative and exponential step counts.
TermPtr make_tn(int n);

}  // namespace tightbounds
