#include "tightbounds/types.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace tightbounds {

namespace {

int kind_rank(Type::Kind k) {
  switch (k) {
    case Type::Kind::Neutral: return 0;
    case Type::Kind::Abs: return 1;
    case Type::Kind::Atom: return 2;
    case Type::Kind::Arrow: return 3;
  }
  return 4;
}

}  // namespace

int type_cmp(const TypePtr& a, const TypePtr& b) {
  if (a.get() == b.get()) return 0;
  int ra = kind_rank(a->kind), rb = kind_rank(b->kind);
  if (ra != rb) return ra < rb ? -1 : 1;
  switch (a->kind) {
    case Type::Kind::Neutral:
    case Type::Kind::Abs:
      return 0;
    case Type::Kind::Atom:
      return a->atom == b->atom ? 0 : (a->atom < b->atom ? -1 : 1);
    case Type::Kind::Arrow: {
      const auto& da = a->domain.elems();
      const auto& db = b->domain.elems();
      if (da.size() != db.size()) return da.size() < db.size() ? -1 : 1;
      for (size_t i = 0; i < da.size(); ++i) {
        int c = type_cmp(da[i], db[i]);
        if (c != 0) return c;
      }
      return type_cmp(a->codomain, b->codomain);
    }
  }
  return 0;
}

bool type_equal(const TypePtr& a, const TypePtr& b) { return type_cmp(a, b) == 0; }

MultiSet::MultiSet(std::vector<TypePtr> elems) : elems_(std::move(elems)) {
  std::sort(elems_.begin(), elems_.end(),
            [](const TypePtr& a, const TypePtr& b) { return type_cmp(a, b) < 0; });
}

void MultiSet::insert(const TypePtr& t) {
  auto it = std::lower_bound(elems_.begin(), elems_.end(), t,
                             [](const TypePtr& a, const TypePtr& b) { return type_cmp(a, b) < 0; });
  elems_.insert(it, t);
}

MultiSet MultiSet::united(const MultiSet& other) const {
  std::vector<TypePtr> merged;
  merged.reserve(elems_.size() + other.elems_.size());
  std::merge(elems_.begin(), elems_.end(), other.elems_.begin(), other.elems_.end(),
             std::back_inserter(merged),
             [](const TypePtr& a, const TypePtr& b) { return type_cmp(a, b) < 0; });
  MultiSet m;
  m.elems_ = std::move(merged);
  return m;
}

bool MultiSet::remove_one(const TypePtr& t) {
  for (auto it = elems_.begin(); it != elems_.end(); ++it) {
    if (type_equal(*it, t)) {
      elems_.erase(it);
      return true;
    }
  }
  return false;
}

bool MultiSet::operator==(const MultiSet& other) const {
  if (elems_.size() != other.elems_.size()) return false;
  for (size_t i = 0; i < elems_.size(); ++i) {
    if (!type_equal(elems_[i], other.elems_[i])) return false;
  }
  return true;
}

TypePtr ty_neutral() {
  static TypePtr t = std::make_shared<Type>(Type{Type::Kind::Neutral, 0, {}, nullptr});
  return t;
}

TypePtr ty_abs() {
  static TypePtr t = std::make_shared<Type>(Type{Type::Kind::Abs, 0, {}, nullptr});
  return t;
}

TypePtr ty_atom(int id) { return std::make_shared<Type>(Type{Type::Kind::Atom, id, {}, nullptr}); }

TypePtr ty_arrow(MultiSet domain, TypePtr codomain) {
  return std::make_shared<Type>(Type{Type::Kind::Arrow, 0, std::move(domain), std::move(codomain)});
}

const MultiSet& TypingContext::get(const std::string& x) const {
  static const MultiSet empty;
  auto it = map_.find(x);
  return it == map_.end() ? empty : it->second;
}

void TypingContext::set(const std::string& x, MultiSet m) {
  if (m.empty()) {
    map_.erase(x);
  } else {
    map_[x] = std::move(m);
  }
}

void TypingContext::add(const std::string& x, const TypePtr& t) { map_[x].insert(t); }

TypingContext TypingContext::united(const TypingContext& other) const {
  TypingContext out = *this;
  for (const auto& [x, m] : other.map_) {
    out.map_[x] = out.map_[x].united(m);
  }
  return out;
}

TypingContext TypingContext::restricted(const std::string& x) const {
  TypingContext out = *this;
  out.map_.erase(x);
  return out;
}

std::vector<std::string> TypingContext::domain() const {
  std::vector<std::string> names;
  for (const auto& [x, m] : map_) {
    if (!m.empty()) names.push_back(x);
  }
  return names;
}

bool TypingContext::operator==(const TypingContext& other) const {
  // Empty entries are never stored, so map equality is context equality.
  if (map_.size() != other.map_.size()) return false;
  auto a = map_.begin();
  auto b = other.map_.begin();
  for (; a != map_.end(); ++a, ++b) {
    if (a->first != b->first || !(a->second == b->second)) return false;
  }
  return true;
}

bool is_tight(const TypePtr& t) {
  return t->kind == Type::Kind::Neutral || t->kind == Type::Kind::Abs;
}

bool is_tight(const MultiSet& m) {
  return std::all_of(m.elems().begin(), m.elems().end(),
                     [](const TypePtr& t) { return is_tight(t); });
}

bool is_tight(const TypingContext& g) {
  for (const auto& [x, m] : g.entries()) {
    if (!is_tight(m)) return false;
  }
  return true;
}

int type_size(const TypePtr& t) {
  switch (t->kind) {
    case Type::Kind::Neutral:
    case Type::Kind::Abs:
    case Type::Kind::Atom:
      return 0;
    case Type::Kind::Arrow:
      return type_size(t->domain) + type_size(t->codomain) + 1;
  }
  return 0;
}

int type_size(const MultiSet& m) {
  int s = 0;
  for (const auto& t : m.elems()) s += type_size(t);
  return s;
}

int type_size(const TypingContext& g) {
  int s = 0;
  for (const auto& [x, m] : g.entries()) s += type_size(m);
  return s;
}

Polarity compose(Polarity a, Polarity b) {
  return a == b ? Polarity::Pos : Polarity::Neg;
}

namespace {

bool target_is_multiset(const TypeOrMulti& t) { return std::holds_alternative<MultiSet>(t); }

}  // namespace

bool occurs(const TypeOrMulti& target, Polarity p, const TypePtr& container) {
  if (p == Polarity::Pos && !target_is_multiset(target) &&
      type_equal(std::get<TypePtr>(target), container)) {
    return true;
  }
  if (container->kind == Type::Kind::Arrow) {
    return occurs(target, compose(p, Polarity::Neg), container->domain) ||
           occurs(target, p, container->codomain);
  }
  return false;
}

bool occurs(const TypeOrMulti& target, Polarity p, const MultiSet& container) {
  if (p == Polarity::Pos && target_is_multiset(target) &&
      std::get<MultiSet>(target) == container) {
    return true;
  }
  for (const auto& t : container.elems()) {
    if (occurs(target, p, t)) return true;
  }
  return false;
}

bool occurs(const TypeOrMulti& target, Polarity p, const TypingContext& container) {
  for (const auto& [x, m] : container.entries()) {
    if (occurs(target, p, m)) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Surface syntax

std::string render_type(const TypePtr& t) {
  switch (t->kind) {
    case Type::Kind::Neutral: return "N";
    case Type::Kind::Abs: return "A";
    case Type::Kind::Atom: return "a" + std::to_string(t->atom);
    case Type::Kind::Arrow:
      return render_multiset(t->domain) + " -> " + render_type(t->codomain);
  }
  return "?";
}

std::string render_multiset(const MultiSet& m) {
  std::string out = "[";
  bool first = true;
  for (const auto& t : m.elems()) {
    if (!first) out += ", ";
    first = false;
    out += render_type(t);
  }
  out += "]";
  return out;
}

std::string render_context(const TypingContext& g) {
  std::string out;
  bool first = true;
  for (const auto& [x, m] : g.entries()) {
    if (m.empty()) continue;
    if (!first) out += "; ";
    first = false;
    out += x + " : " + render_multiset(m);
  }
  return out;
}

namespace {

struct TypeParser {
  const std::string& text;
  size_t pos = 0;

  explicit TypeParser(const std::string& text) : text(text) {}

  [[noreturn]] void fail(const std::string& msg) {
    throw std::runtime_error("type syntax error at offset " + std::to_string(pos) + ": " + msg);
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) pos++;
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  bool eat(char c) {
    if (peek() == c) {
      pos++;
      return true;
    }
    return false;
  }

  bool eat_arrow() {
    skip_ws();
    if (pos + 1 < text.size() && text[pos] == '-' && text[pos + 1] == '>') {
      pos += 2;
      return true;
    }
    return false;
  }

  TypePtr type() {
    if (peek() == '[') {
      MultiSet m = multiset();
      if (!eat_arrow()) fail("expected '->' after multiset");
      return ty_arrow(std::move(m), type());
    }
    TypePtr t = atom();
    return t;
  }

  TypePtr atom() {
    if (eat('(')) {
      TypePtr t = type();
      if (!eat(')')) fail("expected ')'");
      return t;
    }
    char c = peek();
    if (c == 'N') {
      pos++;
      return ty_neutral();
    }
    if (c == 'A') {
      pos++;
      return ty_abs();
    }
    if (c == 'a') {
      pos++;
      if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos]))) {
        fail("expected atom index after 'a'");
      }
      int id = 0;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        id = id * 10 + (text[pos++] - '0');
      }
      return ty_atom(id);
    }
    fail("expected type");
  }

  MultiSet multiset() {
    if (!eat('[')) fail("expected '['");
    std::vector<TypePtr> elems;
    if (peek() != ']') {
      elems.push_back(type());
      while (eat(',')) elems.push_back(type());
    }
    if (!eat(']')) fail("expected ']'");
    return MultiSet(std::move(elems));
  }

  std::string ident() {
    skip_ws();
    if (pos >= text.size() ||
        !(std::isalpha(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) {
      fail("expected identifier");
    }
    std::string s;
    while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) ||
                                 text[pos] == '_' || text[pos] == '\'')) {
      s += text[pos++];
    }
    return s;
  }

  void expect_end() {
    skip_ws();
    if (pos != text.size()) fail("trailing input");
  }
};

}  // namespace

TypePtr parse_type(const std::string& text) {
  TypeParser p(text);
  TypePtr t = p.type();
  p.expect_end();
  return t;
}

MultiSet parse_multiset(const std::string& text) {
  TypeParser p(text);
  MultiSet m = p.multiset();
  p.expect_end();
  return m;
}

TypingContext parse_context(const std::string& text) {
  TypingContext g;
  TypeParser p(text);
  p.skip_ws();
  if (p.pos == text.size()) return g;
  for (;;) {
    std::string x = p.ident();
    if (!p.eat(':')) p.fail("expected ':' after variable");
    MultiSet m = p.multiset();
    g.set(x, g.get(x).united(m));
    if (!p.eat(';')) break;
  }
  p.expect_end();
  return g;
}

}  // namespace tightbounds
