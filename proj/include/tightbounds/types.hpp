#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace tightbounds {

struct Type;
using TypePtr = std::shared_ptr<const Type>;

// A multiset of types, kept sorted by the total syntactic order so
// that equality, union and element removal are deterministic.
class MultiSet {
 public:
  MultiSet() = default;
  explicit MultiSet(std::vector<TypePtr> elems);

  const std::vector<TypePtr>& elems() const { return elems_; }
  bool empty() const { return elems_.empty(); }
  int size() const { return static_cast<int>(elems_.size()); }

  void insert(const TypePtr& t);
  MultiSet united(const MultiSet& other) const;
  // Removes one occurrence of t; false when absent.
  bool remove_one(const TypePtr& t);

  bool operator==(const MultiSet& other) const;
  bool operator!=(const MultiSet& other) const { return !(*this == other); }

 private:
  std::vector<TypePtr> elems_;
};

// Multi types: tight constants, atoms, and arrows with multiset domain.
struct Type {
  enum class Kind { Neutral, Abs, Atom, Arrow };

  Kind kind;
  int atom = 0;        // Atom only
  MultiSet domain;     // Arrow only
  TypePtr codomain;    // Arrow only
};

TypePtr ty_neutral();
TypePtr ty_abs();
TypePtr ty_atom(int id);
TypePtr ty_arrow(MultiSet domain, TypePtr codomain);

// Total syntactic order on types; 0 when equal.
int type_cmp(const TypePtr& a, const TypePtr& b);
bool type_equal(const TypePtr& a, const TypePtr& b);

// Finite-support map from variable names to multisets.
class TypingContext {
 public:
  TypingContext() = default;

  const MultiSet& get(const std::string& x) const;
  void set(const std::string& x, MultiSet m);
  void add(const std::string& x, const TypePtr& t);

  TypingContext united(const TypingContext& other) const;
  TypingContext restricted(const std::string& x) const;

  // Names mapped to a non-empty multiset, sorted.
  std::vector<std::string> domain() const;
  const std::map<std::string, MultiSet>& entries() const { return map_; }

  bool operator==(const TypingContext& other) const;
  bool operator!=(const TypingContext& other) const { return !(*this == other); }

 private:
  std::map<std::string, MultiSet> map_;
};

bool is_tight(const TypePtr& t);
bool is_tight(const MultiSet& m);
bool is_tight(const TypingContext& g);

int type_size(const TypePtr& t);
int type_size(const MultiSet& m);
int type_size(const TypingContext& g);

enum class Polarity { Pos, Neg };
Polarity compose(Polarity a, Polarity b);

// A (multi)-type: either a type or a multiset.
using TypeOrMulti = std::variant<TypePtr, MultiSet>;

bool occurs(const TypeOrMulti& target, Polarity p, const TypePtr& container);
bool occurs(const TypeOrMulti& target, Polarity p, const MultiSet& container);
bool occurs(const TypeOrMulti& target, Polarity p, const TypingContext& container);

std::string render_type(const TypePtr& t);
std::string render_multiset(const MultiSet& m);
std::string render_context(const TypingContext& g);

TypePtr parse_type(const std::string& text);
MultiSet parse_multiset(const std::string& text);
TypingContext parse_context(const std::string& text);

}  // namespace tightbounds
