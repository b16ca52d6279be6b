#pragma once

#include <stdexcept>

#include <json.hpp>

#include "tightbounds/term.hpp"
#include "tightbounds/types.hpp"

namespace tightbounds {

enum class Rule { Ax, FunB, FunR, AppB, AppHd, AppLo, Many, ManyPos, None_, ES };

std::string rule_name(Rule r);
std::optional<Rule> rule_from_name(const std::string& name);

struct Indices {
  int b = 0;
  int e = 0;  // always 0 outside LSC
  int r = 0;

  bool operator==(const Indices& o) const { return b == o.b && e == o.e && r == o.r; }
  bool operator!=(const Indices& o) const { return !(*this == o); }
};

struct Derivation;
using DerivPtr = std::shared_ptr<const Derivation>;

// One node of a typing derivation, carrying its full judgement.
// The conclusion is a multiset exactly at Many/ManyPos/None_ nodes.
struct Derivation {
  System system;
  Rule rule;
  TermPtr subject;
  TypingContext ctx;
  TypeOrMulti concl;
  Indices idx;
  std::vector<DerivPtr> premises;
};

const TypePtr& concl_type(const DerivPtr& d);        // throws if multiset
const MultiSet& concl_multiset(const DerivPtr& d);   // throws if type

// --- checker ------------------------------------------------------------

struct DerivationError : std::runtime_error {
  std::string node_path;  // premise indices from the root, e.g. "0.1"
  DerivationError(const std::string& what, std::string path);
};
struct RuleMismatch : DerivationError { using DerivationError::DerivationError; };
struct SideConditionViolation : DerivationError { using DerivationError::DerivationError; };
struct IndexMismatch : DerivationError { using DerivationError::DerivationError; };
struct ContextMismatch : DerivationError { using DerivationError::DerivationError; };
struct NegativeIndex : DerivationError { using DerivationError::DerivationError; };

// Re-derives every judgement in the tree and compares it with the stored
// one; returns the root indices on success.
Indices check(const DerivPtr& d);

// Recomputes all indices bottom-up by the rule arithmetic, ignoring the
// stored ones; the result checks.
DerivPtr infer_indices(const DerivPtr& d);

int deriv_size(const DerivPtr& d);
int count_es_nodes(const DerivPtr& d);

struct DerivFlags {
  bool tight = false;
  bool garbage_tight = false;
  bool mx_tight = false;
  bool traditional = false;
  bool shrinking = false;
};

DerivFlags classify_derivation(const DerivPtr& d);

// --- builders (judgements computed bottom-up; each node is validated) ---

DerivPtr deriv_ax(System s, const std::string& x, const TypePtr& tau);
DerivPtr deriv_fun_b(System s, const std::string& binder, const DerivPtr& body);
DerivPtr deriv_fun_r(System s, const std::string& binder, const DerivPtr& body);
DerivPtr deriv_app_b(System s, const DerivPtr& fn, const DerivPtr& arg_many);
DerivPtr deriv_app_hd(const DerivPtr& fn, const TermPtr& arg);              // HD
DerivPtr deriv_app_result(const DerivPtr& fn, const TermPtr& arg);         // LSC (AppLo tag)
DerivPtr deriv_app_lo(System s, const DerivPtr& fn, const DerivPtr& arg);  // LO/MX
DerivPtr deriv_many(System s, const TermPtr& subject, std::vector<DerivPtr> premises);
DerivPtr deriv_many_pos(std::vector<DerivPtr> premises);                   // MX
DerivPtr deriv_none(const DerivPtr& premise);                              // MX
DerivPtr deriv_es(const DerivPtr& body, const std::string& binder, const DerivPtr& arg_many);

// Rebuild a node with different premises (judgement recomputed).
DerivPtr rebuild(const DerivPtr& node, std::vector<DerivPtr> premises);

bool deriv_equal(const DerivPtr& a, const DerivPtr& b);

// --- serialization -------------------------------------------------------

nlohmann::json derivation_to_json(const DerivPtr& d);
DerivPtr derivation_from_json(const nlohmann::json& j);
std::string derivation_to_text(const DerivPtr& d);  // pretty JSON + newline
DerivPtr derivation_from_text(const std::string& text);

}  // namespace tightbounds
