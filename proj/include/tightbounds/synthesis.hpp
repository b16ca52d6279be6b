#pragma once

#include "tightbounds/derivation.hpp"
#include "tightbounds/strategy.hpp"

namespace tightbounds {

// A multiset of derivations, each concluding a type for the same subject.
using DerivPool = std::vector<DerivPtr>;

struct NotNormal : std::runtime_error { using std::runtime_error::runtime_error; };
struct PoolMismatch : std::runtime_error { using std::runtime_error::runtime_error; };
struct SubjectMismatch : std::runtime_error { using std::runtime_error::runtime_error; };
struct NotTypedAtRedex : std::runtime_error { using std::runtime_error::runtime_error; };
struct FuelExhausted : std::runtime_error { using std::runtime_error::runtime_error; };

// Tight (mx-tight for MX) typing of a normal form, indices
// (0, size(s,t)) — LSC (0, 0, size(LSC,t)).
DerivPtr type_normal_form(System s, const TermPtr& t);

// Replaces every axiom leaf for x by one pool member of the same type
// (leftmost occurrence first); result types substitute(t, x, u).
// u_hint supplies the substituted term when the pool is empty (untyped
// occurrences still need their subjects rewritten).
DerivPtr substitute_derivation(System s, const DerivPtr& phi_t, const std::string& x,
                               DerivPool pool, const TermPtr& u_hint = nullptr);

// Inverse: phi types substitute(u, x, q); cuts the q sub-derivations out
// into a pool and grafts axiom leaves for x.
std::pair<DerivPtr, DerivPool> anti_substitute(System s, const DerivPtr& phi, const TermPtr& u,
                                               const std::string& x, const TermPtr& q);

// phi types the step's source; result types the step's result.
DerivPtr subject_reduce(const DerivPtr& phi, const StepRecord& step);

// phi_p types the step's result; `source` is the step's source term.
DerivPtr subject_expand(const DerivPtr& phi_p, const StepRecord& step, const TermPtr& source);

// Evaluate to normal form, type it, and expand backwards along the trace.
std::pair<Trace, DerivPtr> synthesize_tight(System s, const TermPtr& t, int fuel = kDefaultFuel);

// Minimal traditional shrinking typing of an lo-normal form, indices
// (size(LO,t), 0); tau (lo-neutral subjects only) must itself be
// traditional and shrinking.
DerivPtr mts_type_normal_form(const TermPtr& t, const TypePtr& tau = nullptr);

// The head isomorphism: HD derivations map to LSC ones ((b,r) to
// (b,e,r+1)) and back; round trips are identities.
DerivPtr head_iso(const DerivPtr& phi);

// Folds every ES node of an LSC derivation and transports the result to
// HD: a derivation of unfold(subject) at (b, r-1).
DerivPtr check_unfolding(const DerivPtr& phi_lsc);

}  // namespace tightbounds
