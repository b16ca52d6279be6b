#pragma once

#include <optional>

#include "tightbounds/term.hpp"

namespace tightbounds {

enum class StepKind { Beta, MxErasing, MxNonErasing, LscMultiplicative, LscExponential };

std::string step_kind_name(StepKind k);

struct StepRecord {
  TermPtr result;
  StepKind kind;
  Path redex_path;                    // position of the fired rule in the source term
  int erased_size = 0;                // MxErasing only: LO size of the erased argument
  std::optional<Path> hole_path;      // LscExponential only: substituted occurrence,
                                      // relative to the redex's substitution body
};

struct Trace {
  TermPtr initial;
  std::vector<StepRecord> steps;
  TermPtr final;
  bool reached_normal = false;
  struct {
    int k = 0;
    int e_total = 0;
    int k_m = 0;
    int k_e = 0;
  } totals;
};

inline constexpr int kDefaultFuel = 10000;

// The unique applicable step of the system's deterministic strategy,
// or nullopt on a normal form.
std::optional<StepRecord> step(System s, const TermPtr& t);

Trace evaluate(System s, const TermPtr& t, int fuel = kDefaultFuel);

// Number of base rules applicable somewhere in t under the system's
// closure rules; used to test determinism (always 0 or 1).
int applicable_rule_count(System s, const TermPtr& t);

}  // namespace tightbounds
