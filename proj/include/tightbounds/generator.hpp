#pragma once

#include <cstdint>
#include <map>
#include <random>

#include "tightbounds/synthesis.hpp"

namespace tightbounds {

enum class GenKind { Arbitrary, SimplyTyped };

struct FuzzConfig {
  System system = System::HD;
  int count = 100;
  std::uint64_t seed = 0;
  int max_term_size = 30;
  int fuel = kDefaultFuel;
  GenKind generator = GenKind::Arbitrary;
};

struct FuzzFailure {
  std::string term;
  std::string check_name;
  std::string detail;
};

struct FuzzReport {
  int attempted = 0;
  int normalized = 0;
  int skipped_fuel = 0;
  std::vector<FuzzFailure> failures;
  std::map<std::string, int> passes;  // per-check pass counts
};

TermPtr generate_term(const FuzzConfig& cfg, std::mt19937_64& rng);

// evaluate(), but a term that outgrows size_cap nodes counts as not normalizing;
// keeps diverging fuzz samples from exhausting memory before the fuel runs out.
Trace evaluate_guarded(System s, const TermPtr& t, int fuel, int size_cap);

// Evaluates each generated term and, when it normalizes within fuel, runs
// the full theorem battery; failures are recorded, not thrown.
FuzzReport run_fuzz(const FuzzConfig& cfg);

}  // namespace tightbounds
