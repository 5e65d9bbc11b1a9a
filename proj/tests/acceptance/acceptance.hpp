#pragma once

#include <functional>
#include <string>
#include <vector>

#include "dopalg/groebner.hpp"

namespace acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  bool budget_exceeded = false;
  std::string detail;
  double seconds = 0;
  double limit_seconds = 0;
};

struct Options {
  dopalg::Budget budget = dopalg::Budget::defaults();
  std::size_t fuzz_cases = 10000;
  std::uint64_t seed = 20240601;
};

// Runs criteria 1..10 in order; on_result fires as each one finishes.
std::vector<CriterionResult> run_all(const Options& opt,
                                     const std::function<void(const CriterionResult&)>& on_result = {});

std::string format_line(const CriterionResult& r);

// Mutated variants of the given sources, deterministic in the seed.
std::vector<std::string> fuzz_corpus(const std::vector<std::string>& seeds, std::size_t count, std::uint64_t seed);

}  // namespace acceptance
