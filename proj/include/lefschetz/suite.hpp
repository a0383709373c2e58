#pragma once

#include <cstdint>
#include <functional>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

namespace lefschetz {

struct SuiteRow {
  std::string item;
  std::string oracle;
  std::string value;
  double residual = 0.0;
  bool pass = false;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  double seconds = 0.0;
  double budget = 0.0;  // seconds; 0 means unbounded
  std::vector<SuiteRow> rows;
  std::string summary;

  nlohmann::json to_json() const;
};

struct SuiteOptions {
  std::uint64_t seed = 1;
  int workers = 0;
};

constexpr int kCriteriaCount = 10;

// Criteria 1..10. The runtime budget is part of the pass condition.
CriterionResult run_criterion(int id, const SuiteOptions& options);
std::vector<CriterionResult> run_suite(
    const SuiteOptions& options,
    const std::function<void(const CriterionResult&)>& on_done = {});

// Deterministic set of nondegenerate 2x2 integer matrices with entries in [-3, 3].
std::vector<std::string> torus_acceptance_maps(std::uint64_t seed, int count = 10);

std::string format_row_table(const std::vector<CriterionResult>& results);

}  // namespace lefschetz
