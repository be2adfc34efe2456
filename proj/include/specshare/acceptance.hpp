#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "specshare/model.hpp"

namespace specshare {

struct AcceptanceCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<AcceptanceCheck> checks;
  double seconds = 0;

  bool passed() const;
};

struct AcceptanceOptions {
  std::uint64_t outage_trials = 1'000'000;
  std::uint64_t service_draws = 100'000;
  std::uint64_t packets = 1'000'000;
  std::uint64_t seed = 1;
};

/// Runs criteria 1 to 8 against `base`. `on_done` sees each criterion as
/// soon as it finishes.
std::vector<CriterionResult> run_acceptance(
    const ScenarioParams& base, const AcceptanceOptions& options = {},
    const std::function<void(const CriterionResult&)>& on_done = {});

/// "AC3 PASS  service CDF ..." followed by one indented line per check.
std::string format_result(const CriterionResult& result);

}  // namespace specshare
