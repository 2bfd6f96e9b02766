#pragma once

#include <functional>
#include <string>
#include <vector>

namespace edgewall {

struct CriterionResult {
  int id = 0;
  std::string module;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0;
};

struct ValidationOptions {
  bool quick = false;       ///< smaller domains where the criterion allows it; tolerances unchanged
  std::string only;         ///< module filter ("" = all)
};

/// Module names accepted by ValidationOptions::only.
std::vector<std::string> validation_modules();

/// Runs the acceptance criteria in order, reporting each result as it completes.
std::vector<CriterionResult> run_acceptance(const ValidationOptions& opts,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

/// "PASS [3] energy: ... (detail)" style line.
std::string format_result(const CriterionResult& r);

}  // namespace edgewall
