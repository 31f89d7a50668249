#pragma once

#include <string>
#include <vector>

#include "bohmflux/params.hpp"

namespace bohmflux {

struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double tol = 0.0;
};

// suite: "eigen", "velocity", "continuity", "tdse" or "all".
std::vector<CheckResult> run_validation(const std::string& suite,
                                        const CavityParams& p);

bool all_passed(const std::vector<CheckResult>& checks);

}  // namespace bohmflux
