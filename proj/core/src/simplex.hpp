#pragma once

// Phase-1 simplex for linear feasibility: find x >= 0 with A x = b. Dense
// tableau with Bland's rule; adequate for the desk-scale strategy polytopes
// this project solves.

#include <vector>

namespace macrobell::detail {

struct FeasibilityResult {
  bool feasible;
  double residual;
  std::vector<double> solution;
};

FeasibilityResult phase1_feasibility(const std::vector<std::vector<double>>& a,
                                     const std::vector<double>& b, double tol);

}  // namespace macrobell::detail
