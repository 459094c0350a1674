#include "simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace macrobell::detail {

FeasibilityResult phase1_feasibility(const std::vector<std::vector<double>>& a,
                                     const std::vector<double>& b, double tol) {
  const std::size_t rows = a.size();
  if (rows == 0 || b.size() != rows) {
    throw std::invalid_argument("phase1_feasibility: malformed system");
  }
  const std::size_t vars = a.front().size();

  // Tableau [A | I | rhs] with rhs >= 0 and the artificial basis.
  const std::size_t cols = vars + rows;
  std::vector<std::vector<double>> t(rows, std::vector<double>(cols + 1, 0.0));
  std::vector<std::size_t> basis(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    if (a[i].size() != vars) throw std::invalid_argument("phase1_feasibility: ragged matrix");
    const double sign = (b[i] < 0.0) ? -1.0 : 1.0;
    for (std::size_t j = 0; j < vars; ++j) t[i][j] = sign * a[i][j];
    t[i][vars + i] = 1.0;
    t[i][cols] = sign * b[i];
    basis[i] = vars + i;
  }

  const double pivot_tol = 1e-11;
  const std::size_t max_iterations = 2000 * (rows + vars) + 10000;

  for (std::size_t iter = 0; iter < max_iterations; ++iter) {
    // Reduced costs of the phase-1 objective: sum of rows whose basic
    // variable is still artificial. Recomputed fresh each round.
    std::vector<double> reduced(vars, 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
      if (basis[i] >= vars) {
        for (std::size_t j = 0; j < vars; ++j) reduced[j] += t[i][j];
      }
    }

    // Bland: smallest-index entering column with positive reduced cost.
    std::size_t entering = cols;
    for (std::size_t j = 0; j < vars; ++j) {
      if (reduced[j] > pivot_tol) {
        entering = j;
        break;
      }
    }
    if (entering == cols) break;  // optimal

    std::size_t leaving = rows;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rows; ++i) {
      if (t[i][entering] > pivot_tol) {
        const double ratio = t[i][cols] / t[i][entering];
        if (ratio < best_ratio - 1e-15 ||
            (std::abs(ratio - best_ratio) <= 1e-15 &&
             (leaving == rows || basis[i] < basis[leaving]))) {
          best_ratio = ratio;
          leaving = i;
        }
      }
    }
    if (leaving == rows) break;  // unbounded column cannot happen in phase 1

    // Pivot.
    const double pivot = t[leaving][entering];
    for (std::size_t j = 0; j <= cols; ++j) t[leaving][j] /= pivot;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == leaving) continue;
      const double factor = t[i][entering];
      if (factor == 0.0) continue;
      for (std::size_t j = 0; j <= cols; ++j) t[i][j] -= factor * t[leaving][j];
    }
    basis[leaving] = entering;
  }

  double residual = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    if (basis[i] >= vars) residual += std::max(0.0, t[i][cols]);
  }

  FeasibilityResult result;
  result.residual = residual;
  result.feasible = residual <= tol;
  result.solution.assign(vars, 0.0);
  if (result.feasible) {
    for (std::size_t i = 0; i < rows; ++i) {
      if (basis[i] < vars) result.solution[basis[i]] = std::max(0.0, t[i][cols]);
    }
  }
  return result;
}

}  // namespace macrobell::detail
