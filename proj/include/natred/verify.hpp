#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "natred/m3_geometry.hpp"

namespace natred {

enum class VerifyLevel { Quick, Full };

struct CriterionResult {
  int id;
  std::string title;
  bool passed;
  std::string detail;
};

/// Runs the thirteen acceptance criteria. Quick uses fewer random cases; both
/// levels use fixed seeds and pinned tolerances.
std::vector<CriterionResult> run_acceptance(VerifyLevel level);

/// One "PASS"/"FAIL" line per criterion; returns true when all passed.
bool print_results(const std::vector<CriterionResult>& results, std::ostream& out);

/// The (kappa, tau) grid kappa in {-4,-1,0,1,4}, tau in {0.5,1,2}, without kappa = tau^2.
std::vector<M3Params> parameter_grid();

/// Roots of t -> det(solution_matrix(t)) on [step, t_max]: sign changes on a
/// uniform scan refined by bisection.
std::vector<double> determinant_scan_roots(const M3Params& p, const Direction& d, double t_max, double step = 1e-3);

}  // namespace natred
