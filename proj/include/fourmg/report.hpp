#pragma once

#include <string>
#include <vector>

namespace fourmg {

struct SolveReport {
  int iterations = 0;
  bool converged = false;
  std::vector<double> residuals; // residuals[0] is the initial residual
  double conv_factor = 0.0;      // geometric mean contraction (r_k/r_0)^(1/k)
  double wall_ms = 0.0;
};

std::string report_to_json(const SolveReport& r);

} // namespace fourmg
