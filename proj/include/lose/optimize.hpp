// Thin wrapper over GSL's derivative-free simplex minimiser.
#pragma once

#include <functional>
#include <vector>

namespace lose {

struct MinimizeResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Nelder-Mead (gsl_multimin_fminimizer_nmsimplex2) from x0 with a uniform
// initial step; stops when the simplex size falls below `size_tol`.
MinimizeResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                           double step, int max_iter = 4000, double size_tol = 1e-9);

}  // namespace lose
