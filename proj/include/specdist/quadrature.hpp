#pragma once

#include <functional>

namespace specdist {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // Kronrod error estimate
  int intervals = 0;
  bool converged = false;
};

// Globally adaptive 7/15-point Gauss-Kronrod quadrature on [lo, hi]: the
// interval with the largest error estimate is bisected until the summed
// estimate drops below max(abs_tol, rel_tol * |value|) or max_intervals is
// reached. Never throws; check `converged`.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double lo, double hi, double abs_tol,
                                    double rel_tol = 0.0,
                                    int max_intervals = 4000);

// As above but throws NumericError (carrying the achieved error) when the
// tolerance is not met.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 double abs_tol, double rel_tol = 0.0, int max_intervals = 4000);

}  // namespace specdist
