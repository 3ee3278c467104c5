#pragma once

#include <complex>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "specdist/mp_law.hpp"
#include "specdist/spectra.hpp"

namespace specdist {

using CdfFunction = std::function<double(double)>;
using StieltjesFunction = std::function<complex(ComplexPoint)>;

// sup_x |H(x) - G(x)| for a continuous nondecreasing G. Exact: at each jump
// x_i both H(x_i) and H(x_i-) are compared against G(x_i), plus the gap
// |H(+inf) - 1|. Throws DomainError for an empty H.
double ks_step_vs_cdf(const StepDistribution& H, const CdfFunction& G);

// sup_x |H(x) - F(x)| over the union of jump points, both one-sided limits.
double ks_step_vs_step(const StepDistribution& H, const StepDistribution& F);

// Kolmogorov limit law of sup |B(t)|:
//   K(x) = 1 - 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 x^2),
// switching to the equivalent theta series
//   K(x) = sqrt(2 pi)/x sum_{k>=1} exp(-(2k-1)^2 pi^2 / (8 x^2))
// below x = 1, where the alternating form converges slowly. Terms are
// summed until they drop below 1e-12.
double kolmogorov_cdf(double x);

struct BoundReport {
  double term1 = 0.0;  // K1 int_{-A}^{A} |m_H(u+iv) - m_y(u+iv)| du
  double term2 = 0.0;  // K2 / v * int_{|x|>B} |H(x) - F_y(x)| dx
  double term3 = 0.0;  // K3 / v * sup_x int_{|t|<v} |F_y(x+t) - F_y(x)| dt
  double rhs = 0.0;
  double lhs = 0.0;    // sup_x |H(x) - F_y(x)|
  bool holds = false;  // lhs <= rhs

  // Echoed inputs.
  double y = 0.0;
  BoundContext context;
  SmoothingIntegral smoothing;
};

// Evaluates both sides of the three-term Berry-Esseen type inequality for a
// step distribution H against F_y. `stieltjes_H` defaults to the exact
// transform of H. Integrals: term1 by adaptive quadrature to 1e-8, term2
// piecewise exactly between jumps, term3 from mp_smoothing_integral.
BoundReport berry_esseen_bound(const StepDistribution& H, const MPLaw& law,
                               const BoundContext& ctx,
                               const StieltjesFunction& stieltjes_H = {});

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rss = 0.0;
  std::vector<std::pair<double, double>> log_points;  // (log N, log distance)
};

// Least squares on (log N, log distance). Needs >= 3 points, N strictly
// increasing and every distance > 0; throws DomainError otherwise.
RateFit rate_fit(std::span<const std::pair<double, double>> points);

}  // namespace specdist
