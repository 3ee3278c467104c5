#pragma once

// Marcenko-Pastur law with ratio index y in (0, 1]: density, distribution
// function, Stieltjes transform and companion transform, plus the smoothing
// integral that controls the last term of the Berry-Esseen type bound.

#include <complex>
#include <functional>
#include <utility>

namespace specdist {

using complex = std::complex<double>;

// A point z = u + iv of the upper half plane.
class ComplexPoint {
 public:
  // Throws DomainError unless v > 0.
  ComplexPoint(double u, double v);
  static ComplexPoint from(complex z) { return ComplexPoint(z.real(), z.imag()); }

  double u() const noexcept { return u_; }
  double v() const noexcept { return v_; }
  complex z() const noexcept { return {u_, v_}; }

 private:
  double u_;
  double v_;
};

class MPLaw {
 public:
  // Throws DomainError unless 0 < y <= 1.
  explicit MPLaw(double y);

  double y() const noexcept { return y_; }
  double lower_edge() const noexcept { return a_; }  // (1 - sqrt y)^2
  double upper_edge() const noexcept { return b_; }  // (1 + sqrt y)^2

 private:
  double y_;
  double a_;
  double b_;
};

// (a, b) = ((1 - sqrt y)^2, (1 + sqrt y)^2).
std::pair<double, double> mp_support(double y);

// sqrt((x-a)(b-x)) / (2 pi x y) on [a, b], zero elsewhere. For y = 1 the
// density at x = 0 is +infinity.
double mp_pdf(const MPLaw& law, double x);

// F_y(x), by adaptive quadrature (absolute tolerance 1e-10) in the angle
// variable x = a + (b - a) sin^2(theta / 2), which removes the square-root
// edges and the 1/sqrt(x) pole of the y = 1 law.
double mp_cdf(const MPLaw& law, double x);

// Integral of p_y(t) * weight(t) over [lo, hi] (clipped to the support),
// using the same angle substitution. `weight` must be bounded on [lo, hi].
double mp_integrate_density(const MPLaw& law, double lo, double hi,
                            const std::function<double(double)>& weight,
                            double abs_tol = 1e-10);

// Square root normalised to a nonnegative imaginary part:
//   Re sqrt(w) = Im w / sqrt(2(|w| - Re w)),  Im sqrt(w) = |Im w| / sqrt(2(|w| + Re w)),
// evaluated in a cancellation-free form and extended to the real axis by
// continuity from Im w > 0.
complex upper_sqrt(complex w);

// m_y(z) = (1 - y - z + sqrt((1 - y - z)^2 - 4yz)) / (2yz) with the
// upper_sqrt branch; Im m_y(z) > 0.
complex mp_stieltjes(const MPLaw& law, ComplexPoint z);

// Transform of the companion limit: -(1 - y)/z + y m_y(z).
complex mp_companion_stieltjes(const MPLaw& law, ComplexPoint z);

// Parameters of the three-term bound. A > B > 5, v > 0, K_i > 0.
struct BoundContext {
  double A = 10.0;
  double B = 6.0;
  double v = 0.1;
  double K1 = 1.0;
  double K2 = 1.0;
  double K3 = 1.0;

  // Throws DomainError when any invariant fails.
  void validate() const;
};

// v_y = 1 - sqrt(y) + sqrt(v).
double smoothing_scale(double y, double v);

struct SmoothingIntegral {
  double lhs = 0.0;     // sup_x int_{|u|<v} |F_y(x+u) - F_y(x)| du
  double rhs = 0.0;     // 11 sqrt(2(1+y)) / (3 pi y) * v^2 / v_y
  double argmax = 0.0;  // x attaining the grid supremum
  double v = 0.0;
  int grid_points = 0;
  bool holds() const noexcept { return lhs < rhs; }
};

// Integral int_{|u|<v} |F_y(x+u) - F_y(x)| du at a single x. Computed as
// int p_y(t) (v - |t - x|)_+ dt, which is the same quantity after swapping
// the order of integration.
double mp_local_smoothing(const MPLaw& law, double x, double v);

// Supremum over a grid of 20001 points on [a - 2v, b + 2v] plus v/100-spaced
// points within 2v of both edges. Certified by repeating on the doubled grid;
// throws NumericError when the two disagree by more than 1%.
SmoothingIntegral mp_smoothing_integral(const MPLaw& law, double v);

}  // namespace specdist
