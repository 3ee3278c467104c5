#include "specdist/mp_law.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "specdist/errors.hpp"
#include "specdist/quadrature.hpp"

namespace specdist {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCdfTolerance = 1e-10;

void check_ratio(double y) {
  if (!(y > 0.0 && y <= 1.0)) {
    std::ostringstream msg;
    msg << "ratio index y must lie in (0, 1], got " << y;
    throw DomainError(msg.str());
  }
}

// Angle coordinate of x in [a, b]: x = a + (b - a) sin^2(theta / 2).
double angle_of(const MPLaw& law, double x) {
  const double a = law.lower_edge();
  const double b = law.upper_edge();
  const double r = std::clamp((x - a) / (b - a), 0.0, 1.0);
  return 2.0 * std::asin(std::sqrt(r));
}

}  // namespace

ComplexPoint::ComplexPoint(double u, double v) : u_(u), v_(v) {
  if (!(v > 0.0) || !std::isfinite(u) || !std::isfinite(v)) {
    std::ostringstream msg;
    msg << "point must lie in the upper half plane, got " << u << " + " << v << "i";
    throw DomainError(msg.str());
  }
}

MPLaw::MPLaw(double y) : y_(y) {
  check_ratio(y);
  std::tie(a_, b_) = mp_support(y);
}

std::pair<double, double> mp_support(double y) {
  check_ratio(y);
  const double s = std::sqrt(y);
  return {(1.0 - s) * (1.0 - s), (1.0 + s) * (1.0 + s)};
}

double mp_pdf(const MPLaw& law, double x) {
  const double a = law.lower_edge();
  const double b = law.upper_edge();
  if (x < a || x > b) return 0.0;
  if (x == 0.0) return std::numeric_limits<double>::infinity();  // y = 1 pole
  return std::sqrt((x - a) * (b - x)) / (2.0 * kPi * x * law.y());
}

double mp_integrate_density(const MPLaw& law, double lo, double hi,
                            const std::function<double(double)>& weight,
                            double abs_tol) {
  const double a = law.lower_edge();
  const double b = law.upper_edge();
  lo = std::max(lo, a);
  hi = std::min(hi, b);
  if (!(hi > lo)) return 0.0;
  const double width = b - a;
  const double scale = width * width / (2.0 * kPi * law.y());
  // p(t) dt = (b-a)^2 s^2 c^2 / (2 pi y t) d theta with s, c = sin, cos(theta/2).
  auto integrand = [&](double theta) {
    const double s = std::sin(0.5 * theta);
    const double c = std::cos(0.5 * theta);
    const double t = a + width * s * s;
    return scale * s * s * c * c / t * weight(t);
  };
  return integrate(integrand, angle_of(law, lo), angle_of(law, hi), abs_tol, 0.0);
}

double mp_cdf(const MPLaw& law, double x) {
  if (x <= law.lower_edge()) return 0.0;
  if (x >= law.upper_edge()) return 1.0;
  const double mass =
      mp_integrate_density(law, law.lower_edge(), x, [](double) { return 1.0; }, kCdfTolerance);
  return std::clamp(mass, 0.0, 1.0);
}

complex upper_sqrt(complex w) {
  const double re = w.real();
  const double im = w.imag();
  const double modulus = std::abs(w);
  if (modulus == 0.0) return {0.0, 0.0};
  // The larger component comes from a sqrt, the smaller from Im w / (2 * larger).
  const double big = std::sqrt(0.5 * (modulus + std::abs(re)));
  if (re >= 0.0) {
    const double real_part = std::signbit(im) ? -big : big;
    return {real_part, std::abs(im) / (2.0 * big)};
  }
  return {im / (2.0 * big), big};
}

complex mp_stieltjes(const MPLaw& law, ComplexPoint point) {
  const double y = law.y();
  const complex z = point.z();
  const complex q = 1.0 - y - z;
  const complex s = upper_sqrt(q * q - 4.0 * y * z);
  const complex plus = q + s;
  const complex minus = q - s;
  // The two roots multiply to 1/(yz); use the quotient form when the sum cancels.
  if (std::abs(plus) >= std::abs(minus)) return plus / (2.0 * y * z);
  return 2.0 / minus;
}

complex mp_companion_stieltjes(const MPLaw& law, ComplexPoint point) {
  const double y = law.y();
  const complex z = point.z();
  return -(1.0 - y) / z + y * mp_stieltjes(law, point);
}

void BoundContext::validate() const {
  std::ostringstream msg;
  if (!(A > B && B > 5.0)) {
    msg << "bound context requires A > B > 5, got A=" << A << ", B=" << B;
  } else if (!(v > 0.0)) {
    msg << "bound context requires v > 0, got " << v;
  } else if (!(K1 > 0.0 && K2 > 0.0 && K3 > 0.0)) {
    msg << "bound constants must be positive, got K1=" << K1 << ", K2=" << K2 << ", K3=" << K3;
  } else {
    return;
  }
  throw DomainError(msg.str());
}

double smoothing_scale(double y, double v) { return 1.0 - std::sqrt(y) + std::sqrt(v); }

double mp_local_smoothing(const MPLaw& law, double x, double v) {
  const double tol = 1e-10 * v * v;
  const double left = mp_integrate_density(
      law, x - v, x, [x, v](double t) { return v - (x - t); }, tol);
  const double right = mp_integrate_density(
      law, x, x + v, [x, v](double t) { return v - (t - x); }, tol);
  return left + right;
}

namespace {

struct GridMax {
  double value = 0.0;
  double at = 0.0;
  int points = 0;
};

GridMax scan_smoothing(const MPLaw& law, double v, int uniform_points, double edge_step) {
  const double a = law.lower_edge();
  const double b = law.upper_edge();
  std::vector<double> xs;
  xs.reserve(uniform_points + 2 * static_cast<std::size_t>(4.0 * v / edge_step + 2));
  const double lo = a - 2.0 * v;
  const double hi = b + 2.0 * v;
  for (int k = 0; k < uniform_points; ++k)
    xs.push_back(lo + (hi - lo) * k / (uniform_points - 1));
  const int edge_count = static_cast<int>(std::lround(2.0 * v / edge_step));
  for (double edge : {a, b})
    for (int k = -edge_count; k <= edge_count; ++k) xs.push_back(edge + k * edge_step);

  GridMax best;
  best.points = static_cast<int>(xs.size());
  for (double x : xs) {
    const double value = mp_local_smoothing(law, x, v);
    if (value > best.value) {
      best.value = value;
      best.at = x;
    }
  }
  return best;
}

}  // namespace

SmoothingIntegral mp_smoothing_integral(const MPLaw& law, double v) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream msg;
    msg << "smoothing height v must be positive, got " << v;
    throw DomainError(msg.str());
  }
  const double y = law.y();
  const GridMax coarse = scan_smoothing(law, v, 20001, v / 100.0);
  const GridMax fine = scan_smoothing(law, v, 40001, v / 200.0);
  const double gap = std::abs(fine.value - coarse.value);
  if (gap > 0.01 * fine.value) {
    std::ostringstream msg;
    msg << "smoothing supremum not resolved: grids give " << coarse.value << " and "
        << fine.value;
    throw NumericError(msg.str(), gap / fine.value);
  }
  SmoothingIntegral out;
  out.v = v;
  out.lhs = std::max(coarse.value, fine.value);
  out.argmax = fine.value >= coarse.value ? fine.at : coarse.at;
  out.grid_points = coarse.points + fine.points;
  out.rhs = 11.0 * std::sqrt(2.0 * (1.0 + y)) / (3.0 * kPi * y) * v * v / smoothing_scale(y, v);
  return out;
}

}  // namespace specdist
