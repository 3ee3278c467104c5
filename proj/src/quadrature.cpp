#include "specdist/quadrature.hpp"

#include <array>
#include <cmath>
#include <queue>
#include <sstream>
#include <vector>

#include "specdist/errors.hpp"

namespace specdist {
namespace {

// Kronrod abscissae; odd indices are the embedded 7-point Gauss nodes.
constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double lo, hi, value, error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment gauss_kronrod(const std::function<double(double)>& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int k = 0; k < 7; ++k) {
    const double dx = half * kNodes[k];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[k] * pair;
    if (k % 2 == 1) gauss += kGaussWeights[k / 2] * pair;
  }
  kronrod *= half;
  gauss *= half;
  return {lo, hi, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double lo, double hi, double abs_tol,
                                    double rel_tol, int max_intervals) {
  QuadratureResult result;
  if (lo == hi) {
    result.converged = true;
    return result;
  }
  std::priority_queue<Segment> heap;
  Segment first = gauss_kronrod(f, lo, hi);
  double total = first.value;
  double error = first.error;
  heap.push(first);
  while (error > std::max(abs_tol, rel_tol * std::abs(total)) &&
         static_cast<int>(heap.size()) < max_intervals) {
    Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (mid <= worst.lo || mid >= worst.hi) {
      // Interval cannot be split further in floating point.
      heap.push(worst);
      break;
    }
    Segment left = gauss_kronrod(f, worst.lo, mid);
    Segment right = gauss_kronrod(f, mid, worst.hi);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to shed the drift of the running updates.
  total = 0.0;
  error = 0.0;
  result.intervals = static_cast<int>(heap.size());
  while (!heap.empty()) {
    total += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  result.value = total;
  result.error = error;
  result.converged = error <= std::max(abs_tol, rel_tol * std::abs(total));
  return result;
}

double integrate(const std::function<double(double)>& f, double lo, double hi,
                 double abs_tol, double rel_tol, int max_intervals) {
  const QuadratureResult r = integrate_adaptive(f, lo, hi, abs_tol, rel_tol, max_intervals);
  if (!r.converged) {
    std::ostringstream msg;
    msg << "quadrature on [" << lo << ", " << hi << "] did not converge: error "
        << r.error << " after " << r.intervals << " intervals (requested " << abs_tol << ")";
    throw NumericError(msg.str(), r.error);
  }
  return r.value;
}

}  // namespace specdist
