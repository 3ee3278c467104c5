#include "specdist/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "specdist/errors.hpp"
#include "specdist/quadrature.hpp"

namespace specdist {

double ks_step_vs_cdf(const StepDistribution& H, const CdfFunction& G) {
  if (H.empty()) throw DomainError("KS distance of an empty step function");
  const auto& loc = H.locations();
  const auto& cum = H.cumulative();
  double sup = std::abs(H.total_mass() - 1.0);
  double below = 0.0;
  for (std::size_t i = 0; i < loc.size(); ++i) {
    const double g = G(loc[i]);
    sup = std::max({sup, std::abs(cum[i] - g), std::abs(below - g)});
    below = cum[i];
  }
  return sup;
}

double ks_step_vs_step(const StepDistribution& H, const StepDistribution& F) {
  if (H.empty() || F.empty()) throw DomainError("KS distance of an empty step function");
  const auto& hx = H.locations();
  const auto& fx = F.locations();
  const auto& hc = H.cumulative();
  const auto& fc = F.cumulative();
  // Merge walk: after consuming all jumps at x, (h, f) are the right values
  // and (h_left, f_left) the left limits at x.
  std::size_t i = 0, j = 0;
  double h = 0.0, f = 0.0, sup = 0.0;
  while (i < hx.size() || j < fx.size()) {
    const double x = std::min(i < hx.size() ? hx[i] : INFINITY, j < fx.size() ? fx[j] : INFINITY);
    const double h_left = h, f_left = f;
    if (i < hx.size() && hx[i] == x) h = hc[i++];
    if (j < fx.size() && fx[j] == x) f = fc[j++];
    sup = std::max({sup, std::abs(h - f), std::abs(h_left - f_left)});
  }
  return sup;
}

double kolmogorov_cdf(double x) {
  if (!(x > 0.0)) return 0.0;
  constexpr double kPi = std::numbers::pi;
  double sum = 0.0;
  if (x < 1.0) {
    const double c = kPi * kPi / (8.0 * x * x);
    for (int k = 1; k < 1000; ++k) {
      const double odd = 2.0 * k - 1.0;
      const double term = std::exp(-odd * odd * c);
      sum += term;
      if (term < 1e-12) break;
    }
    return std::min(1.0, std::sqrt(2.0 * kPi) / x * sum);
  }
  for (int k = 1; k < 1000; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += (k % 2 == 1) ? term : -term;
    if (term < 1e-12) break;
  }
  return std::clamp(1.0 - 2.0 * sum, 0.0, 1.0);
}

namespace {

// int_{|x|>B} |H(x) - F_y(x)| dx. F_y is supported in [0, 4] and B > 5, so
// F_y is the constant mp_cdf(-B) = 0 on the left tail and mp_cdf(B) = 1 on
// the right tail; H is constant between jumps.
double tail_integral(const StepDistribution& H, const MPLaw& law, double B) {
  const double f_left = mp_cdf(law, -B);
  const double f_right = mp_cdf(law, B);
  const auto& loc = H.locations();
  const auto& cum = H.cumulative();
  double total = 0.0;

  // Left tail (-inf, -B]: intervals [loc[i], loc[i+1]) with loc < -B.
  if (f_left > 0.0) return INFINITY;
  for (std::size_t i = 0; i < loc.size() && loc[i] < -B; ++i) {
    const double end = (i + 1 < loc.size()) ? std::min(loc[i + 1], -B) : -B;
    total += std::abs(cum[i] - f_left) * (end - loc[i]);
  }

  // Right tail [B, inf): H(x) - 1 stays constant past the last jump, so the
  // integral is finite only for unit total mass.
  const double deficit = std::abs(H.total_mass() - f_right);
  if (deficit > 1e-8) return INFINITY;
  double start = B;
  double value = H(B);
  for (std::size_t i = 0; i < loc.size(); ++i) {
    if (loc[i] <= B) continue;
    total += std::abs(value - f_right) * (loc[i] - start);
    start = loc[i];
    value = cum[i];
  }
  return total;
}

}  // namespace

BoundReport berry_esseen_bound(const StepDistribution& H, const MPLaw& law,
                               const BoundContext& ctx, const StieltjesFunction& stieltjes_H) {
  ctx.validate();
  if (H.empty()) throw DomainError("bound evaluation needs a nonempty step distribution");
  BoundReport report;
  report.y = law.y();
  report.context = ctx;

  const StieltjesFunction m_H =
      stieltjes_H ? stieltjes_H : [&H](ComplexPoint z) { return empirical_stieltjes(H, z); };
  auto gap = [&](double u) {
    const ComplexPoint z(u, ctx.v);
    return std::abs(m_H(z) - mp_stieltjes(law, z));
  };
  // Break at the jumps inside [-A, A] so each piece sees at most a pair of
  // resonance peaks of width ~v.
  std::vector<double> cuts{-ctx.A};
  for (double x : H.locations())
    if (x > -ctx.A && x < ctx.A && x - cuts.back() > ctx.v) cuts.push_back(x);
  cuts.push_back(ctx.A);
  const double piece_tol = 1e-8 / static_cast<double>(cuts.size() - 1);
  double integral = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
    integral += integrate(gap, cuts[k], cuts[k + 1], piece_tol, 0.0, 20000);
  report.term1 = ctx.K1 * integral;

  report.term2 = ctx.K2 / ctx.v * tail_integral(H, law, ctx.B);

  report.smoothing = mp_smoothing_integral(law, ctx.v);
  report.term3 = ctx.K3 / ctx.v * report.smoothing.lhs;

  report.rhs = report.term1 + report.term2 + report.term3;
  report.lhs = ks_step_vs_cdf(H, [&law](double x) { return mp_cdf(law, x); });
  report.holds = report.lhs <= report.rhs;
  return report;
}

RateFit rate_fit(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) throw DomainError("rate fit needs at least 3 points");
  RateFit fit;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto [N, distance] = points[k];
    if (!(distance > 0.0) || !std::isfinite(distance)) {
      std::ostringstream msg;
      msg << "rate fit needs positive distances, got " << distance << " at N=" << N;
      throw DomainError(msg.str());
    }
    if (!(N > 0.0) || (k > 0 && !(N > points[k - 1].first)))
      throw DomainError("rate fit needs positive, strictly increasing N");
    fit.log_points.emplace_back(std::log(N), std::log(distance));
  }
  const double count = static_cast<double>(points.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [lx, ly] : fit.log_points) {
    mx += lx;
    my += ly;
  }
  mx /= count;
  my /= count;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [lx, ly] : fit.log_points) {
    sxx += (lx - mx) * (lx - mx);
    sxy += (lx - mx) * (ly - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (const auto& [lx, ly] : fit.log_points) {
    const double r = ly - (fit.intercept + fit.slope * lx);
    fit.rss += r * r;
  }
  return fit;
}

}  // namespace specdist
