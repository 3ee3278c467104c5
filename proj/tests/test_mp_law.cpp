#include <catch_amalgamated.hpp>

#include <algorithm>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "specdist/errors.hpp"
#include "specdist/mp_law.hpp"

using namespace specdist;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kPi = std::numbers::pi;

// Density straight from the formula, for the oracles below.
double raw_density(double y, double x) {
  const double a = (1 - std::sqrt(y)) * (1 - std::sqrt(y));
  const double b = (1 + std::sqrt(y)) * (1 + std::sqrt(y));
  if (x <= a || x >= b) return 0.0;
  return std::sqrt((x - a) * (b - x)) / (2 * kPi * x * y);
}

// int p_y(t) g(t) dt over [a, b] by tanh-sinh, independent of the library's
// Gauss-Kronrod and angle substitution.
template <typename G>
double oracle_integral(double y, double lo, double hi, G g) {
  boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate([&](double t) { return raw_density(y, t) * g(t); }, lo, hi, 1e-13);
}

complex oracle_stieltjes(double y, complex z) {
  const auto [a, b] = mp_support(y);
  const double re = oracle_integral(y, a, b, [&](double t) { return (1.0 / (t - z)).real(); });
  const double im = oracle_integral(y, a, b, [&](double t) { return (1.0 / (t - z)).imag(); });
  return {re, im};
}

}  // namespace

TEST_CASE("mp_support edges") {
  auto [a, b] = mp_support(0.25);
  CHECK_THAT(a, WithinAbs(0.25, 1e-15));
  CHECK_THAT(b, WithinAbs(2.25, 1e-15));
  std::tie(a, b) = mp_support(1.0);
  CHECK(a == 0.0);
  CHECK(b == 4.0);
  std::tie(a, b) = mp_support(0.5);
  CHECK_THAT(a, WithinAbs(0.0857864376269049, 1e-13));
  CHECK_THAT(b, WithinAbs(2.9142135623730949, 1e-13));
  CHECK_THROWS_AS(mp_support(0.0), DomainError);
  CHECK_THROWS_AS(mp_support(1.5), DomainError);
  CHECK_THROWS_AS(MPLaw(-0.1), DomainError);
}

TEST_CASE("support invariants a + b = 2(1+y), b - a = 4 sqrt(y)") {
  for (double y : {0.01, 0.1, 0.3, 0.77, 1.0}) {
    const auto [a, b] = mp_support(y);
    CHECK(a >= 0.0);
    CHECK(b <= 4.0);
    CHECK_THAT(a + b, WithinAbs(2 * (1 + y), 1e-14));
    CHECK_THAT(b - a, WithinAbs(4 * std::sqrt(y), 1e-14));
  }
}

TEST_CASE("mp_pdf examples") {
  CHECK_THAT(mp_pdf(MPLaw(1.0), 1.0), WithinAbs(std::sqrt(3.0) / (2 * kPi), 1e-15));
  CHECK(mp_pdf(MPLaw(0.25), 3.0) == 0.0);
  CHECK_THAT(mp_pdf(MPLaw(0.25), 1.0), WithinAbs(std::sqrt(0.9375) / (2 * kPi * 0.25), 1e-15));
  CHECK_THAT(mp_pdf(MPLaw(0.25), 1.0), WithinAbs(0.616404, 5e-7));
  CHECK(std::isinf(mp_pdf(MPLaw(1.0), 0.0)));
  CHECK(mp_pdf(MPLaw(1.0), -1e-9) == 0.0);
  CHECK(mp_pdf(MPLaw(0.25), 0.2) == 0.0);
}

TEST_CASE("mp_cdf at the edges") {
  const MPLaw law(0.25);
  CHECK(mp_cdf(law, 0.25) == 0.0);
  CHECK(mp_cdf(law, 2.25) == 1.0);
  CHECK(mp_cdf(law, -3.0) == 0.0);
  CHECK(mp_cdf(law, 7.0) == 1.0);
}

TEST_CASE("mp_cdf(y=1, x=1) against three independent routes") {
  const double value = mp_cdf(MPLaw(1.0), 1.0);
  // Antiderivative of sqrt((4-x)/x)/(2 pi) gives 1/3 + sqrt(3)/(2 pi).
  const double closed = 1.0 / 3.0 + std::sqrt(3.0) / (2 * kPi);
  CHECK_THAT(value, WithinAbs(closed, 1e-10));
  CHECK_THAT(value, WithinAbs(0.608997781044229354, 1e-10));

  boost::math::quadrature::tanh_sinh<double> ts;
  const double ts_value = ts.integrate([](double x) { return raw_density(1.0, x); }, 0.0, 1.0, 1e-12);
  CHECK_THAT(value, WithinAbs(ts_value, 1e-10));

  // 10^7-point midpoint sum after x = s^2, which removes the 1/sqrt(x) pole.
  const long steps = 10'000'000;
  const double h = 1.0 / steps;
  double riemann = 0.0;
  for (long k = 0; k < steps; ++k) {
    const double s = (k + 0.5) * h;
    riemann += raw_density(1.0, s * s) * 2 * s;
  }
  riemann *= h;
  CHECK_THAT(value, WithinAbs(riemann, 1e-10));
}

TEST_CASE("mp_cdf(y=0.25, x=1) frozen high-precision value") {
  CHECK_THAT(mp_cdf(MPLaw(0.25), 1.0), WithinAbs(0.553390081275336099, 1e-10));
}

TEST_CASE("density integrates to one") {
  for (double y : {0.1, 0.25, 0.5, 0.9, 1.0}) {
    const MPLaw law(y);
    const double mass = mp_integrate_density(law, law.lower_edge(), law.upper_edge(),
                                             [](double) { return 1.0; });
    CHECK_THAT(mass, WithinAbs(1.0, 1e-8));
    const double oracle = oracle_integral(y, law.lower_edge(), law.upper_edge(), [](double) { return 1.0; });
    CHECK_THAT(oracle, WithinAbs(1.0, 1e-8));
  }
}

TEST_CASE("mp_cdf is monotone on dense grids") {
  for (double y : {0.1, 0.5, 1.0}) {
    const MPLaw law(y);
    double prev = 0.0;
    for (int k = 0; k <= 2000; ++k) {
      const double x = -0.1 + 4.3 * k / 2000.0;
      const double F = mp_cdf(law, x);
      CHECK(F >= prev - 1e-12);
      CHECK(F >= 0.0);
      CHECK(F <= 1.0);
      prev = F;
    }
  }
}

TEST_CASE("mp_cdf matches the tanh-sinh oracle across the support") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double y = 0.05 + 0.95 * unit(gen);
    const MPLaw law(y);
    const double x = law.lower_edge() + (law.upper_edge() - law.lower_edge()) * unit(gen);
    const double oracle = oracle_integral(y, law.lower_edge(), x, [](double) { return 1.0; });
    CHECK_THAT(mp_cdf(law, x), WithinAbs(oracle, 1e-10));
  }
}

TEST_CASE("upper_sqrt follows the explicit convention") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> coord(-10.0, 10.0);
  for (int k = 0; k < 1000; ++k) {
    const complex w(coord(gen), coord(gen));
    const complex s = upper_sqrt(w);
    // The textbook formulas cancel badly near the real axis; long double
    // keeps them accurate enough to serve as a reference.
    const long double wr = w.real(), wi = w.imag();
    const long double mod = std::sqrt(wr * wr + wi * wi);
    const double re = static_cast<double>(wi / std::sqrt(2 * (mod - wr)));
    const double im = static_cast<double>(std::fabs(wi) / std::sqrt(2 * (mod + wr)));
    CHECK_THAT(s.real(), WithinAbs(re, 1e-12 * (1 + std::abs(re))));
    CHECK_THAT(s.imag(), WithinAbs(im, 1e-12 * (1 + std::abs(im))));
    CHECK(std::abs(s * s - w) <= 1e-12 * std::abs(w));
    CHECK(s.imag() >= 0.0);
  }
  CHECK(upper_sqrt(complex(-4.0, 0.0)) == complex(0.0, 2.0));
  CHECK(upper_sqrt(complex(4.0, 0.0)) == complex(2.0, 0.0));
  CHECK(upper_sqrt(complex(0.0, 0.0)) == complex(0.0, 0.0));
}

TEST_CASE("mp_stieltjes(y=0.5, i) is the upper root of the quadratic") {
  const double y = 0.5;
  const complex z(0.0, 1.0);
  // y z m^2 + (z + y - 1) m + 1 = 0, solved with the platform sqrt.
  const complex A = y * z, B = z + y - 1.0, C = 1.0;
  const complex disc = std::sqrt(B * B - 4.0 * A * C);
  const complex r1 = (-B + disc) / (2.0 * A), r2 = (-B - disc) / (2.0 * A);
  REQUIRE((r1.imag() > 0) != (r2.imag() > 0));
  const complex expected = r1.imag() > 0 ? r1 : r2;
  const complex m = mp_stieltjes(MPLaw(y), ComplexPoint(0.0, 1.0));
  CHECK(std::abs(m - expected) <= 1e-14);
}

TEST_CASE("mp_stieltjes matches the quadrature oracle") {
  const complex m = mp_stieltjes(MPLaw(0.25), ComplexPoint(1.0, 0.5));
  CHECK(std::abs(m - oracle_stieltjes(0.25, {1.0, 0.5})) <= 1e-8);
  CHECK(std::abs(m - complex(-0.105990789762297253, 1.244355926575659607)) <= 1e-12);

  const complex far = mp_stieltjes(MPLaw(1.0), ComplexPoint(0.0, 1000.0));
  CHECK(std::abs(far + 1.0 / complex(0.0, 1000.0)) <= 1e-5);
  CHECK(std::abs(far - oracle_stieltjes(1.0, {0.0, 1000.0})) <= 1e-10);
}

TEST_CASE("mp_stieltjes rejects the lower half plane") {
  CHECK_THROWS_AS(ComplexPoint(1.0, 0.0), DomainError);
  CHECK_THROWS_AS(ComplexPoint(1.0, -0.5), DomainError);
}

TEST_CASE("companion transform examples") {
  const ComplexPoint i(0.0, 1.0);
  CHECK(std::abs(mp_companion_stieltjes(MPLaw(1.0), i) - mp_stieltjes(MPLaw(1.0), i)) <= 1e-15);

  const complex mc = mp_companion_stieltjes(MPLaw(0.5), i);
  CHECK(std::abs(mp_stieltjes(MPLaw(0.5), i) - 1.0 / (-i.z() * (1.0 + mc))) <= 1e-14);

  const ComplexPoint z(2.0, 0.1);
  const complex expected = -0.75 / z.z() + 0.25 * oracle_stieltjes(0.25, z.z());
  CHECK(std::abs(mp_companion_stieltjes(MPLaw(0.25), z) - expected) <= 1e-8);
  CHECK(std::abs(mp_companion_stieltjes(MPLaw(0.25), z) -
                 complex(-0.650993718582449850, 0.177059143897006272)) <= 1e-12);
}

TEST_CASE("random (y, z): quadratic residual, branch, round trip and modulus bound") {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> ys(0.05, 1.0), us(-5.0, 5.0), vs(1e-3, 10.0);
  for (int k = 0; k < 1000; ++k) {
    const double y = ys(gen);
    const ComplexPoint p(us(gen), vs(gen));
    const complex z = p.z();
    const MPLaw law(y);
    const complex m = mp_stieltjes(law, p);
    CHECK(std::abs(y * z * m * m + (z + y - 1.0) * m + 1.0) <= 1e-10);
    CHECK(m.imag() > 0.0);
    const complex mc = mp_companion_stieltjes(law, p);
    CHECK(std::abs(m + 1.0 / (z * (1.0 + mc))) <= 1e-10);
    CHECK(std::abs(m) <= std::sqrt(2.0) / (std::sqrt(y) * smoothing_scale(y, p.v())));
  }
}

TEST_CASE("Stieltjes inversion recovers the density inside the support") {
  for (double y : {0.25, 0.5, 1.0}) {
    const MPLaw law(y);
    for (double x = law.lower_edge() + 0.1; x <= law.upper_edge() - 0.1; x += 0.05) {
      const double recovered = mp_stieltjes(law, ComplexPoint(x, 1e-6)).imag() / kPi;
      CHECK_THAT(recovered, WithinAbs(mp_pdf(law, x), 1e-3));
    }
  }
}

TEST_CASE("bound context validation") {
  BoundContext ctx;
  CHECK_NOTHROW(ctx.validate());
  ctx.B = 5.0;
  CHECK_THROWS_AS(ctx.validate(), DomainError);
  ctx = {};
  ctx.A = 5.5;
  ctx.B = 6.0;
  CHECK_THROWS_AS(ctx.validate(), DomainError);
  ctx = {};
  ctx.v = 0.0;
  CHECK_THROWS_AS(ctx.validate(), DomainError);
  ctx = {};
  ctx.K2 = 0.0;
  CHECK_THROWS_AS(ctx.validate(), DomainError);
}

TEST_CASE("local smoothing integral matches a nested-quadrature oracle") {
  // Direct double integral int_{-v}^{v} |F(x+u) - F(x)| du with F itself
  // from tanh-sinh on the raw density.
  auto oracle = [](double y, double x, double v) {
    const auto [a, b] = mp_support(y);
    auto F = [&](double t) {
      if (t <= a) return 0.0;
      if (t >= b) return 1.0;
      return oracle_integral(y, a, t, [](double) { return 1.0; });
    };
    const double Fx = F(x);
    boost::math::quadrature::tanh_sinh<double> ts;
    // Split at the kinks of the integrand: u = 0 and the support edges.
    std::vector<double> cuts{-v, 0.0, v};
    for (double e : {a - x, b - x})
      if (e > -v && e < v && e != 0.0) cuts.push_back(e);
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
      total += ts.integrate([&](double u) { return std::abs(F(x + u) - Fx); }, cuts[k], cuts[k + 1], 1e-12);
    return total;
  };
  CHECK_THAT(mp_local_smoothing(MPLaw(0.25), 0.45011, 0.01), WithinRel(oracle(0.25, 0.45011, 0.01), 1e-7));
  CHECK_THAT(mp_local_smoothing(MPLaw(0.5), 0.19583, 0.1), WithinRel(oracle(0.5, 0.19583, 0.1), 1e-7));
  CHECK_THAT(mp_local_smoothing(MPLaw(1.0), 0.02, 0.05), WithinRel(oracle(1.0, 0.02, 0.05), 1e-7));
}

TEST_CASE("smoothing integral examples") {
  const auto s1 = mp_smoothing_integral(MPLaw(0.25), 0.01);
  CHECK_THAT(s1.rhs, WithinRel(11 * std::sqrt(2.5) / (3 * kPi * 0.25) * 1e-4 / 0.6, 1e-14));
  CHECK_THAT(s1.rhs, WithinRel(1.2301e-3, 5e-4));
  // Sup located by golden-section search on the exact integral (mpmath).
  CHECK_THAT(s1.lhs, WithinRel(8.48771787146846e-5, 1e-6));
  CHECK(s1.holds());

  const auto s2 = mp_smoothing_integral(MPLaw(0.5), 0.1);
  CHECK_THAT(s2.lhs, WithinRel(8.71913759947273e-3, 1e-6));
  CHECK_THAT(s2.rhs, WithinRel(0.0663756243359918626, 1e-12));
  CHECK(s2.holds());

  // Bounded density: the integral is at most sup p * v^2.
  for (double y : {0.25, 0.5}) {
    const auto tiny = mp_smoothing_integral(MPLaw(y), 1e-6);
    CHECK(tiny.lhs <= 2e-12);
    CHECK(tiny.holds());
  }
  // At y = 1 the 1/sqrt(x) pole makes it of order v^{3/2} instead.
  const auto pole = mp_smoothing_integral(MPLaw(1.0), 1e-6);
  CHECK(pole.lhs <= 2e-9);
  CHECK(pole.lhs > 2e-12);
  CHECK(pole.holds());
  CHECK_THROWS_AS(mp_smoothing_integral(MPLaw(0.5), 0.0), DomainError);
}
