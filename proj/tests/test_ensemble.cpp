#include <catch_amalgamated.hpp>

#include <bit>
#include <cmath>
#include <sstream>

#include "specdist/ensemble.hpp"
#include "specdist/errors.hpp"
#include "specdist/rng.hpp"
#include "specdist/spectra.hpp"

using namespace specdist;
using Catch::Matchers::WithinAbs;

namespace {

bool bit_identical(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    if (std::bit_cast<std::uint64_t>(a(k).real()) != std::bit_cast<std::uint64_t>(b(k).real())) return false;
    if (std::bit_cast<std::uint64_t>(a(k).imag()) != std::bit_cast<std::uint64_t>(b(k).imag())) return false;
  }
  return true;
}

EntryMatrix from_values(Eigen::MatrixXcd values) {
  EntryMatrix X;
  X.entries = std::move(values);
  X.distribution = EntryDistribution::real_gaussian();
  return X;
}

}  // namespace

TEST_CASE("mix64 is one SplitMix64 step") {
  // First outputs of the reference SplitMix64 generator seeded with 0.
  CHECK(mix64(0) == 0xe220a8397b1dcdafULL);
  CHECK(mix64(0x9e3779b97f4a7c15ULL) == 0x6e789e6aa1b965f4ULL);
  CounterStream s(0);
  CHECK(s.next() == 0xe220a8397b1dcdafULL);
  CHECK(s.next() == 0x6e789e6aa1b965f4ULL);
}

TEST_CASE("distribution names round trip") {
  for (const char* name : {"real-gaussian", "complex-gaussian", "rademacher", "uniform-centered", "student-t:5"}) {
    CHECK(EntryDistribution::parse(name).name() == name);
  }
  CHECK(EntryDistribution::parse("student-t:5").df == 5.0);
  CHECK_THROWS_AS(EntryDistribution::parse("student-t:2"), DomainError);
  CHECK_THROWS_AS(EntryDistribution::parse("student-t:x"), DomainError);
  CHECK_THROWS_AS(EntryDistribution::parse("cauchy"), DomainError);
}

TEST_CASE("rademacher entries are +-1") {
  for (std::uint64_t seed : {0ULL, 1ULL, 99ULL}) {
    const auto X = sample_entries(EntryDistribution::rademacher(), 2, 3, seed);
    REQUIRE(X.rows() == 2);
    REQUIRE(X.cols() == 3);
    for (Eigen::Index k = 0; k < X.entries.size(); ++k) {
      CHECK(X.entries(k).imag() == 0.0);
      CHECK(std::abs(X.entries(k).real()) == 1.0);
    }
  }
}

TEST_CASE("identical arguments give bit-identical matrices") {
  const auto A = sample_entries(EntryDistribution::complex_gaussian(), 100, 400, 7);
  const auto B = sample_entries(EntryDistribution::complex_gaussian(), 100, 400, 7);
  CHECK(bit_identical(A.entries, B.entries));
  const auto C = sample_entries(EntryDistribution::complex_gaussian(), 100, 400, 8);
  CHECK_FALSE(bit_identical(A.entries, C.entries));
}

TEST_CASE("entry (i, j) depends only on (seed, i, j)") {
  // A smaller matrix is the top-left block of a larger one with the same seed.
  const auto big = sample_entries(EntryDistribution::student_t(5), 6, 9, 3);
  const auto small = sample_entries(EntryDistribution::student_t(5), 4, 5, 3);
  CHECK(bit_identical(small.entries, big.entries.topLeftCorner(4, 5)));
}

TEST_CASE("sample_entries domain checks") {
  CHECK_THROWS_AS(sample_entries(EntryDistribution::real_gaussian(), 5, 4, 1), DomainError);
  CHECK_THROWS_AS(sample_entries(EntryDistribution::real_gaussian(), 0, 4, 1), DomainError);
  CHECK_NOTHROW(sample_entries(EntryDistribution::real_gaussian(), 4, 4, 1));
}

TEST_CASE("entries are standardized") {
  const double n = 200, N = 800;
  const auto X = sample_entries(EntryDistribution::real_gaussian(), 200, 800, 1);
  CHECK(std::abs(X.entries.sum().real() / (n * N)) <= 4.0 / std::sqrt(n * N));
  CHECK(X.is_real());

  for (auto dist : {EntryDistribution::complex_gaussian(), EntryDistribution::rademacher(),
                    EntryDistribution::uniform_centered(), EntryDistribution::student_t(6)}) {
    const auto Y = sample_entries(dist, 200, 800, 5);
    const double second = Y.entries.squaredNorm() / (n * N);
    CAPTURE(dist.name());
    CHECK(std::abs(Y.entries.sum()) / (n * N) <= 4.0 / std::sqrt(n * N));
    // Student-t(6) has a heavy fourth moment, so its variance estimate is noisier.
    CHECK_THAT(second, WithinAbs(1.0, dist.kind == EntryKind::kStudentT ? 0.05 : 0.01));
    CHECK(Y.is_real() == !dist.is_complex());
  }
  const auto Z = sample_entries(EntryDistribution::complex_gaussian(), 200, 800, 5);
  CHECK_THAT(Z.entries.real().squaredNorm() / (n * N), WithinAbs(0.5, 0.01));
}

TEST_CASE("default truncation scale") {
  CHECK_THAT(default_truncation_scale(1), WithinAbs(2.0, 1e-15));
  CHECK_THAT(default_truncation_scale(1024), WithinAbs(2.0 * std::pow(1024.0, -0.05), 1e-15));
  CHECK(default_truncation_scale(1 << 30) == 2.0 * std::pow(double(1 << 30), -0.05));
  double prev = 3.0;
  for (int N = 1; N < 1'000'000; N *= 3) {
    const double eta = default_truncation_scale(N);
    CHECK(eta <= prev);
    CHECK(eta >= 0.5);
    prev = eta;
  }
}

TEST_CASE("conditioning zeroes an out-of-range entry before centering") {
  // N = 16 so the threshold eta N^{1/4} equals 3 for eta = 1.5.
  const auto base = sample_entries(EntryDistribution::rademacher(), 4, 16, 2);
  EntryMatrix X = base;
  X.entries(1, 5) = 10.0;
  const auto out = condition_entries(X, 1.5);

  Eigen::MatrixXcd expected = base.entries;
  expected(1, 5) = 0.0;
  const std::complex<double> mean = expected.mean();
  expected.array() -= mean;
  expected /= std::sqrt(expected.squaredNorm() / expected.size());
  CHECK((out.entries - expected).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("conditioning output has empirical mean 0 and variance 1") {
  const auto X = sample_entries(EntryDistribution::student_t(3), 50, 300, 11);
  const auto out = condition_entries(X, default_truncation_scale(300));
  CHECK(std::abs(out.entries.mean()) <= 1e-14);
  CHECK_THAT(out.entries.squaredNorm() / out.entries.size(), WithinAbs(1.0, 1e-12));
}

TEST_CASE("conditioning is the identity on standardized in-range data") {
  Eigen::MatrixXcd values(2, 4);
  values << 1, -1, 1, -1, -1, 1, -1, 1;
  const auto out = condition_entries(from_values(values), 1.0);
  CHECK((out.entries - values).cwiseAbs().maxCoeff() <= 1e-12);

  const auto X = sample_entries(EntryDistribution::complex_gaussian(), 30, 90, 4);
  const auto once = condition_entries(X, 5.0);
  const auto twice = condition_entries(once, 5.0);
  CHECK((once.entries - twice.entries).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("conditioning degenerate and invalid inputs") {
  // Threshold 0.5 * 4^{1/4} < 1 removes every rademacher entry.
  const auto X = sample_entries(EntryDistribution::rademacher(), 3, 4, 1);
  CHECK_THROWS_AS(condition_entries(X, 0.5), DomainError);
  CHECK_THROWS_AS(condition_entries(X, 0.0), DomainError);
  CHECK_THROWS_AS(condition_entries(X, -1.0), DomainError);
}

TEST_CASE("sample covariance examples") {
  Eigen::MatrixXcd one(1, 1);
  one << 2.0;
  const auto S1 = sample_covariance(from_values(one));
  CHECK(S1.order() == 1);
  CHECK(S1.entries(0, 0) == std::complex<double>(4.0, 0.0));

  Eigen::MatrixXcd orth(2, 4);
  orth << 1, 1, 1, 1, 1, -1, 1, -1;
  const auto S2 = sample_covariance(from_values(orth));
  CHECK(std::abs(S2.entries(0, 1)) == 0.0);
  CHECK(std::abs(S2.entries(1, 0)) == 0.0);
  CHECK(S2.entries(0, 0).real() == 1.0);
  CHECK(S2.entries(1, 1).real() == 1.0);
}

TEST_CASE("sample covariance is Hermitian PSD with the trace identity") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto X = sample_entries(EntryDistribution::complex_gaussian(), 8, 32, seed);
    const auto S = sample_covariance(X);
    const double norm = S.entries.norm();
    CHECK((S.entries - S.entries.adjoint()).norm() <= 1e-13 * norm);
    CHECK_THAT(S.entries.trace().real(), WithinAbs(X.entries.squaredNorm() / 32.0, 1e-12 * norm));
    CHECK(std::abs(S.entries.trace().imag()) <= 1e-13 * norm);
    const auto eig = hermitian_eig(S);
    CHECK(eig.eigenvalues.front() >= -1e-12);
  }
}

TEST_CASE("extreme eigenvalues approach the support edges") {
  double lmax = 0.0, lmin = 0.0;
  const int seeds = 20;
  for (int s = 0; s < seeds; ++s) {
    const auto X = sample_entries(EntryDistribution::complex_gaussian(), 512, 2048, 1000 + s);
    const auto eig = hermitian_eig(sample_covariance(X));
    lmax += eig.eigenvalues.back() / seeds;
    lmin += eig.eigenvalues.front() / seeds;
  }
  CHECK_THAT(lmax, WithinAbs(2.25, 0.15));
  CHECK_THAT(lmin, WithinAbs(0.25, 0.15));
}

TEST_CASE("binary matrix dump round trips bit for bit") {
  const auto X = sample_entries(EntryDistribution::complex_gaussian(), 5, 7, 9);
  std::stringstream buf;
  write_matrix_binary(buf, X.entries);
  CHECK(buf.str().size() == 16 + 5 * 7 * 16);
  // Little-endian header: rows then cols.
  CHECK(static_cast<unsigned char>(buf.str()[0]) == 5);
  CHECK(static_cast<unsigned char>(buf.str()[8]) == 7);
  const auto back = read_matrix_binary(buf);
  CHECK(bit_identical(back, X.entries));

  std::stringstream truncated(buf.str().substr(0, 40));
  CHECK_THROWS_AS(read_matrix_binary(truncated), DomainError);
}

TEST_CASE("csv matrix dump") {
  Eigen::MatrixXcd m(1, 2);
  m << std::complex<double>(1.5, -2.0), 3.0;
  std::ostringstream out;
  write_matrix_csv(out, m);
  CHECK(out.str() == "row,col,re,im\n0,0,1.5,-2\n0,1,3,0\n");
  Eigen::MatrixXcd big = Eigen::MatrixXcd::Zero(101, 100);
  std::ostringstream sink;
  CHECK_THROWS_AS(write_matrix_csv(sink, big), DomainError);
}
