#include "specdist/ensemble.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numbers>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "specdist/errors.hpp"
#include "specdist/rng.hpp"

namespace specdist {
namespace {

constexpr double kHalfSqrt2 = std::numbers::sqrt2 / 2.0;

std::complex<double> draw(const EntryDistribution& dist, CounterStream& stream) {
  switch (dist.kind) {
    case EntryKind::kRealGaussian:
      return {stream.normal(), 0.0};
    case EntryKind::kComplexGaussian: {
      const auto [g1, g2] = stream.normal_pair();
      return {g1 * kHalfSqrt2, g2 * kHalfSqrt2};
    }
    case EntryKind::kRademacher:
      return {(stream.next() >> 63) ? 1.0 : -1.0, 0.0};
    case EntryKind::kUniformCentered:
      return {std::sqrt(3.0) * (2.0 * stream.uniform() - 1.0), 0.0};
    case EntryKind::kStudentT: {
      const double z = stream.normal();
      const double chi2 = 2.0 * stream.gamma(0.5 * dist.df);
      const double t = z / std::sqrt(chi2 / dist.df);
      return {t * std::sqrt((dist.df - 2.0) / dist.df), 0.0};
    }
  }
  return {};
}

template <typename T>
void put_le(std::ostream& out, T value) {
  auto bytes = std::bit_cast<std::array<char, sizeof(T)>>(value);
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  out.write(bytes.data(), bytes.size());
}

template <typename T>
T get_le(std::istream& in) {
  std::array<char, sizeof(T)> bytes{};
  if (!in.read(bytes.data(), bytes.size())) throw DomainError("truncated matrix dump");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  return std::bit_cast<T>(bytes);
}

}  // namespace

EntryDistribution EntryDistribution::student_t(double df) {
  if (!(df > 2.0)) {
    std::ostringstream msg;
    msg << "student-t needs df > 2 for unit variance, got " << df;
    throw DomainError(msg.str());
  }
  return {EntryKind::kStudentT, df};
}

EntryDistribution EntryDistribution::parse(const std::string& text) {
  if (text == "real-gaussian" || text == "gaussian") return real_gaussian();
  if (text == "complex-gaussian") return complex_gaussian();
  if (text == "rademacher") return rademacher();
  if (text == "uniform-centered") return uniform_centered();
  const std::string prefix = "student-t:";
  if (text.rfind(prefix, 0) == 0) {
    std::size_t used = 0;
    double df = 0.0;
    try {
      df = std::stod(text.substr(prefix.size()), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != text.size() - prefix.size())
      throw DomainError("bad student-t degrees of freedom in '" + text + "'");
    return student_t(df);
  }
  throw DomainError("unknown entry distribution '" + text + "'");
}

std::string EntryDistribution::name() const {
  switch (kind) {
    case EntryKind::kRealGaussian: return "real-gaussian";
    case EntryKind::kComplexGaussian: return "complex-gaussian";
    case EntryKind::kRademacher: return "rademacher";
    case EntryKind::kUniformCentered: return "uniform-centered";
    case EntryKind::kStudentT: {
      std::ostringstream out;
      out << "student-t:" << std::setprecision(17) << df;
      return out.str();
    }
  }
  return "unknown";
}

EntryMatrix sample_entries(const EntryDistribution& dist, int n, int N, std::uint64_t seed) {
  if (n < 1 || N < 1 || n > N) {
    std::ostringstream msg;
    msg << "need 1 <= n <= N, got n=" << n << ", N=" << N;
    throw DomainError(msg.str());
  }
  if (dist.kind == EntryKind::kStudentT && !(dist.df > 2.0))
    throw DomainError("student-t needs df > 2");
  EntryMatrix X;
  X.seed = seed;
  X.distribution = dist;
  X.entries.resize(n, N);
  for (int j = 0; j < N; ++j) {
    for (int i = 0; i < n; ++i) {
      CounterStream stream(mix(seed, static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j)));
      X.entries(i, j) = draw(dist, stream);
    }
  }
  return X;
}

double default_truncation_scale(int N) {
  return std::max(0.5, 2.0 * std::pow(static_cast<double>(N), -0.05));
}

EntryMatrix condition_entries(const EntryMatrix& X, double eta) {
  if (!(eta > 0.0)) {
    std::ostringstream msg;
    msg << "truncation scale eta must be positive, got " << eta;
    throw DomainError(msg.str());
  }
  const double threshold = eta * std::pow(static_cast<double>(X.cols()), 0.25);
  EntryMatrix out = X;
  auto& m = out.entries;
  for (Eigen::Index k = 0; k < m.size(); ++k)
    if (std::abs(m(k)) > threshold) m(k) = 0.0;

  const double count = static_cast<double>(m.size());
  const std::complex<double> mean = m.sum() / count;
  m.array() -= mean;
  const double sigma = std::sqrt(m.squaredNorm() / count);
  if (!(sigma > 0.0)) throw DomainError("conditioning left no variance (all entries truncated)");
  m /= sigma;
  return out;
}

CovarianceMatrix sample_covariance(const EntryMatrix& X) {
  CovarianceMatrix S;
  const double scale = 1.0 / static_cast<double>(X.cols());
  S.entries.setZero(X.rows(), X.rows());
  S.entries.selfadjointView<Eigen::Lower>().rankUpdate(X.entries, scale);
  S.entries.triangularView<Eigen::StrictlyUpper>() = S.entries.adjoint();
  return S;
}

void write_matrix_binary(std::ostream& out, const Eigen::MatrixXcd& m) {
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(m.rows()));
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(m.cols()));
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      put_le<double>(out, m(i, j).real());
      put_le<double>(out, m(i, j).imag());
    }
}

Eigen::MatrixXcd read_matrix_binary(std::istream& in) {
  const auto rows = get_le<std::uint64_t>(in);
  const auto cols = get_le<std::uint64_t>(in);
  if (rows > (1u << 20) || cols > (1u << 24)) throw DomainError("implausible matrix dump header");
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const double re = get_le<double>(in);
      const double im = get_le<double>(in);
      m(i, j) = {re, im};
    }
  return m;
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXcd& m) {
  if (m.size() > 10000) throw DomainError("CSV matrix dump limited to 10^4 entries");
  out << "row,col,re,im\n" << std::setprecision(17);
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      out << i << ',' << j << ',' << m(i, j).real() << ',' << m(i, j).imag() << '\n';
}

}  // namespace specdist
