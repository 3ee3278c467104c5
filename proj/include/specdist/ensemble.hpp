#pragma once

// Seeded i.i.d. entry matrices, the truncation / centralization / rescaling
// conditioning pipeline, and sample covariance formation.

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>

#include <Eigen/Dense>

namespace specdist {

enum class EntryKind { kRealGaussian, kComplexGaussian, kRademacher, kUniformCentered, kStudentT };

// Entry law standardized to mean 0 and E|X|^2 = 1.
struct EntryDistribution {
  EntryKind kind = EntryKind::kComplexGaussian;
  double df = 0.0;  // student-t only, df > 2

  static EntryDistribution real_gaussian() { return {EntryKind::kRealGaussian, 0.0}; }
  static EntryDistribution complex_gaussian() { return {EntryKind::kComplexGaussian, 0.0}; }
  static EntryDistribution rademacher() { return {EntryKind::kRademacher, 0.0}; }
  static EntryDistribution uniform_centered() { return {EntryKind::kUniformCentered, 0.0}; }
  static EntryDistribution student_t(double df);

  // Accepts "real-gaussian", "complex-gaussian", "rademacher",
  // "uniform-centered" and "student-t:<df>".
  static EntryDistribution parse(const std::string& text);
  std::string name() const;
  bool is_complex() const noexcept { return kind == EntryKind::kComplexGaussian; }

  friend bool operator==(const EntryDistribution&, const EntryDistribution&) = default;
};

// n x N data matrix X with n <= N.
struct EntryMatrix {
  Eigen::MatrixXcd entries;
  std::uint64_t seed = 0;
  EntryDistribution distribution;

  Eigen::Index rows() const noexcept { return entries.rows(); }
  Eigen::Index cols() const noexcept { return entries.cols(); }
  // True when every entry has zero imaginary part (real ensembles).
  bool is_real() const { return entries.imag().isZero(0.0); }
};

// S = X X^* / N, Hermitian n x n.
struct CovarianceMatrix {
  Eigen::MatrixXcd entries;
  Eigen::Index order() const noexcept { return entries.rows(); }
};

// Entry (i, j) is drawn from CounterStream(mix(seed, i, j)), so identical
// arguments reproduce the matrix bit for bit independently of fill order.
// Throws DomainError unless 1 <= n <= N.
EntryMatrix sample_entries(const EntryDistribution& dist, int n, int N, std::uint64_t seed);

// eta_N = max(0.5, 2 N^{-1/20}).
double default_truncation_scale(int N);

// Zero every entry with |X_ij| > eta N^{1/4}, subtract the empirical mean of
// the result, then divide by the empirical standard deviation. Throws
// DomainError for eta <= 0 and when the standard deviation vanishes.
EntryMatrix condition_entries(const EntryMatrix& X, double eta);

CovarianceMatrix sample_covariance(const EntryMatrix& X);

// Binary dump: u64 rows, u64 cols (little-endian), then rows*cols pairs of
// little-endian f64 (re, im) in column-major order.
void write_matrix_binary(std::ostream& out, const Eigen::MatrixXcd& m);
Eigen::MatrixXcd read_matrix_binary(std::istream& in);

// CSV dump "row,col,re,im" (0-based indices); refuses matrices with more
// than 10^4 entries.
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXcd& m);

}  // namespace specdist
