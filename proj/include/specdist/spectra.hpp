#pragma once

// Eigendecomposition of S_n, projection weights |d_i|^2 = |u_i^* x|^2, the
// ESD / VESD step distributions, empirical Stieltjes transforms and the
// bridge process X_n(t).

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "specdist/ensemble.hpp"
#include "specdist/mp_law.hpp"

namespace specdist {

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // ascending
  Eigen::MatrixXcd eigenvectors;    // column k pairs with eigenvalues[k]
};

// Dense Hermitian eigensolver. Real-valued input takes the real symmetric
// path. Throws NumericError if the solver does not converge.
EigenDecomposition hermitian_eig(const Eigen::MatrixXcd& S);
inline EigenDecomposition hermitian_eig(const CovarianceMatrix& S) { return hermitian_eig(S.entries); }

// Unit vector x_n used to project the eigenvectors.
struct DirectionSpec {
  enum class Kind { kBasis, kUniform, kRandomUnit, kExplicit };

  Kind kind = Kind::kBasis;
  int index = 1;                             // kBasis, 1-based
  std::uint64_t seed = 0;                    // kRandomUnit
  std::vector<std::complex<double>> values;  // kExplicit

  static DirectionSpec basis(int k) { return {Kind::kBasis, k, 0, {}}; }
  static DirectionSpec uniform() { return {Kind::kUniform, 0, 0, {}}; }
  static DirectionSpec random_unit(std::uint64_t seed) { return {Kind::kRandomUnit, 0, seed, {}}; }
  static DirectionSpec explicit_vector(std::vector<std::complex<double>> v) {
    return {Kind::kExplicit, 0, 0, std::move(v)};
  }

  // "basis:<k>", "uniform", "random:<seed>", "explicit:<x1>,<x2>,..." (reals).
  static DirectionSpec parse(const std::string& text);
  std::string to_string() const;

  // Resolves to a unit vector of dimension n. Random directions are
  // normalized i.i.d. Gaussians over the field of the ensemble (complex when
  // `complex_field`), i.e. Haar on the matching sphere. Explicit vectors are
  // normalized. Throws DomainError on a dimension mismatch or zero vector.
  Eigen::VectorXcd resolve(Eigen::Index n, bool complex_field) const;
};

// weights_k = |u_k^* x|^2. Throws DomainError on a dimension mismatch.
std::vector<double> projection_weights(const Eigen::MatrixXcd& eigenvectors,
                                       const Eigen::VectorXcd& x);

// Right-continuous step CDF with sorted, tie-merged jump locations.
class StepDistribution {
 public:
  StepDistribution() = default;

  // Sorts (stably) by location and merges exact ties by summing masses.
  // Throws DomainError on negative masses or total mass above 1 + 1e-10.
  static StepDistribution from_jumps(std::span<const double> locations,
                                     std::span<const double> masses);

  double operator()(double x) const;  // F(x)
  double left_limit(double x) const;  // F(x-)
  double total_mass() const noexcept { return cumulative_.empty() ? 0.0 : cumulative_.back(); }

  std::size_t size() const noexcept { return locations_.size(); }
  bool empty() const noexcept { return locations_.empty(); }
  const std::vector<double>& locations() const noexcept { return locations_; }
  const std::vector<double>& masses() const noexcept { return masses_; }
  // cumulative()[i] = F(locations()[i]).
  const std::vector<double>& cumulative() const noexcept { return cumulative_; }

  friend bool operator==(const StepDistribution&, const StepDistribution&) = default;

 private:
  std::vector<double> locations_;
  std::vector<double> masses_;
  std::vector<double> cumulative_;
};

// Mass 1/n at each eigenvalue.
StepDistribution make_esd(std::span<const double> eigenvalues);

// Mass weights_i at eigenvalue_i. Throws DomainError if the lengths differ or
// the weights do not sum to 1 within 1e-8.
StepDistribution make_vesd(std::span<const double> eigenvalues, std::span<const double> weights);

// sum_i mass_i / (lambda_i - z).
complex empirical_stieltjes(const StepDistribution& dist, ComplexPoint z);

// -(1 - y_n)/z + y_n m_n. Throws DomainError unless y_n in (0, 1].
complex companion_empirical_stieltjes(complex m_n, double y_n, ComplexPoint z);

// X_n(t) = sqrt(n/2) sum_{j <= floor(nt)} (w_j - 1/n). Throws DomainError for
// t outside [0, 1].
double bridge_process(std::span<const double> weights, double t);

// T_n = sqrt(n/2) sup_x |H(x) - F(x)|, exact over the shared jump set. Throws
// DomainError if H and F do not jump at the same locations.
double haar_statistic(const StepDistribution& H, const StepDistribution& F, std::size_t n);

struct Spectrum {
  std::vector<double> eigenvalues;  // ascending
  std::vector<double> weights;      // |d_i|^2, same order
  Eigen::VectorXcd direction;
  std::string direction_label;
  Eigen::Index n = 0;
  Eigen::Index N = 0;
  std::uint64_t seed = 0;

  double y_n() const noexcept { return static_cast<double>(n) / static_cast<double>(N); }
  StepDistribution esd() const { return make_esd(eigenvalues); }
  StepDistribution vesd() const { return make_vesd(eigenvalues, weights); }
};

// Covariance, eigendecomposition and projection of one data matrix.
Spectrum compute_spectrum(const EntryMatrix& X, const DirectionSpec& direction);

// "# n=..,N=..,seed=..,direction=..,dist=.." comment line, then
// "index,eigenvalue,weight" rows (1-based index, 17 significant digits).
void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum, const std::string& dist_name);

}  // namespace specdist
