#include "specdist/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <sstream>

#include "specdist/errors.hpp"
#include "specdist/rng.hpp"

namespace specdist {

EigenDecomposition hermitian_eig(const Eigen::MatrixXcd& S) {
  if (S.rows() != S.cols()) throw DomainError("eigendecomposition needs a square matrix");
  EigenDecomposition out;
  Eigen::VectorXd values;
  if (S.imag().isZero(0.0)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(S.real());
    if (solver.info() != Eigen::Success) throw NumericError("symmetric eigensolver did not converge");
    values = solver.eigenvalues();
    out.eigenvectors = solver.eigenvectors().cast<std::complex<double>>();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(S);
    if (solver.info() != Eigen::Success) throw NumericError("Hermitian eigensolver did not converge");
    values = solver.eigenvalues();
    out.eigenvectors = solver.eigenvectors();
  }
  out.eigenvalues.assign(values.data(), values.data() + values.size());
  return out;
}

DirectionSpec DirectionSpec::parse(const std::string& text) {
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string tail = colon == std::string::npos ? std::string() : text.substr(colon + 1);
  auto bad = [&] { return DomainError("bad direction '" + text + "'"); };
  try {
    std::size_t used = 0;
    if (head == "uniform" && colon == std::string::npos) return uniform();
    if (head == "basis") {
      const int k = std::stoi(tail, &used);
      if (used != tail.size() || k < 1) throw bad();
      return basis(k);
    }
    if (head == "random" || head == "random-unit") {
      const std::uint64_t seed = std::stoull(tail, &used);
      if (used != tail.size()) throw bad();
      return random_unit(seed);
    }
    if (head == "explicit") {
      std::vector<std::complex<double>> values;
      std::stringstream stream(tail);
      std::string item;
      while (std::getline(stream, item, ',')) {
        values.emplace_back(std::stod(item, &used), 0.0);
        if (used != item.size()) throw bad();
      }
      if (values.empty()) throw bad();
      return explicit_vector(std::move(values));
    }
  } catch (const std::logic_error&) {
    throw bad();
  }
  throw bad();
}

std::string DirectionSpec::to_string() const {
  std::ostringstream out;
  switch (kind) {
    case Kind::kBasis: out << "basis:" << index; break;
    case Kind::kUniform: out << "uniform"; break;
    case Kind::kRandomUnit: out << "random:" << seed; break;
    case Kind::kExplicit: {
      out << "explicit:" << std::setprecision(17);
      for (std::size_t i = 0; i < values.size(); ++i) out << (i ? "," : "") << values[i].real();
      break;
    }
  }
  return out.str();
}

Eigen::VectorXcd DirectionSpec::resolve(Eigen::Index n, bool complex_field) const {
  if (n < 1) throw DomainError("direction dimension must be positive");
  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(n);
  switch (kind) {
    case Kind::kBasis:
      if (index < 1 || index > n) {
        std::ostringstream msg;
        msg << "basis index " << index << " outside 1.." << n;
        throw DomainError(msg.str());
      }
      x(index - 1) = 1.0;
      return x;
    case Kind::kUniform:
      x.setConstant(1.0 / std::sqrt(static_cast<double>(n)));
      return x;
    case Kind::kRandomUnit: {
      CounterStream stream(mix(seed, 0x6469726563ULL));
      for (Eigen::Index i = 0; i < n; ++i) {
        if (complex_field) {
          const auto [g1, g2] = stream.normal_pair();
          x(i) = {g1, g2};
        } else {
          x(i) = stream.normal();
        }
      }
      break;
    }
    case Kind::kExplicit:
      if (static_cast<Eigen::Index>(values.size()) != n) {
        std::ostringstream msg;
        msg << "explicit direction has " << values.size() << " entries, expected " << n;
        throw DomainError(msg.str());
      }
      for (Eigen::Index i = 0; i < n; ++i) x(i) = values[i];
      break;
  }
  const double norm = x.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw DomainError("direction vector has zero norm");
  return x / norm;
}

std::vector<double> projection_weights(const Eigen::MatrixXcd& eigenvectors,
                                       const Eigen::VectorXcd& x) {
  if (eigenvectors.rows() != x.size()) {
    std::ostringstream msg;
    msg << "direction has dimension " << x.size() << ", eigenvectors have " << eigenvectors.rows();
    throw DomainError(msg.str());
  }
  const Eigen::VectorXcd d = eigenvectors.adjoint() * x;
  std::vector<double> weights(d.size());
  for (Eigen::Index k = 0; k < d.size(); ++k) weights[k] = std::norm(d(k));
  return weights;
}

StepDistribution StepDistribution::from_jumps(std::span<const double> locations,
                                              std::span<const double> masses) {
  if (locations.size() != masses.size())
    throw DomainError("step distribution needs one mass per location");
  std::vector<std::size_t> order(locations.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return locations[i] < locations[j]; });
  StepDistribution out;
  double running = 0.0;
  for (std::size_t k : order) {
    if (!(masses[k] >= 0.0) || !std::isfinite(locations[k]))
      throw DomainError("step distribution needs finite locations and nonnegative masses");
    running += masses[k];
    if (!out.locations_.empty() && out.locations_.back() == locations[k]) {
      out.masses_.back() += masses[k];
      out.cumulative_.back() = running;
    } else {
      out.locations_.push_back(locations[k]);
      out.masses_.push_back(masses[k]);
      out.cumulative_.push_back(running);
    }
  }
  if (running > 1.0 + 1e-10) {
    std::ostringstream msg;
    msg << "step distribution has total mass " << std::setprecision(17) << running;
    throw DomainError(msg.str());
  }
  return out;
}

double StepDistribution::operator()(double x) const {
  const auto it = std::upper_bound(locations_.begin(), locations_.end(), x);
  if (it == locations_.begin()) return 0.0;
  return cumulative_[static_cast<std::size_t>(it - locations_.begin()) - 1];
}

double StepDistribution::left_limit(double x) const {
  const auto it = std::lower_bound(locations_.begin(), locations_.end(), x);
  if (it == locations_.begin()) return 0.0;
  return cumulative_[static_cast<std::size_t>(it - locations_.begin()) - 1];
}

StepDistribution make_esd(std::span<const double> eigenvalues) {
  const std::vector<double> masses(eigenvalues.size(),
                                   1.0 / static_cast<double>(eigenvalues.size()));
  return StepDistribution::from_jumps(eigenvalues, masses);
}

StepDistribution make_vesd(std::span<const double> eigenvalues, std::span<const double> weights) {
  if (eigenvalues.size() != weights.size()) throw DomainError("VESD needs one weight per eigenvalue");
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-8) {
    std::ostringstream msg;
    msg << "VESD weights sum to " << std::setprecision(17) << total << ", expected 1";
    throw DomainError(msg.str());
  }
  return StepDistribution::from_jumps(eigenvalues, weights);
}

complex empirical_stieltjes(const StepDistribution& dist, ComplexPoint z) {
  complex sum = 0.0;
  const auto& loc = dist.locations();
  const auto& mass = dist.masses();
  for (std::size_t i = 0; i < loc.size(); ++i) sum += mass[i] / (loc[i] - z.z());
  return sum;
}

complex companion_empirical_stieltjes(complex m_n, double y_n, ComplexPoint z) {
  if (!(y_n > 0.0 && y_n <= 1.0)) throw DomainError("companion transform needs y_n in (0, 1]");
  return -(1.0 - y_n) / z.z() + y_n * m_n;
}

double bridge_process(std::span<const double> weights, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("bridge time must lie in [0, 1]");
  const std::size_t n = weights.size();
  const auto steps = std::min(n, static_cast<std::size_t>(std::floor(static_cast<double>(n) * t)));
  const double uniform = 1.0 / static_cast<double>(n);
  double sum = 0.0;
  for (std::size_t j = 0; j < steps; ++j) sum += weights[j] - uniform;
  return std::sqrt(0.5 * static_cast<double>(n)) * sum;
}

double haar_statistic(const StepDistribution& H, const StepDistribution& F, std::size_t n) {
  if (H.locations() != F.locations())
    throw DomainError("Haar statistic needs H and F built on the same eigenvalues");
  // With identical jump sets both one-sided limits are right values at some
  // jump (or 0 at -infinity), so the sup is a max over the jumps.
  double sup = 0.0;
  for (std::size_t i = 0; i < H.size(); ++i)
    sup = std::max(sup, std::abs(H.cumulative()[i] - F.cumulative()[i]));
  return std::sqrt(0.5 * static_cast<double>(n)) * sup;
}

Spectrum compute_spectrum(const EntryMatrix& X, const DirectionSpec& direction) {
  const EigenDecomposition eig = hermitian_eig(sample_covariance(X));
  Spectrum out;
  out.n = X.rows();
  out.N = X.cols();
  out.seed = X.seed;
  out.direction = direction.resolve(X.rows(), !X.is_real());
  out.direction_label = direction.to_string();
  out.eigenvalues = eig.eigenvalues;
  out.weights = projection_weights(eig.eigenvectors, out.direction);
  return out;
}

void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum, const std::string& dist_name) {
  out << "# n=" << spectrum.n << ",N=" << spectrum.N << ",seed=" << spectrum.seed
      << ",direction=" << spectrum.direction_label << ",dist=" << dist_name << '\n';
  out << "index,eigenvalue,weight\n" << std::setprecision(17);
  for (std::size_t i = 0; i < spectrum.eigenvalues.size(); ++i)
    out << i + 1 << ',' << spectrum.eigenvalues[i] << ',' << spectrum.weights[i] << '\n';
}

}  // namespace specdist
