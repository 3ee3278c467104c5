#pragma once

// Monte Carlo sweeps over sample sizes: pathwise and expected VESD distances
// to the Marcenko-Pastur law, fitted log-log rates, and the Haar diagnostic.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "specdist/ensemble.hpp"
#include "specdist/metrics.hpp"
#include "specdist/spectra.hpp"

namespace specdist {

enum class Metric { kVesdExpected, kVesdPathwise, kEsd };

Metric parse_metric(const std::string& text);  // "vesd-expected" | "vesd-pathwise" | "esd"
std::string metric_name(Metric metric);

struct ExperimentConfig {
  EntryDistribution distribution = EntryDistribution::complex_gaussian();
  double y = 0.25;                // n = round(y N)
  std::vector<int> grid;          // ascending sample sizes N
  int replications = 100;
  DirectionSpec direction = DirectionSpec::basis(1);
  std::uint64_t base_seed = 0;
  bool condition = false;
  std::optional<double> eta;      // default_truncation_scale(N) when unset
  Metric metric = Metric::kVesdPathwise;

  // Checks y in (0, 1], R >= 1, a nonempty strictly ascending grid and that
  // every N gives 1 <= n <= N. Throws DomainError.
  void validate() const;
};

// Seed of replication r at sample size N: mix(base_seed, N, r) (see rng.hpp).
std::uint64_t replication_seed(std::uint64_t base_seed, int N, int r);

// n = round(y N).
int dimension_for(double y, int N);

struct PointStats {
  int N = 0;
  int n = 0;
  double y_n = 0.0;
  double a = 0.0;                  // (1 - sqrt y_n)^2
  std::vector<double> distances;   // per replication, in r order
  std::vector<std::uint64_t> seeds;
  double mean = 0.0;
  double median = 0.0;
  double q05 = 0.0;
  double q95 = 0.0;
  double statistic = 0.0;          // value entering the rate fit
  double wallclock_ms = 0.0;
};

struct RateReport {
  ExperimentConfig config;
  std::vector<PointStats> points;
  std::optional<RateFit> fit;      // present when >= 3 points completed
  double target_exponent = 0.0;
  bool complete = true;
  std::string error;               // first failure when !complete
};

struct RunOptions {
  unsigned threads = 0;  // 0 = hardware concurrency
  std::function<void(const PointStats&)> on_point;
};

// Linear-interpolation quantile (p in [0, 1]) of unsorted data.
double quantile(std::vector<double> values, double p);

// Distances of each replication's VESD (or ESD for Metric::kEsd) to F_{y_n};
// the median per N enters the fit.
RateReport run_pathwise_sweep(const ExperimentConfig& cfg, const RunOptions& options = {});

// Per N, the R VESDs are averaged on the union of their jumps and the
// distance of that average to F_{y_n} enters the fit. Per-replication
// pathwise distances are kept in PointStats::distances.
RateReport run_expected_sweep(const ExperimentConfig& cfg, const RunOptions& options = {});

// Dispatches on cfg.metric.
RateReport run_sweep(const ExperimentConfig& cfg, const RunOptions& options = {});

struct HaarResult {
  int N = 0;
  int n = 0;
  std::vector<double> statistics;  // T_n per replication
  double ks_vs_kolmogorov = 0.0;
};

// T_n = haar_statistic(VESD, ESD, n) for R >= 50 replications at the single
// sample size cfg.grid (exactly one entry), compared with the Kolmogorov law.
HaarResult run_haar_experiment(const ExperimentConfig& cfg, const RunOptions& options = {});

}  // namespace specdist
