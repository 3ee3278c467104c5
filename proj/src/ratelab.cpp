#include "specdist/ratelab.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <numeric>
#include <sstream>
#include <thread>

#include "specdist/errors.hpp"
#include "specdist/rng.hpp"

namespace specdist {
namespace {

// Runs body(r) for r in [0, count) on up to `threads` workers. Each index is
// processed exactly once; the exception of the lowest failing index wins.
void parallel_for(int count, unsigned threads, const std::function<void(int)>& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max(count, 1)));
  std::vector<std::exception_ptr> failures(count);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int r = next++; r < count; r = next++) {
      try {
        body(r);
      } catch (...) {
        failures[r] = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& failure : failures)
    if (failure) std::rethrow_exception(failure);
}

struct Replicate {
  std::vector<double> eigenvalues;
  std::vector<double> weights;
};

Replicate replicate(const ExperimentConfig& cfg, int n, int N, std::uint64_t seed) {
  EntryMatrix X = sample_entries(cfg.distribution, n, N, seed);
  if (cfg.condition) X = condition_entries(X, cfg.eta.value_or(default_truncation_scale(N)));
  Spectrum spectrum = compute_spectrum(X, cfg.direction);
  return {std::move(spectrum.eigenvalues), std::move(spectrum.weights)};
}

PointStats begin_point(const ExperimentConfig& cfg, int N) {
  PointStats point;
  point.N = N;
  point.n = dimension_for(cfg.y, N);
  point.y_n = static_cast<double>(point.n) / N;
  point.a = mp_support(point.y_n).first;
  point.seeds.resize(cfg.replications);
  for (int r = 0; r < cfg.replications; ++r) point.seeds[r] = replication_seed(cfg.base_seed, N, r);
  return point;
}

void summarize(PointStats& point) {
  const auto& d = point.distances;
  point.mean = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(d.size());
  point.median = quantile(d, 0.5);
  point.q05 = quantile(d, 0.05);
  point.q95 = quantile(d, 0.95);
}

double target_for(Metric metric) {
  switch (metric) {
    case Metric::kVesdPathwise: return -0.25;
    case Metric::kVesdExpected: return -0.5;
    case Metric::kEsd: return -0.5;
  }
  return 0.0;
}

template <typename PointFn>
RateReport sweep(const ExperimentConfig& cfg, const RunOptions& options, PointFn&& compute) {
  cfg.validate();
  RateReport report;
  report.config = cfg;
  report.target_exponent = target_for(cfg.metric);
  for (int N : cfg.grid) {
    const auto start = std::chrono::steady_clock::now();
    PointStats point = begin_point(cfg, N);
    try {
      compute(point);
    } catch (const NumericError& e) {
      report.complete = false;
      report.error = e.what();
      break;
    }
    summarize(point);
    point.wallclock_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    report.points.push_back(std::move(point));
    if (options.on_point) options.on_point(report.points.back());
  }
  if (report.complete && report.points.size() >= 3) {
    std::vector<std::pair<double, double>> pairs;
    for (const auto& p : report.points) pairs.emplace_back(p.N, p.statistic);
    try {
      report.fit = rate_fit(pairs);
    } catch (const DomainError& e) {
      report.error = e.what();
    }
  }
  return report;
}

}  // namespace

Metric parse_metric(const std::string& text) {
  if (text == "vesd-expected") return Metric::kVesdExpected;
  if (text == "vesd-pathwise") return Metric::kVesdPathwise;
  if (text == "esd") return Metric::kEsd;
  throw DomainError("unknown metric '" + text + "'");
}

std::string metric_name(Metric metric) {
  switch (metric) {
    case Metric::kVesdExpected: return "vesd-expected";
    case Metric::kVesdPathwise: return "vesd-pathwise";
    case Metric::kEsd: return "esd";
  }
  return "unknown";
}

int dimension_for(double y, int N) { return static_cast<int>(std::lround(y * N)); }

void ExperimentConfig::validate() const {
  std::ostringstream msg;
  if (!(y > 0.0 && y <= 1.0)) {
    msg << "target ratio y must lie in (0, 1], got " << y;
  } else if (replications < 1) {
    msg << "need at least one replication, got " << replications;
  } else if (grid.empty()) {
    msg << "sample-size grid is empty";
  } else if (eta && !(*eta > 0.0)) {
    msg << "truncation scale eta must be positive, got " << *eta;
  } else {
    for (std::size_t k = 0; k < grid.size(); ++k) {
      if (k > 0 && grid[k] <= grid[k - 1]) {
        msg << "sample-size grid must be strictly ascending";
        break;
      }
      const int n = dimension_for(y, grid[k]);
      if (n < 1 || n > grid[k]) {
        msg << "N=" << grid[k] << " gives dimension n=" << n << " outside 1..N";
        break;
      }
    }
    if (msg.str().empty()) return;
  }
  throw DomainError(msg.str());
}

std::uint64_t replication_seed(std::uint64_t base_seed, int N, int r) {
  return mix(base_seed, static_cast<std::uint64_t>(N), static_cast<std::uint64_t>(r));
}

double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw DomainError("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = p * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

RateReport run_pathwise_sweep(const ExperimentConfig& cfg, const RunOptions& options) {
  if (cfg.metric == Metric::kVesdExpected)
    throw DomainError("pathwise sweep needs metric vesd-pathwise or esd");
  return sweep(cfg, options, [&](PointStats& point) {
    const MPLaw law(point.y_n);
    const auto cdf = [&law](double x) { return mp_cdf(law, x); };
    point.distances.assign(cfg.replications, 0.0);
    parallel_for(cfg.replications, options.threads, [&](int r) {
      const Replicate rep = replicate(cfg, point.n, point.N, point.seeds[r]);
      const StepDistribution H = cfg.metric == Metric::kEsd
                                     ? make_esd(rep.eigenvalues)
                                     : make_vesd(rep.eigenvalues, rep.weights);
      point.distances[r] = ks_step_vs_cdf(H, cdf);
    });
    point.statistic = quantile(point.distances, 0.5);
  });
}

RateReport run_expected_sweep(const ExperimentConfig& cfg, const RunOptions& options) {
  if (cfg.metric != Metric::kVesdExpected)
    throw DomainError("expected sweep needs metric vesd-expected");
  return sweep(cfg, options, [&](PointStats& point) {
    const MPLaw law(point.y_n);
    const auto cdf = [&law](double x) { return mp_cdf(law, x); };
    const int R = cfg.replications;
    std::vector<Replicate> reps(R);
    point.distances.assign(R, 0.0);
    parallel_for(R, options.threads, [&](int r) {
      reps[r] = replicate(cfg, point.n, point.N, point.seeds[r]);
      point.distances[r] = ks_step_vs_cdf(make_vesd(reps[r].eigenvalues, reps[r].weights), cdf);
    });
    std::vector<double> locations;
    std::vector<double> masses;
    locations.reserve(static_cast<std::size_t>(R) * point.n);
    masses.reserve(locations.capacity());
    for (const auto& rep : reps) {
      locations.insert(locations.end(), rep.eigenvalues.begin(), rep.eigenvalues.end());
      for (double w : rep.weights) masses.push_back(w / R);
    }
    point.statistic = ks_step_vs_cdf(StepDistribution::from_jumps(locations, masses), cdf);
  });
}

RateReport run_sweep(const ExperimentConfig& cfg, const RunOptions& options) {
  return cfg.metric == Metric::kVesdExpected ? run_expected_sweep(cfg, options)
                                             : run_pathwise_sweep(cfg, options);
}

HaarResult run_haar_experiment(const ExperimentConfig& cfg, const RunOptions& options) {
  cfg.validate();
  if (cfg.grid.size() != 1) throw DomainError("Haar experiment runs at exactly one sample size");
  if (cfg.replications < 50) throw DomainError("Haar experiment needs at least 50 replications");
  HaarResult result;
  result.N = cfg.grid.front();
  result.n = dimension_for(cfg.y, result.N);
  result.statistics.assign(cfg.replications, 0.0);
  parallel_for(cfg.replications, options.threads, [&](int r) {
    const Replicate rep =
        replicate(cfg, result.n, result.N, replication_seed(cfg.base_seed, result.N, r));
    result.statistics[r] = haar_statistic(make_vesd(rep.eigenvalues, rep.weights),
                                          make_esd(rep.eigenvalues), rep.eigenvalues.size());
  });
  result.ks_vs_kolmogorov = ks_step_vs_cdf(make_esd(result.statistics), kolmogorov_cdf);
  return result;
}

}  // namespace specdist
