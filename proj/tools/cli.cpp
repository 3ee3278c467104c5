#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "specdist/errors.hpp"
#include "specdist/metrics.hpp"
#include "specdist/mp_law.hpp"
#include "specdist/ratelab.hpp"
#include "specdist/report_io.hpp"
#include "specdist/spectra.hpp"

namespace specdist::cli {
namespace {

using nlohmann::ordered_json;

// Writes `text` to `path`, or to `fallback` when path is empty or "-".
void emit(const std::string& path, std::ostream& fallback, const std::string& text) {
  if (path.empty() || path == "-") {
    fallback << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw DomainError("cannot open output file '" + path + "'");
  file << text;
  if (!file) throw DomainError("failed writing '" + path + "'");
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

// SPECDIST_THREADS caps the worker count; unset or 0 means automatic.
unsigned threads_from_env() {
  const char* raw = std::getenv("SPECDIST_THREADS");
  if (raw == nullptr || *raw == '\0') return 0;
  const std::string text(raw);
  std::size_t used = 0;
  long value = -1;
  try {
    value = std::stol(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || value < 0) throw DomainError("SPECDIST_THREADS must be a count >= 0");
  return static_cast<unsigned>(value);
}

ComplexPoint parse_point(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw DomainError("complex point must be 'u,v', got '" + text + "'");
  try {
    return ComplexPoint(std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1)));
  } catch (const std::logic_error&) {
    throw DomainError("complex point must be 'u,v', got '" + text + "'");
  }
}

std::string human(double x) {
  std::ostringstream out;
  out << std::setprecision(6) << x;
  return out.str();
}

// ---------------------------------------------------------------- mp

struct MpArgs {
  double y = 0.0;
  std::vector<double> pdf_at, cdf_at;
  std::vector<std::string> stieltjes_at, companion_at;
  std::string format = "table";
  std::string out_path;
};

void add_mp(CLI::App& app, MpArgs& a) {
  auto* cmd = app.add_subcommand("mp", "Evaluate the Marcenko-Pastur law F_y at given points");
  cmd->add_option("--y", a.y, "Ratio index y in (0, 1] (dimensionless)")->required();
  cmd->add_option("--pdf-at", a.pdf_at, "Points x at which to print the density p_y(x)")->delimiter(',');
  cmd->add_option("--cdf-at", a.cdf_at, "Points x at which to print F_y(x)")->delimiter(',');
  cmd->add_option("--stieltjes-at", a.stieltjes_at,
                  "Points 'u,v' (v > 0) at which to print m_y(u + iv); repeatable");
  cmd->add_option("--companion-at", a.companion_at,
                  "Points 'u,v' (v > 0) at which to print the companion transform; repeatable");
  cmd->add_option("--format", a.format, "table (6 significant digits) or json")
      ->check(CLI::IsMember({"table", "json"}))
      ->capture_default_str();
  cmd->add_option("--out", a.out_path, "Output file (default: stdout)");
}

int run_mp(const MpArgs& a, std::ostream& out) {
  const MPLaw law(a.y);
  std::vector<ComplexPoint> stieltjes_points, companion_points;
  for (const auto& s : a.stieltjes_at) stieltjes_points.push_back(parse_point(s));
  for (const auto& s : a.companion_at) companion_points.push_back(parse_point(s));

  if (a.format == "json") {
    ordered_json j;
    j["y"] = a.y;
    j["a"] = law.lower_edge();
    j["b"] = law.upper_edge();
    auto real_rows = [](const std::vector<double>& xs, auto&& f) {
      ordered_json rows = ordered_json::array();
      for (double x : xs) {
        const double value = f(x);
        rows.push_back({{"x", x}, {"value", std::isfinite(value) ? ordered_json(value) : ordered_json(nullptr)}});
      }
      return rows;
    };
    auto complex_rows = [](const std::vector<ComplexPoint>& zs, auto&& f) {
      ordered_json rows = ordered_json::array();
      for (const auto& z : zs) {
        const complex m = f(z);
        rows.push_back({{"u", z.u()}, {"v", z.v()}, {"re", m.real()}, {"im", m.imag()}});
      }
      return rows;
    };
    j["pdf"] = real_rows(a.pdf_at, [&](double x) { return mp_pdf(law, x); });
    j["cdf"] = real_rows(a.cdf_at, [&](double x) { return mp_cdf(law, x); });
    j["stieltjes"] = complex_rows(stieltjes_points, [&](ComplexPoint z) { return mp_stieltjes(law, z); });
    j["companion"] =
        complex_rows(companion_points, [&](ComplexPoint z) { return mp_companion_stieltjes(law, z); });
    emit(a.out_path, out, dump(j));
    return kExitOk;
  }

  std::ostringstream text;
  for (double x : a.pdf_at) text << "pdf\t" << human(x) << '\t' << human(mp_pdf(law, x)) << '\n';
  for (double x : a.cdf_at) text << "cdf\t" << human(x) << '\t' << human(mp_cdf(law, x)) << '\n';
  for (const auto& z : stieltjes_points) {
    const complex m = mp_stieltjes(law, z);
    text << "stieltjes\t" << human(z.u()) << ',' << human(z.v()) << '\t' << human(m.real()) << '\t'
         << human(m.imag()) << '\n';
  }
  for (const auto& z : companion_points) {
    const complex m = mp_companion_stieltjes(law, z);
    text << "companion\t" << human(z.u()) << ',' << human(z.v()) << '\t' << human(m.real()) << '\t'
         << human(m.imag()) << '\n';
  }
  emit(a.out_path, out, text.str());
  return kExitOk;
}

// ---------------------------------------------------------- simulate

struct SimulateArgs {
  std::string dist = "complex-gaussian";
  int n = 0;
  int N = 0;
  std::uint64_t seed = 0;
  std::string direction = "basis:1";
  bool condition = false;
  std::optional<double> eta;
  std::string out_path;
  std::string matrix_path;
  std::string matrix_csv_path;
};

void add_simulate(CLI::App& app, SimulateArgs& a) {
  auto* cmd = app.add_subcommand("simulate", "Sample one matrix and write its spectrum as CSV");
  cmd->add_option("--dist", a.dist,
                  "Entry law: real-gaussian, complex-gaussian, rademacher, uniform-centered, "
                  "student-t:<df>")
      ->capture_default_str();
  cmd->add_option("--n", a.n, "Dimension n (rows)")->required();
  cmd->add_option("--N", a.N, "Sample size N (columns), N >= n")->required();
  cmd->add_option("--seed", a.seed, "64-bit seed")->capture_default_str();
  cmd->add_option("--direction", a.direction,
                  "Projection direction: basis:<k> (1-based), uniform, random:<seed>, "
                  "explicit:<x1>,<x2>,...")
      ->capture_default_str();
  cmd->add_flag("--condition", a.condition,
                "Apply truncation/centralization/rescaling with the default eta_N");
  cmd->add_option("--eta", a.eta, "Truncation scale eta (threshold eta N^{1/4}); implies --condition");
  cmd->add_option("--out", a.out_path, "Spectrum CSV path (default: stdout)");
  cmd->add_option("--dump-matrix", a.matrix_path, "Also write X as little-endian binary");
  cmd->add_option("--dump-matrix-csv", a.matrix_csv_path, "Also write X as CSV (n N <= 10^4)");
}

int run_simulate(const SimulateArgs& a, std::ostream& out) {
  const auto dist = EntryDistribution::parse(a.dist);
  const auto direction = DirectionSpec::parse(a.direction);
  EntryMatrix X = sample_entries(dist, a.n, a.N, a.seed);
  if (a.condition || a.eta) X = condition_entries(X, a.eta.value_or(default_truncation_scale(a.N)));
  if (!a.matrix_path.empty()) {
    std::ostringstream bytes;
    write_matrix_binary(bytes, X.entries);
    emit(a.matrix_path, out, bytes.str());
  }
  if (!a.matrix_csv_path.empty()) {
    std::ostringstream text;
    write_matrix_csv(text, X.entries);
    emit(a.matrix_csv_path, out, text.str());
  }
  const Spectrum spectrum = compute_spectrum(X, direction);
  std::ostringstream text;
  write_spectrum_csv(text, spectrum, dist.name());
  emit(a.out_path, out, text.str());
  return kExitOk;
}

// ------------------------------------------------------------- rates

struct RatesArgs {
  std::string config_path;
  std::string metric = "vesd-pathwise";
  double y = 0.25;
  std::vector<int> grid{128, 256, 512, 1024};
  int reps = 100;
  std::uint64_t seed = 0;
  std::string dist = "complex-gaussian";
  std::string direction = "basis:1";
  bool condition = false;
  std::optional<double> eta;
  std::string out_path;
  std::string format = "json";
  bool timing = false;
  CLI::App* cmd = nullptr;
};

void add_rates(CLI::App& app, RatesArgs& a) {
  auto* cmd = app.add_subcommand("rates", "Monte Carlo rate sweep over sample sizes");
  a.cmd = cmd;
  cmd->add_option("--config", a.config_path,
                  "JSON experiment config; flags given explicitly override its fields");
  cmd->add_option("--metric", a.metric, "vesd-pathwise, vesd-expected or esd")
      ->check(CLI::IsMember({"vesd-pathwise", "vesd-expected", "esd"}))
      ->capture_default_str();
  cmd->add_option("--y", a.y, "Target ratio y in (0, 1]; n = round(y N)")->capture_default_str();
  cmd->add_option("--grid", a.grid, "Ascending sample sizes N, comma separated")
      ->delimiter(',')
      ->capture_default_str();
  cmd->add_option("--reps", a.reps, "Replications R per sample size")->capture_default_str();
  cmd->add_option("--seed", a.seed, "Base seed; replication seeds are mix(seed, N, r)")
      ->capture_default_str();
  cmd->add_option("--dist", a.dist, "Entry law (see simulate --help)")->capture_default_str();
  cmd->add_option("--direction", a.direction, "Projection direction (see simulate --help)")
      ->capture_default_str();
  cmd->add_flag("--condition", a.condition, "Condition entries with the default eta_N");
  cmd->add_option("--eta", a.eta, "Fixed truncation scale eta; implies --condition");
  cmd->add_option("--out", a.out_path, "Report path (default: stdout)");
  cmd->add_option("--format", a.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  cmd->add_flag("--timing", a.timing,
                "Include wall-clock milliseconds in the report (output is then not reproducible)");
}

ExperimentConfig rates_config(const RatesArgs& a) {
  ExperimentConfig cfg;
  if (!a.config_path.empty()) {
    std::ifstream file(a.config_path);
    if (!file) throw DomainError("cannot open config '" + a.config_path + "'");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(file);
    } catch (const nlohmann::json::exception& e) {
      throw DomainError(std::string("config is not valid JSON: ") + e.what());
    }
    cfg = config_from_json(j);
  }
  const bool from_file = !a.config_path.empty();
  auto given = [&](const char* name) { return !from_file || a.cmd->count(name) > 0; };
  if (given("--metric")) cfg.metric = parse_metric(a.metric);
  if (given("--y")) cfg.y = a.y;
  if (given("--grid")) cfg.grid = a.grid;
  if (given("--reps")) cfg.replications = a.reps;
  if (given("--seed")) cfg.base_seed = a.seed;
  if (given("--dist")) cfg.distribution = EntryDistribution::parse(a.dist);
  if (given("--direction")) cfg.direction = DirectionSpec::parse(a.direction);
  if (a.cmd->count("--condition") > 0 || (!from_file && a.condition)) cfg.condition = true;
  if (a.eta) {
    cfg.eta = a.eta;
    cfg.condition = true;
  }
  cfg.validate();
  return cfg;
}

int run_rates(const RatesArgs& a, std::ostream& out, std::ostream& err) {
  const ExperimentConfig cfg = rates_config(a);
  RunOptions options;
  options.threads = threads_from_env();
  options.on_point = [&err](const PointStats& p) {
    err << "N=" << p.N << " n=" << p.n << " statistic=" << human(p.statistic) << " ("
        << std::llround(p.wallclock_ms) << " ms)\n";
  };
  const RateReport report = run_sweep(cfg, options);
  std::ostringstream text;
  if (a.format == "csv")
    write_rate_csv(text, report, a.timing);
  else
    text << dump(to_json(report, a.timing));
  emit(a.out_path, out, text.str());
  if (!report.complete) {
    err << "error: sweep aborted: " << report.error << '\n';
    return kExitNumeric;
  }
  if (report.fit)
    err << "slope=" << human(report.fit->slope) << " target=" << human(report.target_exponent) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------- haar-test

struct HaarArgs {
  std::string dist = "real-gaussian";
  std::optional<int> n;
  std::optional<int> N;
  double y = 0.25;
  int reps = 200;
  std::uint64_t seed = 0;
  std::string direction = "random:1";
  bool condition = false;
  std::optional<double> eta;
  std::string out_path;
};

void add_haar(CLI::App& app, HaarArgs& a) {
  auto* cmd = app.add_subcommand(
      "haar-test", "Compare T_n = sqrt(n/2) sup|H - F| with the Kolmogorov law over replications");
  cmd->add_option("--dist", a.dist, "Entry law (see simulate --help)")->capture_default_str();
  auto* n_opt = cmd->add_option("--n", a.n, "Dimension n; N = round(n / y)");
  auto* N_opt = cmd->add_option("--N", a.N, "Sample size N; n = round(y N)");
  n_opt->excludes(N_opt);
  cmd->add_option("--y", a.y, "Target ratio y in (0, 1]")->capture_default_str();
  cmd->add_option("--reps", a.reps, "Replications R (>= 50)")->capture_default_str();
  cmd->add_option("--seed", a.seed, "Base seed")->capture_default_str();
  cmd->add_option("--direction", a.direction, "Projection direction (see simulate --help)")
      ->capture_default_str();
  cmd->add_flag("--condition", a.condition, "Condition entries with the default eta_N");
  cmd->add_option("--eta", a.eta, "Fixed truncation scale eta; implies --condition");
  cmd->add_option("--out", a.out_path, "JSON report path (default: stdout)");
}

int run_haar(const HaarArgs& a, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg;
  cfg.distribution = EntryDistribution::parse(a.dist);
  cfg.y = a.y;
  cfg.replications = a.reps;
  cfg.base_seed = a.seed;
  cfg.direction = DirectionSpec::parse(a.direction);
  cfg.condition = a.condition || a.eta.has_value();
  cfg.eta = a.eta;
  if (!(a.y > 0.0 && a.y <= 1.0)) throw DomainError("y must lie in (0, 1]");
  if (a.N) {
    cfg.grid = {*a.N};
  } else if (a.n) {
    const int N = static_cast<int>(std::lround(*a.n / a.y));
    if (dimension_for(a.y, N) != *a.n) throw DomainError("no N gives round(y N) = n for this y");
    cfg.grid = {N};
  } else {
    throw DomainError("haar-test needs --n or --N");
  }
  RunOptions options;
  options.threads = threads_from_env();
  const HaarResult result = run_haar_experiment(cfg, options);
  emit(a.out_path, out, dump(to_json(result, cfg)));
  err << "n=" << result.n << " N=" << result.N << " ks_vs_kolmogorov=" << human(result.ks_vs_kolmogorov)
      << '\n';
  return kExitOk;
}

// ------------------------------------------------------- check-bounds

struct BoundsArgs {
  std::optional<double> y;
  std::optional<double> point_mass;
  std::string dist = "complex-gaussian";
  std::optional<int> n;
  std::optional<int> N;
  std::uint64_t seed = 0;
  std::string direction = "basis:1";
  BoundContext ctx;
  std::string out_path;
};

void add_bounds(CLI::App& app, BoundsArgs& a) {
  auto* cmd = app.add_subcommand(
      "check-bounds",
      "Evaluate the three-term Berry-Esseen type bound and the smoothing-integral bound");
  cmd->add_option("--y", a.y, "Ratio index y in (0, 1] (with --point-mass)");
  cmd->add_option("--point-mass", a.point_mass, "Use H = point mass at this location");
  cmd->add_option("--dist", a.dist, "Entry law for a simulated VESD")->capture_default_str();
  cmd->add_option("--n", a.n, "Dimension of the simulated matrix (law index becomes n/N)");
  cmd->add_option("--N", a.N, "Sample size of the simulated matrix");
  cmd->add_option("--seed", a.seed, "Seed of the simulated matrix")->capture_default_str();
  cmd->add_option("--direction", a.direction, "Projection direction")->capture_default_str();
  cmd->add_option("--v", a.ctx.v, "Imaginary height v > 0")->capture_default_str();
  cmd->add_option("--A", a.ctx.A, "Outer integration limit, A > B")->capture_default_str();
  cmd->add_option("--B", a.ctx.B, "Tail cutoff, B > 5")->capture_default_str();
  cmd->add_option("--K1", a.ctx.K1, "Constant of the Stieltjes-difference term")->capture_default_str();
  cmd->add_option("--K2", a.ctx.K2, "Constant of the tail term")->capture_default_str();
  cmd->add_option("--K3", a.ctx.K3, "Constant of the smoothing term")->capture_default_str();
  cmd->add_option("--out", a.out_path, "JSON report path (default: stdout)");
}

int run_bounds(const BoundsArgs& a, std::ostream& out) {
  a.ctx.validate();
  StepDistribution H;
  double y = 0.0;
  if (a.point_mass) {
    if (a.n || a.N) throw DomainError("--point-mass excludes --n/--N");
    if (!a.y) throw DomainError("--point-mass needs --y");
    y = *a.y;
    const double loc = *a.point_mass, mass = 1.0;
    H = StepDistribution::from_jumps({&loc, 1}, {&mass, 1});
  } else {
    if (!a.n || !a.N) throw DomainError("check-bounds needs --point-mass or both --n and --N");
    if (a.y) throw DomainError("--y is implied by n/N for a simulated VESD");
    const EntryMatrix X = sample_entries(EntryDistribution::parse(a.dist), *a.n, *a.N, a.seed);
    const Spectrum spectrum = compute_spectrum(X, DirectionSpec::parse(a.direction));
    H = spectrum.vesd();
    y = spectrum.y_n();
  }
  const BoundReport report = berry_esseen_bound(H, MPLaw(y), a.ctx);
  emit(a.out_path, out, dump(to_json(report)));
  return kExitOk;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral statistics of sample covariance matrices: Marcenko-Pastur law, "
               "eigenvector empirical spectral distributions and Monte Carlo rate sweeps",
               "specdist"};
  app.require_subcommand(1, 1);
  MpArgs mp;
  SimulateArgs simulate;
  RatesArgs rates;
  HaarArgs haar;
  BoundsArgs bounds;
  add_mp(app, mp);
  add_simulate(app, simulate);
  add_rates(app, rates);
  add_haar(app, haar);
  add_bounds(app, bounds);

  std::vector<std::string> storage{"specdist"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitValidation;
  }

  try {
    const auto* chosen = app.get_subcommands().front();
    const std::string name = chosen->get_name();
    if (name == "mp") return run_mp(mp, out);
    if (name == "simulate") return run_simulate(simulate, out);
    if (name == "rates") return run_rates(rates, out, err);
    if (name == "haar-test") return run_haar(haar, out, err);
    if (name == "check-bounds") return run_bounds(bounds, out);
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitValidation;
}

}  // namespace specdist::cli
