#include "specdist/report_io.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <set>

#include "specdist/errors.hpp"

namespace specdist {

using nlohmann::ordered_json;

namespace {

// JSON has no infinity; unbounded bound terms are written as null.
ordered_json number(double x) { return std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr); }

}  // namespace

ordered_json to_json(const ExperimentConfig& cfg) {
  ordered_json j;
  j["distribution"] = cfg.distribution.name();
  j["y"] = cfg.y;
  j["grid"] = cfg.grid;
  j["replications"] = cfg.replications;
  j["direction"] = cfg.direction.to_string();
  j["seed"] = cfg.base_seed;
  j["condition"] = cfg.condition;
  j["eta"] = cfg.eta ? ordered_json(*cfg.eta) : ordered_json(nullptr);
  j["metric"] = metric_name(cfg.metric);
  return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  static const std::set<std::string> known = {"distribution", "y", "grid", "replications",
                                              "direction", "seed", "condition", "eta", "metric"};
  if (!j.is_object()) throw DomainError("experiment config must be a JSON object");
  ExperimentConfig cfg;
  try {
    for (const auto& [key, value] : j.items())
      if (!known.contains(key)) throw DomainError("unknown config key '" + key + "'");
    if (j.contains("distribution"))
      cfg.distribution = EntryDistribution::parse(j.at("distribution").get<std::string>());
    if (j.contains("y")) cfg.y = j.at("y").get<double>();
    if (j.contains("grid")) cfg.grid = j.at("grid").get<std::vector<int>>();
    if (j.contains("replications")) cfg.replications = j.at("replications").get<int>();
    if (j.contains("direction"))
      cfg.direction = DirectionSpec::parse(j.at("direction").get<std::string>());
    if (j.contains("seed")) cfg.base_seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("condition")) cfg.condition = j.at("condition").get<bool>();
    if (j.contains("eta") && !j.at("eta").is_null()) cfg.eta = j.at("eta").get<double>();
    if (j.contains("metric")) cfg.metric = parse_metric(j.at("metric").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed experiment config: ") + e.what());
  }
  return cfg;
}

ordered_json to_json(const RateFit& fit) {
  ordered_json j;
  j["slope"] = fit.slope;
  j["intercept"] = fit.intercept;
  j["rss"] = fit.rss;
  ordered_json pts = ordered_json::array();
  for (const auto& [lx, ly] : fit.log_points) pts.push_back({lx, ly});
  j["log_points"] = pts;
  return j;
}

ordered_json to_json(const RateReport& report, bool include_timing) {
  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["kind"] = "rate-report";
  j["config"] = to_json(report.config);
  j["target_exponent"] = report.target_exponent;
  j["complete"] = report.complete;
  if (!report.error.empty()) j["error"] = report.error;
  ordered_json points = ordered_json::array();
  for (const auto& p : report.points) {
    ordered_json q;
    q["N"] = p.N;
    q["n"] = p.n;
    q["y_n"] = p.y_n;
    q["a"] = p.a;
    q["statistic"] = p.statistic;
    q["mean"] = p.mean;
    q["median"] = p.median;
    q["q05"] = p.q05;
    q["q95"] = p.q95;
    q["distances"] = p.distances;
    q["seeds"] = p.seeds;
    if (include_timing) q["wallclock_ms"] = p.wallclock_ms;
    points.push_back(std::move(q));
  }
  j["points"] = std::move(points);
  j["fit"] = report.fit ? to_json(*report.fit) : ordered_json(nullptr);
  return j;
}

ordered_json to_json(const HaarResult& result, const ExperimentConfig& cfg) {
  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["kind"] = "haar-report";
  j["config"] = to_json(cfg);
  j["N"] = result.N;
  j["n"] = result.n;
  j["ks_vs_kolmogorov"] = result.ks_vs_kolmogorov;
  j["statistics"] = result.statistics;
  return j;
}

ordered_json to_json(const SmoothingIntegral& s, double y) {
  ordered_json j;
  j["y"] = y;
  j["v"] = s.v;
  j["v_y"] = smoothing_scale(y, s.v);
  j["lhs"] = s.lhs;
  j["rhs"] = s.rhs;
  j["argmax"] = s.argmax;
  j["grid_points"] = s.grid_points;
  j["holds"] = s.holds();
  return j;
}

ordered_json to_json(const BoundReport& report) {
  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["kind"] = "bound-report";
  j["y"] = report.y;
  j["A"] = report.context.A;
  j["B"] = report.context.B;
  j["v"] = report.context.v;
  j["K1"] = report.context.K1;
  j["K2"] = report.context.K2;
  j["K3"] = report.context.K3;
  j["term1"] = number(report.term1);
  j["term2"] = number(report.term2);
  j["term3"] = number(report.term3);
  j["rhs"] = number(report.rhs);
  j["lhs"] = report.lhs;
  j["holds"] = report.holds;
  j["smoothing"] = to_json(report.smoothing, report.y);
  return j;
}

void write_rate_csv(std::ostream& out, const RateReport& report, bool include_timing) {
  out << "N,n,y_n,a,stat_mean,stat_median,q05,q95,wallclock_ms,fit_stat\n";
  out << std::setprecision(17);
  for (const auto& p : report.points) {
    out << p.N << ',' << p.n << ',' << p.y_n << ',' << p.a << ',' << p.mean << ',' << p.median
        << ',' << p.q05 << ',' << p.q95 << ',';
    if (include_timing)
      out << p.wallclock_ms;
    else
      out << "NA";
    out << ',' << p.statistic << '\n';
  }
}

}  // namespace specdist
