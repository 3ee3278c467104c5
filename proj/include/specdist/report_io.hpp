#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "specdist/metrics.hpp"
#include "specdist/ratelab.hpp"

namespace specdist {

inline constexpr int kReportSchemaVersion = 1;

nlohmann::ordered_json to_json(const ExperimentConfig& cfg);
// Inverse of to_json. Unknown keys are rejected; missing keys keep defaults.
// Throws DomainError on malformed input.
ExperimentConfig config_from_json(const nlohmann::json& j);

nlohmann::ordered_json to_json(const RateFit& fit);

// Wall-clock timings vary run to run, so they are written only on request;
// everything else is a pure function of the config.
nlohmann::ordered_json to_json(const RateReport& report, bool include_timing = false);
nlohmann::ordered_json to_json(const HaarResult& result, const ExperimentConfig& cfg);
nlohmann::ordered_json to_json(const SmoothingIntegral& s, double y);
nlohmann::ordered_json to_json(const BoundReport& report);

// Columns N,n,y_n,a,stat_mean,stat_median,q05,q95,wallclock_ms,fit_stat.
// wallclock_ms is "NA" unless include_timing.
void write_rate_csv(std::ostream& out, const RateReport& report, bool include_timing = false);

}  // namespace specdist
