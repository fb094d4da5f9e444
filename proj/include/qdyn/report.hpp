#pragma once

// CSV (header row, comma separated, RFC-4180 quoting where needed) and JSON
// summaries. CSV content depends only on the inputs, so equal configs and
// seeds give byte-identical files; the timestamp lives in the JSON only.

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "qdyn/contractivity.hpp"
#include "qdyn/counterexample.hpp"
#include "qdyn/divisibility.hpp"

namespace qdyn {

inline constexpr int kSchemaVersion = 1;

/// Shortest round-trippable decimal form ("%.17g").
std::string format_number(double v);

/// Current UTC time as ISO-8601.
std::string utc_timestamp();

nlohmann::json params_json(const MapParams& params);

/// Columns: t, probe_id, k, norm, rderiv, verdict.
void write_scan_csv(std::ostream& out, const ScanReport& report);
nlohmann::json scan_summary_json(const ScanReport& report, const MapParams& params);

/// Columns: s, t, definedness, residual, choi_min, tp_defect, forcing_discrepancy, verdict.
void write_divisibility_csv(std::ostream& out, const std::vector<IntervalVerdict>& rows);
nlohmann::json witness_json(const ForcingWitness& w);

/// Columns: theta, max_derivative, argmax_lambda, argmax_tau, max_small_tau, max_at_tau_one,
/// singular_points, violation.
void write_sweep_csv(std::ostream& out, const std::vector<ThetaSweepRow>& rows);

/// Columns: tau, sup_derivative, bound_sqrt, bound_cos, bracket, polynomial, cos_factor, holds.
void write_bounds_csv(std::ostream& out, const BoundChainReport& report);

}  // namespace qdyn
