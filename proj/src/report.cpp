#include "qdyn/report.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <ostream>

namespace qdyn {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

nlohmann::json params_json(const MapParams& p) {
  return {{"theta", p.theta},
          {"t1", p.t1},
          {"t2", p.t2},
          {"t3", p.t3},
          {"t4", p.t4},
          {"delta", p.delta},
          {"rate", p.gamma.kind() == RateKind::default_pole ? "default-pole" : "custom-tabulated"},
          {"smoothing", to_string(p.smoothing)}};
}

void write_scan_csv(std::ostream& out, const ScanReport& report) {
  out << "t,probe_id,k,norm,rderiv,verdict\n";
  for (const ScanRow& r : report.rows) {
    out << format_number(r.t) << ',' << r.probe_id << ',' << r.k << ',' << format_number(r.norm)
        << ',' << format_number(r.rderiv) << ',' << (r.pass ? "pass" : "fail") << '\n';
  }
}

nlohmann::json scan_summary_json(const ScanReport& report, const MapParams& params) {
  nlohmann::json j = {
      {"schema_version", kSchemaVersion},
      {"generated_at", utc_timestamp()},
      {"max_derivative", report.max_derivative},
      {"argmax_t", report.argmax_t},
      {"argmax_probe", report.argmax_probe},
      {"slack", report.slack},
      {"pass", report.pass},
      {"seed", report.seed},
      {"k", report.k},
      {"probe_kind", report.probe_kind},
      {"probes", report.grid_points == 0 ? 0 : report.rows.size() / report.grid_points},
      {"grid", {{"points", report.grid_points}, {"min", report.grid_min}, {"max", report.grid_max}}},
      {"params", params_json(params)},
  };
  if (report.exploratory) j["label"] = "exploratory - no claim to check for ancilla dimension k > 1";
  return j;
}

void write_divisibility_csv(std::ostream& out, const std::vector<IntervalVerdict>& rows) {
  out << "s,t,definedness,residual,choi_min,tp_defect,forcing_discrepancy,verdict\n";
  for (const IntervalVerdict& r : rows) {
    out << format_number(r.s) << ',' << format_number(r.t) << ',' << to_string(r.definedness)
        << ',' << format_number(r.residual) << ',' << format_number(r.choi_min) << ','
        << format_number(r.tp_defect) << ',' << format_number(r.forcing_discrepancy) << ','
        << to_string(r.verdict) << '\n';
  }
}

nlohmann::json witness_json(const ForcingWitness& w) {
  nlohmann::json vec = nlohmann::json::array();
  for (Eigen::Index i = 0; i < w.shared_vector.size(); ++i) {
    vec.push_back({w.shared_vector(i).real(), w.shared_vector(i).imag()});
  }
  auto diag = [](const HermOp& x) {
    nlohmann::json d = nlohmann::json::array();
    for (int i = 0; i < x.dim(); ++i) d.push_back(x(i, i).real());
    return d;
  };
  return {{"shared_vector", vec},
          {"discrepancy", w.discrepancy},
          {"first_target_diagonal", diag(w.first_target)},
          {"second_target_diagonal", diag(w.second_target)}};
}

void write_sweep_csv(std::ostream& out, const std::vector<ThetaSweepRow>& rows) {
  out << "theta,max_derivative,argmax_lambda,argmax_tau,max_small_tau,max_at_tau_one,"
         "singular_points,violation\n";
  for (const ThetaSweepRow& r : rows) {
    out << format_number(r.theta) << ',' << format_number(r.overall.value) << ','
        << format_number(r.overall.lambda) << ',' << format_number(r.overall.tau) << ','
        << format_number(r.max_small_tau) << ',' << format_number(r.max_at_tau_one) << ','
        << r.overall.singular_points << ',' << (r.violation ? "yes" : "no") << '\n';
  }
}

void write_bounds_csv(std::ostream& out, const BoundChainReport& report) {
  out << "tau,sup_derivative,bound_sqrt,bound_cos,bracket,polynomial,cos_factor,holds\n";
  for (const BoundChainRow& r : report.rows) {
    out << format_number(r.tau) << ',' << format_number(r.sup_derivative) << ','
        << format_number(r.bound_sqrt) << ',' << format_number(r.bound_cos) << ','
        << format_number(r.bracket) << ',' << format_number(r.polynomial) << ','
        << format_number(r.cos_factor) << ',' << (r.holds() ? "yes" : "no") << '\n';
  }
}

}  // namespace qdyn
