#include "qdyn/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qdyn/contractivity.hpp"
#include "qdyn/counterexample.hpp"
#include "qdyn/divisibility.hpp"
#include "qdyn/errors.hpp"
#include "qdyn/probes.hpp"
#include "qdyn/report.hpp"
#include "qdyn/verify.hpp"

namespace qdyn {

namespace {

namespace fs = std::filesystem;

struct RunConfig {
  std::string command;
  std::string config_file;
  std::optional<double> theta;
  std::optional<double> delta;
  std::string rate = "default-pole";
  std::string smoothing;
  std::uint64_t seed = kDefaultSeed;
  int grid = 200;
  int probes = 500;
  int k = 1;
  std::string out_dir = ".";
  std::optional<double> slack;
  std::vector<double> thetas = {1.0, 1.1, 1.2, 1.3, 1.4, 1.5, 1.6, 1.7};
  double tau_step = 0.01;
  double lambda_max = 10.0;
  double lambda_step = 0.1;
  double bound_tau_step = 0.005;
};

MapParams resolve_params(const RunConfig& cfg) {
  MapParams p = cfg.config_file.empty() ? MapParams{} : load_params(cfg.config_file);
  if (cfg.theta) p.theta = *cfg.theta;
  if (cfg.delta) p.delta = *cfg.delta;
  if (cfg.smoothing == "rotation-only") p.smoothing = Smoothing::rotation_only;
  if (cfg.smoothing == "whole-segment") p.smoothing = Smoothing::whole_segment;
  p.validate();
  return p;
}

std::ofstream open_output(const RunConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.out_dir);
  const fs::path path = fs::path(cfg.out_dir) / name;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidOperand("cannot write " + path.string());
  return f;
}

std::vector<double> stepped(double lo, double hi, double step) {
  std::vector<double> v;
  const int n = static_cast<int>(std::floor((hi - lo) / step + 1e-9));
  for (int i = 0; i <= n; ++i) v.push_back(std::min(hi, lo + step * i));
  if (v.back() < hi - 1e-12) v.push_back(hi);
  return v;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const MapParams params = resolve_params(cfg);
  VerifyOptions options;
  options.grid = cfg.grid;
  options.probes = cfg.probes;
  options.seed = cfg.seed;
  if (cfg.slack) options.slack = *cfg.slack;
  const VerifyReport report = run_verification(params, options);

  nlohmann::json checks = nlohmann::json::array();
  for (const CheckResult& c : report.checks) {
    out << "[" << to_string(c.status) << "] " << c.tag << ": " << c.name << " (" << c.detail
        << ")\n";
    checks.push_back(
        {{"tag", c.tag}, {"name", c.name}, {"status", to_string(c.status)}, {"detail", c.detail}});
  }
  const auto tags = report.failing_tags();
  {
    auto csv = open_output(cfg, "verify_scan.csv");
    write_scan_csv(csv, report.scan);
  }
  {
    auto json = open_output(cfg, "verify_summary.json");
    json << nlohmann::json{{"schema_version", kSchemaVersion},
                           {"generated_at", utc_timestamp()},
                           {"pass", report.pass()},
                           {"failing", tags},
                           {"checks", checks},
                           {"seed", cfg.seed},
                           {"params", params_json(params)},
                           {"scan", scan_summary_json(report.scan, params)}}
                .dump(2)
         << '\n';
  }
  if (report.pass()) {
    out << "verify: all checks passed\n";
    return kExitPass;
  }
  out << "verify: FAILED:";
  for (const auto& t : tags) out << ' ' << t;
  out << '\n';
  return kExitCheckFailure;
}

int cmd_scan(const RunConfig& cfg, std::ostream& out) {
  const MapParams params = resolve_params(cfg);
  if (cfg.k < 1) throw InvalidOperand("--k must be >= 1");
  const ProbeSet probes = random_probes(3 * cfg.k, cfg.probes, cfg.seed, ProbeKind::random_hermitian);
  const ScanReport report =
      norm_derivative_scan(counterexample_family(params), probes,
                           half_open_grid(0.0, params.t4, cfg.grid), cfg.k,
                           cfg.slack.value_or(tol::kDerivativeSlack));
  {
    auto csv = open_output(cfg, "scan.csv");
    write_scan_csv(csv, report);
  }
  {
    auto json = open_output(cfg, "scan_summary.json");
    json << scan_summary_json(report, params).dump(2) << '\n';
  }
  out << "scan: k = " << cfg.k << ", max right derivative " << format_number(report.max_derivative)
      << " at t = " << format_number(report.argmax_t) << " -> " << (report.pass ? "pass" : "fail");
  if (report.exploratory) {
    out << " (exploratory - no claim to check)\n";
    return kExitPass;
  }
  out << '\n';
  return report.pass ? kExitPass : kExitCheckFailure;
}

int cmd_divisibility(const RunConfig& cfg, std::ostream& out) {
  const MapParams params = resolve_params(cfg);
  std::vector<double> grid = closed_grid(0.0, params.t4, cfg.grid);
  grid.insert(grid.end(), {params.t1, params.t2, params.t3, params.t4});
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-12; }),
             grid.end());
  const MapFamily family = counterexample_family(params);
  const auto rows = cp_divisibility_scan(family, grid);
  {
    auto csv = open_output(cfg, "divisibility.csv");
    write_divisibility_csv(csv, rows);
  }
  const auto witness = positive_forcing_witness(family, params.t3, params.t4);
  nlohmann::json summary = {{"schema_version", kSchemaVersion},
                            {"generated_at", utc_timestamp()},
                            {"params", params_json(params)},
                            {"intervals", rows.size()}};
  for (CpVerdict v : {CpVerdict::cp, CpVerdict::not_cp, CpVerdict::undefined_off_image}) {
    summary["verdict_counts"][to_string(v)] =
        std::count_if(rows.begin(), rows.end(), [v](const IntervalVerdict& r) { return r.verdict == v; });
  }
  summary["forcing_witness_t3_t4"] = witness ? witness_json(*witness) : nlohmann::json(nullptr);
  {
    auto json = open_output(cfg, "divisibility_summary.json");
    json << summary.dump(2) << '\n';
  }
  out << "divisibility: " << rows.size() << " intervals";
  if (witness) out << ", forcing discrepancy at (t3, t4) = " << format_number(witness->discrepancy);
  out << '\n';
  return kExitPass;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  const auto rows = theta_window_sweep(cfg.thetas, stepped(0.0, 1.0, cfg.tau_step),
                                       stepped(0.0, cfg.lambda_max, cfg.lambda_step));
  {
    auto csv = open_output(cfg, "sweep.csv");
    write_sweep_csv(csv, rows);
  }
  for (const ThetaSweepRow& r : rows) {
    out << "sweep: theta = " << format_number(r.theta) << " max " << format_number(r.overall.value)
        << (r.violation ? " (violation)" : "") << '\n';
  }
  return kExitPass;
}

int cmd_bounds(const RunConfig& cfg, std::ostream& out) {
  const MapParams params = resolve_params(cfg);
  std::vector<double> taus = stepped(0.0, 1.0, cfg.bound_tau_step);
  taus.erase(taus.begin());  // tau in (0, 1]
  const BoundChainReport report = bound_chain_check(params.theta, taus);
  {
    auto csv = open_output(cfg, "bounds.csv");
    write_bounds_csv(csv, report);
  }
  {
    auto json = open_output(cfg, "bounds_summary.json");
    json << nlohmann::json{{"schema_version", kSchemaVersion},
                           {"generated_at", utc_timestamp()},
                           {"theta", params.theta},
                           {"all_hold", report.all_hold()},
                           {"lambda_monotone", report.lambda_monotone},
                           {"maximum_at_lambda_one", report.maximum_at_lambda_one},
                           {"max_lambda_slope", report.max_lambda_slope}}
                .dump(2)
         << '\n';
  }
  out << "bounds: theta = " << format_number(params.theta) << " -> "
      << (report.all_hold() ? "all links hold" : "chain broken") << '\n';
  return report.all_hold() ? kExitPass : kExitCheckFailure;
}

void add_map_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--config", cfg.config_file, "key = value parameter file")
      ->check(CLI::ExistingFile);
  cmd->add_option("--theta", cfg.theta, "rotation angle theta in (0, pi)");
  cmd->add_option("--delta", cfg.delta, "smoothing exponent delta >= 1");
  cmd->add_option("--rate", cfg.rate, "rate functions")->check(CLI::IsMember({"default-pole"}));
  cmd->add_option("--smoothing", cfg.smoothing, "where tau^delta acts in the last segment")
      ->check(CLI::IsMember({"whole-segment", "rotation-only"}));
}

void add_output_option(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--out", cfg.out_dir, "output directory")->capture_default_str();
}

void add_scan_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--seed", cfg.seed, "probe seed")->capture_default_str();
  cmd->add_option("--grid", cfg.grid, "time grid points")->capture_default_str()->check(CLI::Range(2, 100000));
  cmd->add_option("--probes", cfg.probes, "number of random probes")->capture_default_str()->check(CLI::Range(1, 1000000));
  cmd->add_option("--slack", cfg.slack, "tolerance for right derivative <= 0");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"qdyn - divisibility and trace-norm contractivity checks for a qutrit dynamical map"};
  app.require_subcommand(1);

  auto* verify = app.add_subcommand("verify", "run the full verification suite");
  add_map_options(verify, cfg);
  add_scan_options(verify, cfg);
  add_output_option(verify, cfg);

  auto* scan = app.add_subcommand("scan", "right-derivative scan of ||(Lambda_t x 1_k)(X)||_1");
  add_map_options(scan, cfg);
  add_scan_options(scan, cfg);
  scan->add_option("--k", cfg.k, "ancilla dimension (k > 1 is exploratory)")->capture_default_str()->check(CLI::Range(1, 16));
  add_output_option(scan, cfg);

  auto* divisibility = app.add_subcommand("divisibility", "intermediate maps and CP verdicts");
  add_map_options(divisibility, cfg);
  divisibility->add_option("--grid", cfg.grid, "time grid points")->capture_default_str()->check(CLI::Range(2, 100000));
  add_output_option(divisibility, cfg);

  auto* sweep = app.add_subcommand("sweep", "closed-form derivative sign over a theta grid");
  sweep->add_option("--thetas", cfg.thetas, "theta values")->capture_default_str();
  sweep->add_option("--tau-step", cfg.tau_step, "tau grid step")->capture_default_str();
  sweep->add_option("--lambda-max", cfg.lambda_max, "largest lambda")->capture_default_str();
  sweep->add_option("--lambda-step", cfg.lambda_step, "lambda grid step")->capture_default_str();
  add_output_option(sweep, cfg);

  auto* bounds = app.add_subcommand("bounds", "pointwise upper-bound chain at one theta");
  add_map_options(bounds, cfg);
  bounds->add_option("--tau-step", cfg.bound_tau_step, "tau grid step")->capture_default_str();
  add_output_option(bounds, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << app.help();
    return kExitUsage;
  }

  try {
    if (verify->parsed()) return cmd_verify(cfg, out);
    if (scan->parsed()) return cmd_scan(cfg, out);
    if (divisibility->parsed()) return cmd_divisibility(cfg, out);
    if (sweep->parsed()) return cmd_sweep(cfg, out);
    if (bounds->parsed()) return cmd_bounds(cfg, out);
  } catch (const InvalidOperand& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const fs::filesystem_error& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace qdyn
