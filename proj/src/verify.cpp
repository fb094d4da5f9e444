#include "qdyn/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "qdyn/divisibility.hpp"
#include "qdyn/probes.hpp"
#include "qdyn/superop.hpp"

namespace qdyn {

namespace {

std::string describe(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

CheckResult check(std::string tag, std::string name, bool ok, std::string detail) {
  return {std::move(tag), std::move(name), ok ? CheckStatus::pass : CheckStatus::fail,
          std::move(detail)};
}

void dynamical_map_checks(const MapParams& params, const VerifyOptions& options,
                          std::vector<CheckResult>& out) {
  const MapFamily family = counterexample_family(params);
  const ProbeSet probes = random_probes(3, options.tp_probes, options.seed, ProbeKind::random_hermitian);
  double worst_choi = std::numeric_limits<double>::infinity();
  double worst_tp = 0.0;
  for (double t : closed_grid(0.0, params.t4, options.grid)) {
    const SuperOp map = family(t);
    worst_choi = std::min(worst_choi, to_choi(map).min_eigenvalue());
    for (const HermOp& x : probes.probes) {
      worst_tp = std::max(worst_tp, std::abs(map.apply(x).trace() - x.trace()));
    }
  }
  out.push_back(check("dynamical-map", "completely positive on grid", worst_choi >= -tol::kPsd,
                      "min Choi eigenvalue " + describe(worst_choi)));
  out.push_back(check("dynamical-map", "trace preserving on grid",
                      worst_tp <= tol::kTracePreserving, "max trace error " + describe(worst_tp)));
}

void continuity_checks(const MapParams& params, const VerifyOptions& options,
                       std::vector<CheckResult>& out) {
  for (const JunctionGaps& g : continuity_report(params, options.ladder)) {
    const auto orders = g.orders();
    const bool linear = std::all_of(orders.begin(), orders.end(), [](double p) { return p >= 0.9; });
    const bool ok = g.strictly_decreasing() && g.gaps.back() < 1e-3 && linear;
    out.push_back(check("continuity", "junction t = " + describe(g.junction), ok,
                        "final gap " + describe(g.gaps.back())));
  }
  if (params.delta > 1.0) {
    for (const JunctionGaps& g : derivative_continuity_report(params, options.ladder)) {
      const auto orders = g.orders();
      const bool shrinking =
          std::all_of(orders.begin(), orders.end(), [](double p) { return p > 0.0; });
      out.push_back(check("derivative-continuity", "junction t = " + describe(g.junction),
                          g.strictly_decreasing() && shrinking,
                          "final derivative gap " + describe(g.gaps.back())));
    }
  } else {
    out.push_back({"derivative-continuity", "derivative continuity", CheckStatus::skipped,
                   "only claimed for delta > 1"});
  }
}

void closed_form_checks(const MapParams& params, std::vector<CheckResult>& out) {
  const MapFamily family = counterexample_family(params);
  auto endpoint = [&](double t, auto action) {
    return sup_distance(family(t), SuperOp::from_action(3, action));
  };
  const double e1 = endpoint(params.t1, [](const CMatrix& x) -> CMatrix {
    return x.diagonal().asDiagonal();
  });
  const double e2 = endpoint(params.t2, [](const CMatrix& x) -> CMatrix {
    CMatrix y = CMatrix::Zero(3, 3);
    y(0, 0) = x(0, 0);
    y(1, 1) = x(1, 1) + x(2, 2);
    return y;
  });
  const double e3 = endpoint(params.t3, [](const CMatrix& x) -> CMatrix {
    CMatrix y = CMatrix::Zero(3, 3);
    y(0, 0) = 0.5 * x(0, 0);
    y(1, 1) = 0.5 * (x(1, 1) + x(2, 2));
    y(2, 2) = 0.5 * x.trace();
    return y;
  });
  const SuperOp last = family(params.t4);
  const CVector theta = theta_ket(params.theta);
  const double e4 = std::max(
      max_abs_entry(last.apply(HermOp::basis_projector(3, 0)).matrix() -
                    HermOp::basis_projector(3, 0).matrix()),
      max_abs_entry(last.apply(HermOp::basis_projector(3, 1)).matrix() - theta * theta.adjoint()));
  const double endpoint_err = std::max({e1, e2, e3, e4});
  out.push_back(check("closed-forms", "segment endpoints", endpoint_err <= 1e-12,
                      "max entry error " + describe(endpoint_err)));

  double gamma1_err = 0.0;
  for (int i = 1; i <= 9; ++i) {
    const double tau = i / 10.0;
    gamma1_err = std::max(gamma1_err, sup_distance(gamma_family(1, tau, params),
                                                   gamma1_by_exponential(tau, params)));
  }
  out.push_back(check("closed-forms", "Gamma1 closed form vs matrix exponential",
                      gamma1_err <= 1e-10, "max entry error " + describe(gamma1_err)));

  double norm_err = 0.0;
  for (int i = 0; i <= 10; ++i) {
    for (int j = 0; j <= 10; ++j) {
      const double lambda = 0.5 * i;
      const double tau = 0.1 * j;
      const HermOp y = gamma_family(4, tau, params).apply(LambdaProbe{lambda}.op());
      const double closed =
          gamma4_norm_closed_form(lambda, tau, params.theta, params.delta, params.smoothing);
      norm_err = std::max(norm_err, std::abs(trace_norm(y) - closed));
    }
  }
  out.push_back(check("closed-forms", "Gamma4 norm closed form vs matrix", norm_err <= 1e-10,
                      "max error " + describe(norm_err)));
}

void divisibility_checks(const MapParams& params, std::vector<CheckResult>& out) {
  const auto witness =
      positive_forcing_witness(counterexample_family(params), params.t3, params.t4);
  CheckResult r{"not-P-divisible", "forcing witness at (t3, t4)", CheckStatus::fail,
                "no forcing configuration found"};
  if (witness) {
    r.detail = "discrepancy " + describe(witness->discrepancy);
    r.status = witness->discrepancy > tol::kSupportCutoff ? CheckStatus::pass
                                                           : CheckStatus::inconclusive;
  }
  out.push_back(r);
}

ScanReport contractivity_checks(const MapParams& params, const VerifyOptions& options,
                                std::vector<CheckResult>& out) {
  const ProbeSet probes = random_probes(3, options.probes, options.seed, ProbeKind::random_hermitian);
  ScanReport scan = norm_derivative_scan(counterexample_family(params), probes,
                                         half_open_grid(0.0, params.t4, options.grid), 1,
                                         options.slack);
  out.push_back(check("contractivity", "right-derivative scan", scan.pass,
                      "max right derivative " + describe(scan.max_derivative) + " at t = " +
                          describe(scan.argmax_t)));
  std::vector<double> lambdas, taus;
  for (int i = 0; i <= 100; ++i) lambdas.push_back(0.1 * i);
  for (int i = 0; i <= 100; ++i) taus.push_back(0.01 * i);
  const ClosedFormMax best =
      closed_form_derivative_max(params.theta, lambdas, taus, params.delta, params.smoothing);
  out.push_back(check("contractivity", "closed-form derivative sign",
                      best.value <= tol::kClosedFormSlack,
                      "max " + describe(best.value) + " at lambda = " + describe(best.lambda) +
                          ", tau = " + describe(best.tau)));
  return scan;
}

void image_checks(const MapParams& params, std::vector<CheckResult>& out) {
  const MapFamily family = counterexample_family(params);
  const int early = image_basis(family(0.5 * params.t1)).rank();
  const int at_t1 = image_basis(family(params.t1)).rank();
  const int at_t2 = image_basis(family(params.t2)).rank();
  const int at_t3 = image_basis(family(params.t3)).rank();
  const int at_t4 = image_basis(family(params.t4)).rank();
  // at odd multiples of pi/2 the final rotation merges the two surviving outputs
  const int expected_t4 = std::abs(std::cos(params.theta)) > 1e-6 ? 2 : 1;
  const bool ranks =
      early == 9 && at_t1 == 3 && at_t2 == 2 && at_t3 == 2 && at_t4 == expected_t4;
  out.push_back(check("image-structure", "image ranks", ranks,
                      "ranks " + std::to_string(early) + "," + std::to_string(at_t1) + "," +
                          std::to_string(at_t2) + "," + std::to_string(at_t3) + "," +
                          std::to_string(at_t4)));
  const auto inclusion =
      image_inclusion_report(family, closed_grid(params.t3, params.t4, 11));
  out.push_back(check("image-structure", "image growth on [t3, t4] detected",
                      !inclusion.nonincreasing && inclusion.max_residual > 0.01,
                      "max residual " + describe(inclusion.max_residual)));
}

void bound_checks(const MapParams& params, std::vector<CheckResult>& out) {
  if (params.theta > std::numbers::pi / 2) {
    out.push_back({"bounds", "bound chain", CheckStatus::skipped, "theta > pi/2"});
    return;
  }
  std::vector<double> taus;
  for (int i = 1; i <= 200; ++i) taus.push_back(0.005 * i);
  const BoundChainReport chain = bound_chain_check(params.theta, taus);
  out.push_back(check("bounds", "bound chain", chain.all_hold(),
                      "max lambda slope " + describe(chain.max_lambda_slope)));
}

}  // namespace

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::inconclusive: return "inconclusive";
    case CheckStatus::skipped: return "skipped";
  }
  return "unknown";
}

bool VerifyReport::pass() const {
  return std::none_of(checks.begin(), checks.end(), [](const CheckResult& c) {
    return c.status == CheckStatus::fail || c.status == CheckStatus::inconclusive;
  });
}

std::vector<std::string> VerifyReport::failing_tags() const {
  std::vector<std::string> tags;
  for (const CheckResult& c : checks) {
    if (c.status != CheckStatus::fail && c.status != CheckStatus::inconclusive) continue;
    if (std::find(tags.begin(), tags.end(), c.tag) == tags.end()) tags.push_back(c.tag);
  }
  return tags;
}

SuperOp gamma1_by_exponential(double tau, const MapParams& params) {
  const double g = params.gamma.cumulative(tau);
  const CMatrix generator = g * dephasing_generator().matrix();
  return SuperOp(3, generator.exp());
}

VerifyReport run_verification(const MapParams& params, const VerifyOptions& options) {
  params.validate();
  VerifyReport report;
  dynamical_map_checks(params, options, report.checks);
  continuity_checks(params, options, report.checks);
  closed_form_checks(params, report.checks);
  divisibility_checks(params, report.checks);
  report.scan = contractivity_checks(params, options, report.checks);
  image_checks(params, report.checks);
  bound_checks(params, report.checks);
  return report;
}

}  // namespace qdyn
