// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qdyn/contractivity.hpp"
#include "qdyn/counterexample.hpp"
#include "qdyn/divisibility.hpp"
#include "qdyn/probes.hpp"
#include "qdyn/superop.hpp"

using namespace qdyn;

namespace {

// Pinned tolerances.
constexpr double kChoiFloor = -1e-10;
constexpr double kTraceError = 1e-10;
constexpr double kFinalGap = 1e-3;
constexpr double kMinGapOrder = 0.9;
constexpr double kEndpoint = 1e-12;
constexpr double kDiscrepancy = 1e-9;
constexpr double kNearRightAngleRel = 0.10;
constexpr double kScanSlack = 1e-6;
constexpr double kClosedForm = 1e-12;
constexpr double kTightnessAbs = 1e-9;
constexpr double kSmallTauRel = 0.20;
constexpr double kReflection = 1e-10;
constexpr double kExpm = 1e-10;
constexpr double kInclusionResidual = 0.01;

constexpr std::uint64_t kSeed = 20230311;
const std::vector<double> kLadder = {1e-2, 1e-3, 1e-4};

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::vector<double> stepped(double lo, double hi, int n) {
  std::vector<double> v;
  for (int i = 0; i <= n; ++i) v.push_back(lo + (hi - lo) * i / n);
  return v;
}

CMatrix unit(int i, int j) {
  CMatrix m = CMatrix::Zero(3, 3);
  m(i, j) = 1.0;
  return m;
}

Outcome dynamical_map() {
  const MapParams p;
  const ProbeSet probes = random_probes(3, 50, kSeed, ProbeKind::random_hermitian);
  double choi_min = 1.0, trace_err = 0.0;
  for (double t : closed_grid(0.0, p.t4, 200)) {
    const SuperOp s = lambda_t(t, p);
    choi_min = std::min(choi_min, to_choi(s).min_eigenvalue());
    for (const HermOp& x : probes.probes) trace_err = std::max(trace_err, std::abs(s.apply(x).trace() - x.trace()));
  }
  bool gaps_ok = true;
  double worst_final = 0.0, worst_order = 1e9;
  for (const JunctionGaps& g : continuity_report(p, kLadder)) {
    gaps_ok = gaps_ok && g.strictly_decreasing() && g.gaps.back() < kFinalGap;
    worst_final = std::max(worst_final, g.gaps.back());
    for (double o : g.orders()) {
      worst_order = std::min(worst_order, o);
      gaps_ok = gaps_ok && o >= kMinGapOrder;
    }
  }
  const bool ok = choi_min >= kChoiFloor && trace_err <= kTraceError && gaps_ok;
  return {ok, "min Choi eigenvalue " + fmt("%.3g", choi_min) + ", trace error " + fmt("%.3g", trace_err) +
                  ", largest final gap " + fmt("%.3g", worst_final) + ", smallest gap order " +
                  fmt("%.3f", worst_order)};
}

Outcome endpoints() {
  const MapParams p;
  double worst = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const CMatrix x = unit(i, j);
      const cplx x11 = x(0, 0), x22 = x(1, 1), x33 = x(2, 2);
      CMatrix e1 = CMatrix::Zero(3, 3), e21 = CMatrix::Zero(3, 3), e321 = CMatrix::Zero(3, 3);
      e1.diagonal() << x11, x22, x33;
      e21.diagonal() << x11, x22 + x33, 0.0;
      e321.diagonal() << 0.5 * x11, 0.5 * (x22 + x33), 0.5 * (x11 + x22 + x33);
      worst = std::max(worst, oracle::max_abs(lambda_t(p.t1, p).apply(x) - e1));
      worst = std::max(worst, oracle::max_abs(lambda_t(p.t2, p).apply(x) - e21));
      worst = std::max(worst, oracle::max_abs(lambda_t(p.t3, p).apply(x) - e321));
    }
  const SuperOp last = lambda_t(p.t4, p);
  worst = std::max(worst, oracle::max_abs(last.apply(unit(0, 0)) - unit(0, 0)));
  worst = std::max(worst, oracle::max_abs(last.apply(unit(1, 1)) - oracle::projector(oracle::theta_ket(p.theta))));
  return {worst <= kEndpoint, "max entry error " + fmt("%.3g", worst)};
}

Outcome non_p_divisible() {
  const MapParams p;
  const auto w = positive_forcing_witness(counterexample_family(p), p.t3, p.t4);
  if (!w) return {false, "no forcing witness found"};
  const double oracle_value =
      oracle::trace_norm(oracle::diag3(1, 0, 0) - oracle::projector(oracle::theta_ket(p.theta)));
  const double shared = std::abs(w->shared_vector(2));
  MapParams near = p;
  near.theta = std::numbers::pi / 2 - 1e-3;
  const auto wn = positive_forcing_witness(counterexample_family(near), near.t3, near.t4);
  const double near_value = wn ? wn->discrepancy : -1.0;
  const bool ok = std::abs(shared - 1.0) <= kDiscrepancy && std::abs(w->discrepancy - oracle_value) <= kDiscrepancy &&
                  std::abs(near_value - 2e-3) <= kNearRightAngleRel * 2e-3;
  return {ok, "discrepancy " + fmt("%.9f", w->discrepancy) + " (oracle " + fmt("%.9f", oracle_value) +
                  "), |<3|v>| = " + fmt("%.12f", shared) + ", at pi/2 - 1e-3: " + fmt("%.6g", near_value)};
}

Outcome contractive(const MapParams& p) {
  const ProbeSet probes = random_probes(3, 500, kSeed, ProbeKind::random_hermitian);
  const ScanReport scan =
      norm_derivative_scan(counterexample_family(p), probes, half_open_grid(0.0, p.t4, 200), 1, kScanSlack);
  const ClosedFormMax best =
      closed_form_derivative_max(p.theta, stepped(0, 10, 100), stepped(0, 1, 100), p.delta, p.smoothing);
  const bool ok = scan.max_derivative <= kScanSlack && best.value <= kClosedForm;
  return {ok, "max right derivative " + fmt("%.3g", scan.max_derivative) + " at t = " + fmt("%.4f", scan.argmax_t) +
                  ", closed-form max " + fmt("%.3g", best.value)};
}

Outcome tightness() {
  const double at_one = gamma4_derivative_closed_form(1.0, 1.0, 1.6);
  const double expected = 2 * std::abs(std::cos(1.6)) + 2 * 1.6 * std::sin(1.6);
  const auto sweep = theta_window_sweep({1.6}, stepped(0, 1, 100), stepped(0, 10, 100));
  const double small = gamma4_derivative_closed_form(1.0, 0.01, 1.3);
  const double small_expected = (2 - 1.3 * 1.3) * 0.01;
  const bool ok = at_one > 0 && std::abs(at_one - expected) <= kTightnessAbs && sweep[0].overall.tau == 1.0 &&
                  small > 0 && std::abs(small - small_expected) <= kSmallTauRel * small_expected;
  return {ok, "theta 1.60, tau 1: " + fmt("%.6f", at_one) + " (expected " + fmt("%.6f", expected) +
                  "); theta 1.30, tau 0.01: " + fmt("%.6f", small) + " (expected " + fmt("%.6f", small_expected) +
                  ")"};
}

Outcome bound_chain() {
  std::vector<double> taus;
  for (int i = 1; i <= 200; ++i) taus.push_back(0.005 * i);
  const BoundChainReport chain = bound_chain_check(1.5, taus);
  int reflection_fail = 0, reflection_total = 0;
  double worst = 0.0;
  for (int il = 1; il < 20; ++il)
    for (int it = 0; it <= 20; ++it) {
      const double lambda = 0.05 * il, tau = 0.05 * it;
      const double direct = gamma4_derivative_closed_form(lambda, tau, 1.5);
      const double reflected = lambda * gamma4_derivative_closed_form(1.0 / lambda, tau, 1.5);
      worst = std::max(worst, std::abs(direct - reflected));
      ++reflection_total;
      if (!lambda_reflection_check(lambda, tau, 1.5) || std::abs(direct - reflected) > kReflection) ++reflection_fail;
    }
  const bool ok = chain.all_hold() && chain.lambda_monotone && reflection_fail == 0;
  return {ok, std::string("chain ") + (chain.all_hold() ? "holds" : "broken") + " on " +
                  std::to_string(taus.size()) + " points, max lambda slope " + fmt("%.3g", chain.max_lambda_slope) +
                  ", reflection worst " + fmt("%.3g", worst) + " over " + std::to_string(reflection_total) +
                  " points"};
}

Outcome gamma1_oracle() {
  const MapParams p;
  const auto& c = constants();
  oracle::Mat l0 = -3.0 * oracle::Mat::Identity(9, 9);
  for (const CMatrix* d : {&c.D1, &c.D2, &c.D3}) l0 += oracle::kron(d->conjugate(), *d);
  double worst = 0.0;
  for (int k = 1; k <= 9; ++k) {
    const double tau = 0.1 * k;
    const double g = -std::log(1 - tau);
    worst = std::max(worst, oracle::max_abs(gamma_family(1, tau, p).matrix() - oracle::expm(g * l0)));
    const double offdiag = gamma_family(1, tau, p).matrix()(3, 3).real();
    worst = std::max(worst, std::abs(offdiag - std::exp(-4 * g)));
  }
  return {worst <= kExpm, "max entry error " + fmt("%.3g", worst)};
}

Outcome smooth_variant() {
  MapParams p;
  p.theta = 1.55;
  p.delta = 1.05;
  bool gaps_ok = true;
  double worst_order = 1e9;
  std::string finals;
  for (const JunctionGaps& g : derivative_continuity_report(p, kLadder)) {
    gaps_ok = gaps_ok && g.strictly_decreasing();
    for (double o : g.orders()) {
      worst_order = std::min(worst_order, o);
      gaps_ok = gaps_ok && o > 0.0;
    }
    finals += (finals.empty() ? "" : "/") + fmt("%.3g", g.gaps.back());
  }
  const Outcome c = contractive(p);
  return {gaps_ok && c.pass, "derivative gaps at 1e-4: " + finals + ", smallest order " + fmt("%.3f", worst_order) +
                                 "; " + c.detail};
}

Outcome image_structure() {
  const MapParams p;
  const MapFamily family = counterexample_family(p);
  const std::vector<double> times = {0.5 * p.t1, p.t1, p.t2, 0.5 * (p.t2 + p.t3), p.t3, p.t4};
  const std::vector<int> expected = {9, 3, 2, 2, 2, 2};
  std::string ranks;
  bool ok = true;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const int r = image_basis(family(times[i])).rank();
    ok = ok && r == expected[i];
    ranks += (ranks.empty() ? "" : ",") + std::to_string(r);
  }
  const auto grid = closed_grid(p.t3, p.t4, 11);
  const bool nonincreasing = is_image_nonincreasing(family, grid);
  const double residual = image_inclusion_report(family, grid).max_residual;
  ok = ok && !nonincreasing && residual > kInclusionResidual;
  return {ok, "ranks " + ranks + ", nonincreasing on [t3, t4]: " + (nonincreasing ? "true" : "false") +
                  ", residual " + fmt("%.4f", residual)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"dynamical-map validity", dynamical_map},
      {"closed-form endpoint actions", endpoints},
      {"non-P-divisibility witness", non_p_divisible},
      {"monotone contractivity", [] { return contractive(MapParams{}); }},
      {"tightness of the theta window", tightness},
      {"bound chain and reflection", bound_chain},
      {"Gamma1 matrix-exponential oracle", gamma1_oracle},
      {"smooth variant", smooth_variant},
      {"image structure", image_structure},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o{false, ""};
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %zu: %s (%s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
