#include "qdyn/contractivity.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <string>
#include <thread>
#include <utility>

#include "qdyn/derivative.hpp"
#include "qdyn/errors.hpp"

namespace qdyn {

namespace {

// Superoperators at the times the first Richardson table needs, shared by all probes.
class TimeCache {
 public:
  TimeCache(const MapFamily& family, double t, double h0) : family_(family) {
    for (double x : {t, t + h0, t + h0 / 2, t + h0 / 4}) entries_.emplace_back(x, family(x));
  }

  SuperOp at(double x) const {
    for (const auto& [time, map] : entries_)
      if (time == x) return map;
    return family_(x);
  }

 private:
  const MapFamily& family_;
  std::vector<std::pair<double, SuperOp>> entries_;
};

template <typename Task>
void parallel_for(std::size_t count, Task task) {
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), count));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        task(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
}

double radius(double lambda, double angle) {
  return std::sqrt(1.0 + lambda * lambda + 2.0 * lambda * std::cos(angle));
}

void require_lambda_tau(double lambda, double tau, const char* what) {
  if (!(lambda >= 0.0)) throw DomainError(std::string(what) + ": lambda must be >= 0");
  if (!(tau >= 0.0 && tau <= 1.0)) throw DomainError(std::string(what) + ": tau outside [0, 1]");
}

}  // namespace

// ---------------------------------------------------------------------------
// Scans

std::vector<double> half_open_grid(double lo, double hi, int count) {
  if (count < 1 || !(hi > lo)) throw InvalidOperand("half_open_grid: need count >= 1 and hi > lo");
  std::vector<double> g(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) g[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / count;
  return g;
}

std::vector<double> closed_grid(double lo, double hi, int count) {
  if (count < 2 || !(hi > lo)) throw InvalidOperand("closed_grid: need count >= 2 and hi > lo");
  std::vector<double> g(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) g[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (count - 1);
  g.back() = hi;
  return g;
}

ScanReport norm_derivative_scan(const MapFamily& family, const ProbeSet& probes,
                                const std::vector<double>& grid, int k, double slack, double h0) {
  if (k < 1) throw InvalidOperand("norm_derivative_scan: ancilla dimension must be >= 1");
  if (probes.probes.empty() || grid.empty()) {
    throw InvalidOperand("norm_derivative_scan: need at least one probe and one grid point");
  }
  if (!std::is_sorted(grid.begin(), grid.end())) {
    throw InvalidOperand("norm_derivative_scan: grid must be ascending");
  }
  const int d = family(grid.front()).dim();
  if (probes.dim() != d * k) {
    throw InvalidOperand("norm_derivative_scan: probes have dimension " +
                         std::to_string(probes.dim()) + ", expected " + std::to_string(d * k));
  }

  const std::size_t g = grid.size();
  const std::size_t p = probes.size();
  ScanReport report;
  report.rows.resize(p * g);
  parallel_for(g, [&](std::size_t gi) {
    const double t = grid[gi];
    const TimeCache cache(family, t, h0);
    for (std::size_t pi = 0; pi < p; ++pi) {
      const CMatrix& x = probes.probes[pi].matrix();
      auto norm_at = [&](double time) {
        const SuperOp map = cache.at(time);
        const CMatrix out = k == 1 ? map.apply(x) : map.apply_with_ancilla(x, k);
        return trace_norm(HermOp::hermitized(out, tol::kMapHermitian));
      };
      const RightDerivative rd = right_derivative_detailed(norm_at, t, h0);
      report.rows[pi * g + gi] =
          ScanRow{t, static_cast<int>(pi), k, norm_at(t), rd.value, rd.value <= slack};
    }
  });

  report.slack = slack;
  report.seed = probes.seed;
  report.k = k;
  report.probe_kind = to_string(probes.kind);
  report.grid_points = g;
  report.grid_min = grid.front();
  report.grid_max = grid.back();
  report.exploratory = k > 1;
  for (const ScanRow& row : report.rows) {
    if (row.rderiv > report.max_derivative) {
      report.max_derivative = row.rderiv;
      report.argmax_t = row.t;
      report.argmax_probe = row.probe_id;
    }
    report.pass = report.pass && row.pass;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Closed forms

HermOp LambdaProbe::op() const {
  const ConstantsTable& c = constants();
  return c.rho_a - lambda * c.rho_b;
}

double gamma4_norm_closed_form(double lambda, double tau, double theta) {
  require_lambda_tau(lambda, tau, "gamma4_norm_closed_form");
  const double w = tau * tau;
  return 0.5 * ((1.0 - w) * std::abs(lambda - 1.0) + (1.0 + w) * radius(lambda, 2.0 * theta * tau));
}

double gamma4_derivative_closed_form(double lambda, double tau, double theta) {
  return gamma4_derivative_closed_form(lambda, tau, theta, 1.0, Smoothing::whole_segment);
}

double gamma4_norm_closed_form(double lambda, double tau, double theta, double delta,
                               Smoothing smoothing) {
  require_lambda_tau(lambda, tau, "gamma4_norm_closed_form");
  const double u = std::pow(tau, delta);
  if (smoothing == Smoothing::whole_segment) return gamma4_norm_closed_form(lambda, u, theta);
  const double w = tau * tau;
  return 0.5 * ((1.0 - w) * std::abs(lambda - 1.0) + (1.0 + w) * radius(lambda, 2.0 * theta * u));
}

double gamma4_derivative_closed_form(double lambda, double tau, double theta, double delta,
                                     Smoothing smoothing) {
  require_lambda_tau(lambda, tau, "gamma4_derivative_closed_form");
  if (!(delta >= 1.0)) throw DomainError("gamma4_derivative_closed_form: delta must be >= 1");
  const double u = std::pow(tau, delta);
  // d(tau^delta)/dtau; pow(0, 0) = 1 covers delta = 1 at tau = 0.
  const double du = delta * std::pow(tau, delta - 1.0);
  const double r = radius(lambda, 2.0 * theta * u);
  if (r <= 1e-12) {
    throw SingularPoint("gamma4_derivative_closed_form: singular at lambda = " +
                        std::to_string(lambda) + ", tau = " + std::to_string(tau));
  }
  const double rotation_term = lambda * theta * std::sin(2.0 * theta * u) / r;
  if (smoothing == Smoothing::whole_segment) {
    const double d1 = u * (-std::abs(lambda - 1.0) + r) - (1.0 + u * u) * rotation_term;
    return du * d1;
  }
  return tau * (-std::abs(lambda - 1.0) + r) - du * (1.0 + tau * tau) * rotation_term;
}

ClosedFormMax closed_form_derivative_max(double theta, const std::vector<double>& lambdas,
                                         const std::vector<double>& taus, double delta,
                                         Smoothing smoothing) {
  ClosedFormMax best;
  for (double tau : taus) {
    for (double lambda : lambdas) {
      double v = 0.0;
      try {
        v = gamma4_derivative_closed_form(lambda, tau, theta, delta, smoothing);
      } catch (const SingularPoint&) {
        ++best.singular_points;
        continue;
      }
      if (v > best.value) best = {v, lambda, tau, best.singular_points};
    }
  }
  return best;
}

std::vector<ThetaSweepRow> theta_window_sweep(const std::vector<double>& thetas,
                                              const std::vector<double>& taus,
                                              const std::vector<double>& lambdas) {
  std::vector<ThetaSweepRow> out;
  for (double theta : thetas) {
    if (!(theta > 0.0 && theta < std::numbers::pi)) {
      throw DomainError("theta_window_sweep: theta outside (0, pi)");
    }
    ThetaSweepRow row;
    row.theta = theta;
    row.overall = closed_form_derivative_max(theta, lambdas, taus);
    std::vector<double> small;
    for (double tau : taus)
      if (tau <= kSmallTau) small.push_back(tau);
    if (!small.empty()) row.max_small_tau = closed_form_derivative_max(theta, lambdas, small).value;
    if (std::find(taus.begin(), taus.end(), 1.0) != taus.end()) {
      row.max_at_tau_one = closed_form_derivative_max(theta, lambdas, {1.0}).value;
    }
    row.violation = row.overall.value > tol::kClosedFormSlack;
    out.push_back(row);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Bound chain

double bracket_lambda_slope(double lambda, double theta_tau) {
  const double c = std::cos(2.0 * theta_tau);
  return -1.0 + (lambda + c) / radius(lambda, 2.0 * theta_tau);
}

bool BoundChainReport::all_hold() const {
  if (!lambda_monotone || !maximum_at_lambda_one) return false;
  return std::all_of(rows.begin(), rows.end(), [](const BoundChainRow& r) { return r.holds(); });
}

BoundChainReport bound_chain_check(double theta, const std::vector<double>& taus,
                                   std::vector<double> lambdas) {
  if (!(theta >= 0.0 && theta <= std::numbers::pi / 2)) {
    throw DomainError("bound_chain_check: theta outside [0, pi/2]");
  }
  if (lambdas.empty()) {
    for (int i = 0; i <= 90; ++i) lambdas.push_back(1.0 + 0.1 * i);
  }
  constexpr double slack = tol::kClosedFormSlack;
  BoundChainReport report;
  report.theta = theta;
  for (double tau : taus) {
    BoundChainRow row;
    row.tau = tau;
    const double angle = theta * tau;
    row.sup_derivative = closed_form_derivative_max(theta, lambdas, {tau}).value;
    row.bound_sqrt = tau * std::sqrt(2.0 + 2.0 * std::cos(2.0 * angle)) -
                     (1.0 + tau * tau) * 0.5 * theta * std::sin(2.0 * angle);
    row.bracket = 2.0 * tau - (1.0 + tau * tau) * theta * std::sin(angle);
    row.cos_factor = std::cos(angle);
    row.bound_cos = row.cos_factor * row.bracket;
    const double t2 = theta * theta;
    row.polynomial = (2.0 - t2) * tau - (t2 - t2 * t2 / 3.0) * tau * tau * tau;
    row.derivative_below_sqrt_bound = row.sup_derivative <= row.bound_sqrt + slack;
    row.sqrt_bound_below_cos_bound = row.bound_sqrt <= row.bound_cos + slack;
    row.bracket_below_polynomial = row.bracket <= row.polynomial + slack;
    row.polynomial_nonpositive = row.polynomial <= slack;
    row.cos_nonnegative = row.cos_factor >= -slack;

    double best_first = -std::numeric_limits<double>::infinity();
    double best_lambda = 0.0;
    for (double lambda : lambdas) {
      const double slope = bracket_lambda_slope(lambda, angle);
      report.max_lambda_slope = std::max(report.max_lambda_slope, slope);
      if (slope > slack) report.lambda_monotone = false;
      const double first = tau * (1.0 - lambda + radius(lambda, 2.0 * angle));
      if (first > best_first + slack) {
        best_first = first;
        best_lambda = lambda;
      }
    }
    if (best_lambda != lambdas.front() || lambdas.front() != 1.0) report.maximum_at_lambda_one = false;
    report.rows.push_back(row);
  }
  return report;
}

bool lambda_reflection_check(double lambda, double tau, double theta) {
  if (!(lambda > 0.0 && lambda < 1.0)) {
    throw DomainError("lambda_reflection_check: lambda must lie in (0, 1)");
  }
  const double direct = gamma4_derivative_closed_form(lambda, tau, theta);
  const double reflected = lambda * gamma4_derivative_closed_form(1.0 / lambda, tau, theta);
  return std::abs(direct - reflected) <= 1e-10;
}

}  // namespace qdyn
