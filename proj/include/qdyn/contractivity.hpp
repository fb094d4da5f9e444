#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "qdyn/counterexample.hpp"
#include "qdyn/probes.hpp"
#include "qdyn/superop.hpp"
#include "qdyn/tolerances.hpp"

namespace qdyn {

// ---------------------------------------------------------------------------
// Right-derivative scans of t -> ||(Lambda_t (x) 1_k)(X)||_1

struct ScanRow {
  double t = 0.0;
  int probe_id = 0;
  int k = 1;
  double norm = 0.0;
  double rderiv = 0.0;
  bool pass = true;
};

struct ScanReport {
  /// Sorted by (probe_id, t).
  std::vector<ScanRow> rows;

  double max_derivative = -std::numeric_limits<double>::infinity();
  double argmax_t = 0.0;
  int argmax_probe = -1;
  double slack = tol::kDerivativeSlack;
  bool pass = true;

  std::uint64_t seed = 0;
  int k = 1;
  std::string probe_kind;
  std::size_t grid_points = 0;
  double grid_min = 0.0;
  double grid_max = 0.0;
  /// k > 1 scans carry no claim to check against.
  bool exploratory = false;
};

/**
 * For every probe and grid time, the right derivative of the trace norm of
 * (Lambda_t (x) 1_k)(X). A row fails when its derivative exceeds `slack`.
 * Probes must live on C^d (x) C^k. The family must be defined on
 * [t, t + h0] for every grid time.
 */
ScanReport norm_derivative_scan(const MapFamily& family, const ProbeSet& probes,
                                const std::vector<double>& grid, int k = 1,
                                double slack = tol::kDerivativeSlack,
                                double h0 = tol::kDerivativeStep);

/// Evenly spaced grid of `count` points on [lo, hi) (hi excluded).
std::vector<double> half_open_grid(double lo, double hi, int count);
/// Evenly spaced grid of `count` points on [lo, hi] (both included).
std::vector<double> closed_grid(double lo, double hi, int count);

// ---------------------------------------------------------------------------
// Closed forms on the last segment

/// rho_A - lambda * rho_B, the general element of Im(E3 E2 E1) up to scale.
struct LambdaProbe {
  double lambda = 0.0;
  HermOp op() const;
};

/// ||Gamma4_tau(rho_A - lambda rho_B)||_1
///   = 1/2 [ (1 - tau^2)|lambda - 1| + (1 + tau^2) sqrt(1 + lambda^2 + 2 lambda cos(2 theta tau)) ].
double gamma4_norm_closed_form(double lambda, double tau, double theta);

/// d/dtau of the norm above:
///   tau [ -|lambda-1| + R ] - lambda theta (1 + tau^2) sin(2 theta tau) / R,
///   R = sqrt(1 + lambda^2 + 2 lambda cos(2 theta tau)).
/// Throws SingularPoint where R vanishes (lambda = 1, 2 theta tau = pi).
double gamma4_derivative_closed_form(double lambda, double tau, double theta);

/// Smoothed variants for delta >= 1 (see Smoothing).
double gamma4_norm_closed_form(double lambda, double tau, double theta, double delta,
                               Smoothing smoothing);
double gamma4_derivative_closed_form(double lambda, double tau, double theta, double delta,
                                     Smoothing smoothing);

/// Largest closed-form derivative on a (lambda, tau) grid; singular points are skipped.
struct ClosedFormMax {
  double value = -std::numeric_limits<double>::infinity();
  double lambda = 0.0;
  double tau = 0.0;
  int singular_points = 0;
};

ClosedFormMax closed_form_derivative_max(double theta, const std::vector<double>& lambdas,
                                         const std::vector<double>& taus, double delta = 1.0,
                                         Smoothing smoothing = Smoothing::whole_segment);

/// Sign structure of the closed-form derivative per theta.
struct ThetaSweepRow {
  double theta = 0.0;
  ClosedFormMax overall;
  /// Max over tau <= kSmallTau.
  double max_small_tau = -std::numeric_limits<double>::infinity();
  /// Max over lambda at tau = 1 (when the tau grid contains 1).
  double max_at_tau_one = -std::numeric_limits<double>::infinity();
  bool violation = false;
};

inline constexpr double kSmallTau = 0.1;

std::vector<ThetaSweepRow> theta_window_sweep(const std::vector<double>& thetas,
                                              const std::vector<double>& taus,
                                              const std::vector<double>& lambdas);

/**
 * Pointwise ledger of the upper-bound chain for lambda >= 1:
 *
 *   sup_lambda D(lambda)                             (sampled lambdas)
 *   <= tau sqrt(2 + 2cos(2 theta tau)) - (1 + tau^2)(theta/2) sin(2 theta tau)
 *   <= cos(theta tau) [2 tau - (1 + tau^2) theta sin(theta tau)]
 *   with bracket <= (2 - theta^2) tau - (theta^2 - theta^4/3) tau^3 <= 0.
 */
struct BoundChainRow {
  double tau = 0.0;
  double sup_derivative = 0.0;
  double bound_sqrt = 0.0;
  double bound_cos = 0.0;
  double bracket = 0.0;
  double polynomial = 0.0;
  double cos_factor = 0.0;
  bool derivative_below_sqrt_bound = true;
  bool sqrt_bound_below_cos_bound = true;
  bool bracket_below_polynomial = true;
  bool polynomial_nonpositive = true;
  bool cos_nonnegative = true;

  bool holds() const {
    return derivative_below_sqrt_bound && sqrt_bound_below_cos_bound && bracket_below_polynomial &&
           polynomial_nonpositive && cos_nonnegative;
  }
};

struct BoundChainReport {
  double theta = 0.0;
  std::vector<BoundChainRow> rows;
  /// d/dlambda of tau[1 - lambda + R] is <= 0 on the (lambda, theta tau) grid.
  bool lambda_monotone = true;
  double max_lambda_slope = -std::numeric_limits<double>::infinity();
  /// The first term tau[1 - lambda + R] peaks at lambda = 1 on every tau.
  bool maximum_at_lambda_one = true;

  bool all_hold() const;
};

/// theta in [0, pi/2]; lambdas default to [1, 10] step 0.1.
BoundChainReport bound_chain_check(double theta, const std::vector<double>& taus,
                                   std::vector<double> lambdas = {});

/// (-1 + (lambda + c) / R) with c = cos(2 theta tau), the lambda-slope of the bracket.
double bracket_lambda_slope(double lambda, double theta_tau);

/// D(lambda) == lambda * D(1/lambda) within 1e-10, for 0 < lambda < 1.
bool lambda_reflection_check(double lambda, double tau, double theta);

}  // namespace qdyn
