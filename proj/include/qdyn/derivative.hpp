#pragma once

#include <functional>

#include "qdyn/tolerances.hpp"

namespace qdyn {

struct RightDerivative {
  double value = 0.0;
  /// First step of the Richardson table that produced `value`.
  double step = 0.0;
  /// |R2 - R1| between the last two extrapolation levels.
  double error_estimate = 0.0;
};

/**
 * One-sided derivative lim_{h -> 0+} (f(t+h) - f(t)) / h.
 *
 * Forward differences at h0, h0/2, h0/4 are combined by two Richardson
 * levels (error O(h0^3) for smooth f). Trace-norm trajectories have kinks
 * where an eigenvalue crosses zero; when one falls inside (t, t+h0] the
 * table becomes inconsistent, and the step is contracted by 16 (at most
 * three times) until it lies left of the kink. f is only evaluated on
 * [t, t+h0].
 */
RightDerivative right_derivative_detailed(const std::function<double(double)>& f, double t,
                                          double h0 = tol::kDerivativeStep);

double right_derivative(const std::function<double(double)>& f, double t,
                        double h0 = tol::kDerivativeStep);

}  // namespace qdyn
