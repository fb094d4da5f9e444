#pragma once

// Numerical tolerances shared across the toolkit. Each constant names the
// quantity it bounds; tests and the verification suite read them from here.

namespace qdyn::tol {

/// Absolute entrywise bound on X - X^dagger for an operator to count as Hermitian.
inline constexpr double kHermitian = 1e-12;
/// Hermiticity slack for outputs of Hermiticity-preserving maps.
inline constexpr double kMapHermitian = 1e-10;
/// Eigenvalues above -kPsd count as nonnegative (states, Choi matrices).
inline constexpr double kPsd = 1e-10;
/// Trace preservation slack.
inline constexpr double kTracePreserving = 1e-10;
/// Unit-trace slack for density operators.
inline constexpr double kUnitTrace = 1e-12;
/// Slack for "derivative <= 0" assertions on finite-difference estimates.
inline constexpr double kDerivativeSlack = 1e-6;
/// Slack for "<= 0" assertions on closed-form expressions.
inline constexpr double kClosedFormSlack = 1e-12;
/// Relative singular-value cutoff for ranks, images and pseudoinverses.
inline constexpr double kRankCutoff = 1e-8;
/// Eigenvalue cutoff used for supports and support intersections.
inline constexpr double kSupportCutoff = 1e-8;
/// A state is treated as pure when trace(rho^2) > 1 - kPurity.
inline constexpr double kPurity = 1e-8;
/// Max-entry residual below which an intermediate map reproduces the later map.
inline constexpr double kIntermediateResidual = 1e-8;
/// Default first step of the right-derivative estimator.
inline constexpr double kDerivativeStep = 1e-4;

}  // namespace qdyn::tol
