#pragma once

// The qutrit dynamical map built from the maps E1..E4 and the families
// Gamma^(1)..Gamma^(4):
//
//   Lambda_t = Gamma1_{t/t1}                                 0  <= t < t1
//            = Gamma2_{(t-t1)/(t2-t1)} E1                    t1 <= t < t2
//            = Gamma3_{(t-t2)/(t3-t2)} E2 E1                 t2 <= t < t3
//            = Gamma4_{(t-t3)/(t4-t3)} E3 E2 E1              t3 <= t <= t4
//
// Basis kets |1>,|2>,|3> are indices 0,1,2.
//
// Parameter files are plain text, one `key = value` per line, `#` starts a
// comment. Keys: theta, t1, t2, t3, t4, delta, rate (only `default-pole`),
// smoothing (`whole-segment` or `rotation-only`).

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "qdyn/operator.hpp"
#include "qdyn/superop.hpp"

namespace qdyn {

enum class RateKind { default_pole, custom_tabulated };

/**
 * Scalar rate/switching function on [0, 1] with a singularity at 1.
 *
 * pole_rate():   gamma(s) = 1/(1-s), cumulative -ln(1-s).
 * pole_switch(): f(tau) = tau^2/(1-tau).
 * tabulated():   piecewise linear through (node, value) pairs starting at
 *                node 0; past the last node x_n the tail v_n (1-x_n)/(1-x)
 *                continues it to a pole at 1.
 * value(1) and cumulative(1) are +infinity.
 */
class RateFunction {
 public:
  static RateFunction pole_rate();
  static RateFunction pole_switch();
  static RateFunction tabulated(std::vector<double> nodes, std::vector<double> values);

  RateKind kind() const { return kind_; }
  double value(double x) const;
  double cumulative(double x) const;

  /// Positive and finite on [0, 1); throws InvalidOperand otherwise.
  void validate_as_rate(const char* name) const;
  /// f(0) = 0 and strictly increasing on [0, 1); throws InvalidOperand otherwise.
  void validate_as_switch(const char* name) const;

 private:
  enum class Shape { pole_rate, pole_switch, table };
  RateFunction(RateKind kind, Shape shape) : kind_(kind), shape_(shape) {}

  RateKind kind_;
  Shape shape_;
  std::vector<double> nodes_;
  std::vector<double> values_;
};

/// Where the tau -> tau^delta substitution acts inside Gamma^(4).
enum class Smoothing {
  /// Weights and rotation both use tau^delta (monotone reparametrization of segment 4).
  whole_segment,
  /// Only the rotation angle uses tau^delta; weights keep (1 +- tau^2).
  rotation_only,
};

std::string to_string(Smoothing s);

struct MapParams {
  double theta = 1.5;
  double t1 = 1.0;
  double t2 = 2.0;
  double t3 = 3.0;
  double t4 = 4.0;
  RateFunction gamma = RateFunction::pole_rate();
  RateFunction f1 = RateFunction::pole_switch();
  RateFunction f2 = RateFunction::pole_switch();
  double delta = 1.0;
  Smoothing smoothing = Smoothing::whole_segment;

  /// Throws InvalidOperand on ordering, range or rate-function violations.
  void validate() const;
  /// theta in [sqrt(2), pi/2], where monotone contractivity is guaranteed.
  bool in_contractive_window() const;
  /// Shortest of the four segments.
  double min_segment() const;
};

MapParams parse_params(std::istream& in);
MapParams load_params(const std::filesystem::path& path);

struct ConstantsTable {
  CMatrix D1, D2, D3, K2, G;
  HermOp rho_a, rho_b;
};

const ConstantsTable& constants();

/// exp(i G angle) in closed form: I + (cos a - 1) G^2 + i sin(a) G.
CMatrix rotation(double angle);
/// exp(i G angle)|2> = sin(angle)|1> + cos(angle)|2>.
CVector theta_ket(double angle);

/// E1..E4 (index 1-based). E4 is Gamma^(4) at tau = 1.
SuperOp make_E(int index, const MapParams& params);

/// L0(X) = D1 X D1 + D2 X D2 + D3 X D3 - 3X.
SuperOp dephasing_generator();
/// L_s = gamma(s) L0.
SuperOp gkls_generator(double s, const MapParams& params);

/// Gamma^(index)_tau, tau in [0, 1]; Gamma^(1)_1 is its limit E1.
SuperOp gamma_family(int index, double tau, const MapParams& params);

/// Lambda_t for t in [0, t4].
SuperOp lambda_t(double t, const MapParams& params);

/// Lambda_t as a callable family; params are copied.
MapFamily counterexample_family(const MapParams& params);

struct JunctionGaps {
  double junction = 0.0;
  std::vector<double> epsilons;
  std::vector<double> gaps;

  bool strictly_decreasing() const;
  /// Empirical orders log(g_k/g_{k+1}) / log(eps_k/eps_{k+1}).
  std::vector<double> orders() const;
};

/// ||Lambda_{t-eps} - Lambda_{t+eps}|| (max entry) at t1, t2, t3 for each eps.
std::vector<JunctionGaps> continuity_report(const MapParams& params,
                                            const std::vector<double>& ladder);

/// Same gaps for central-difference time derivatives (step eps/100) of Lambda.
std::vector<JunctionGaps> derivative_continuity_report(const MapParams& params,
                                                       const std::vector<double>& ladder);

}  // namespace qdyn
