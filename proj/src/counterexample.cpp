#include "qdyn/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <string>

#include "qdyn/errors.hpp"

namespace qdyn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_unit_interval(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError(std::string(what) + ": argument " + std::to_string(x) +
                      " outside [0, 1]");
  }
}

CMatrix diag3(double a, double b, double c) {
  CMatrix m = CMatrix::Zero(3, 3);
  m(0, 0) = a;
  m(1, 1) = b;
  m(2, 2) = c;
  return m;
}

ConstantsTable build_constants() {
  ConstantsTable c{diag3(-1, 1, 1), diag3(1, -1, 1), diag3(1, 1, -1), CMatrix::Zero(3, 3),
                   CMatrix::Zero(3, 3), HermOp::diagonal({0.5, 0.0, 0.5}),
                   HermOp::diagonal({0.0, 0.5, 0.5})};
  c.K2(0, 0) = 1.0;
  c.K2(1, 1) = 1.0;
  c.K2(1, 2) = 1.0;
  c.G(0, 1) = cplx(0.0, -1.0);
  c.G(1, 0) = cplx(0.0, 1.0);
  return c;
}

// Gamma^(4) with weight exponent applied to `weight_tau` and rotation to `angle_tau`.
SuperOp gamma4(double weight_tau, double angle_tau, double theta) {
  const double w = weight_tau * weight_tau;
  const CVector phi = theta_ket(theta * angle_tau);
  const CMatrix phi_proj = phi * phi.adjoint();
  const CMatrix p1 = HermOp::basis_projector(3, 0).matrix();
  const CMatrix p3 = HermOp::basis_projector(3, 2).matrix();
  return SuperOp::from_action(3, [&](const CMatrix& x) -> CMatrix {
    return (1.0 + w) * (x(0, 0) * p1 + x(1, 1) * phi_proj) + (1.0 - w) * (x(0, 0) + x(1, 1)) * p3;
  });
}

SuperOp mixture_with_identity(double f, const SuperOp& target) {
  const double keep = std::exp(-f);
  return SuperOp::identity(3) * keep + target * (1.0 - keep);
}

// Precomputed pieces of the family for one parameter set.
class Counterexample {
 public:
  explicit Counterexample(MapParams params) : p_(std::move(params)) {
    p_.validate();
    e1_ = make_E(1, p_);
    e2_ = make_E(2, p_);
    e3_ = make_E(3, p_);
    e21_ = compose(e2_, e1_);
    e321_ = compose(e3_, e21_);
  }

  SuperOp at(double t) const {
    if (!(t >= 0.0 && t <= p_.t4)) {
      throw DomainError("lambda_t: t = " + std::to_string(t) + " outside [0, " +
                        std::to_string(p_.t4) + "]");
    }
    if (t < p_.t1) return gamma_family(1, t / p_.t1, p_);
    if (t < p_.t2) {
      return compose(mixture_with_identity(p_.f1.value(fraction(t, p_.t1, p_.t2)), e2_), e1_);
    }
    if (t < p_.t3) {
      return compose(mixture_with_identity(p_.f2.value(fraction(t, p_.t2, p_.t3)), e3_), e21_);
    }
    return compose(gamma_family(4, fraction(t, p_.t3, p_.t4), p_), e321_);
  }

 private:
  static double fraction(double t, double lo, double hi) {
    return std::clamp((t - lo) / (hi - lo), 0.0, 1.0);
  }

  MapParams p_;
  SuperOp e1_ = SuperOp::identity(3);
  SuperOp e2_ = SuperOp::identity(3);
  SuperOp e3_ = SuperOp::identity(3);
  SuperOp e21_ = SuperOp::identity(3);
  SuperOp e321_ = SuperOp::identity(3);
};

}  // namespace

// ---------------------------------------------------------------------------
// RateFunction

RateFunction RateFunction::pole_rate() { return {RateKind::default_pole, Shape::pole_rate}; }

RateFunction RateFunction::pole_switch() { return {RateKind::default_pole, Shape::pole_switch}; }

RateFunction RateFunction::tabulated(std::vector<double> nodes, std::vector<double> values) {
  if (nodes.size() < 2 || nodes.size() != values.size()) {
    throw InvalidOperand("RateFunction::tabulated: need >= 2 nodes with matching values");
  }
  if (nodes.front() != 0.0 || !(nodes.back() < 1.0)) {
    throw InvalidOperand("RateFunction::tabulated: nodes must start at 0 and end below 1");
  }
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (!(nodes[i] > nodes[i - 1])) {
      throw InvalidOperand("RateFunction::tabulated: nodes must be strictly ascending");
    }
  }
  RateFunction r(RateKind::custom_tabulated, Shape::table);
  r.nodes_ = std::move(nodes);
  r.values_ = std::move(values);
  return r;
}

double RateFunction::value(double x) const {
  require_unit_interval(x, "RateFunction::value");
  if (x == 1.0) return kInf;
  switch (shape_) {
    case Shape::pole_rate: return 1.0 / (1.0 - x);
    case Shape::pole_switch: return x * x / (1.0 - x);
    case Shape::table: break;
  }
  const double xn = nodes_.back();
  if (x > xn) return values_.back() * (1.0 - xn) / (1.0 - x);
  const auto hi = std::upper_bound(nodes_.begin(), nodes_.end(), x);
  if (hi == nodes_.end()) return values_.back();
  const auto k = static_cast<std::size_t>(hi - nodes_.begin());
  const double w = (x - nodes_[k - 1]) / (nodes_[k] - nodes_[k - 1]);
  return (1.0 - w) * values_[k - 1] + w * values_[k];
}

double RateFunction::cumulative(double x) const {
  require_unit_interval(x, "RateFunction::cumulative");
  if (x == 1.0) return kInf;
  switch (shape_) {
    case Shape::pole_rate: return -std::log1p(-x);
    case Shape::pole_switch: return -x - 0.5 * x * x - std::log1p(-x);
    case Shape::table: break;
  }
  double total = 0.0;
  for (std::size_t k = 1; k < nodes_.size() && nodes_[k - 1] < x; ++k) {
    const double right = std::min(x, nodes_[k]);
    total += 0.5 * (values_[k - 1] + value(right)) * (right - nodes_[k - 1]);
  }
  const double xn = nodes_.back();
  if (x > xn) total += values_.back() * (1.0 - xn) * std::log((1.0 - xn) / (1.0 - x));
  return total;
}

void RateFunction::validate_as_rate(const char* name) const {
  for (int k = 0; k < 1000; ++k) {
    const double x = k / 1000.0;
    const double v = value(x);
    if (!(std::isfinite(v) && v > 0.0)) {
      throw InvalidOperand(std::string(name) + ": rate must be positive and finite on [0, 1)");
    }
  }
}

void RateFunction::validate_as_switch(const char* name) const {
  if (value(0.0) != 0.0) throw InvalidOperand(std::string(name) + ": f(0) must be 0");
  double previous = 0.0;
  for (int k = 1; k < 1000; ++k) {
    const double v = value(k / 1000.0);
    if (!(std::isfinite(v) && v > previous)) {
      throw InvalidOperand(std::string(name) + ": f must be finite and strictly increasing on [0, 1)");
    }
    previous = v;
  }
}

// ---------------------------------------------------------------------------
// Parameters

std::string to_string(Smoothing s) {
  return s == Smoothing::whole_segment ? "whole-segment" : "rotation-only";
}

void MapParams::validate() const {
  if (!(0.0 < t1 && t1 < t2 && t2 < t3 && t3 < t4)) {
    throw InvalidOperand("MapParams: need 0 < t1 < t2 < t3 < t4");
  }
  if (!(theta > 0.0 && theta < std::numbers::pi)) {
    throw InvalidOperand("MapParams: theta must lie in (0, pi)");
  }
  if (!(delta >= 1.0)) throw InvalidOperand("MapParams: delta must be >= 1");
  gamma.validate_as_rate("gamma");
  f1.validate_as_switch("f1");
  f2.validate_as_switch("f2");
}

bool MapParams::in_contractive_window() const {
  return theta >= std::numbers::sqrt2 && theta <= std::numbers::pi / 2;
}

double MapParams::min_segment() const {
  return std::min({t1, t2 - t1, t3 - t2, t4 - t3});
}

// ---------------------------------------------------------------------------
// Constants and maps

const ConstantsTable& constants() {
  static const ConstantsTable table = build_constants();
  return table;
}

CMatrix rotation(double angle) {
  const CMatrix& g = constants().G;
  return CMatrix::Identity(3, 3) + (std::cos(angle) - 1.0) * (g * g) +
         cplx(0.0, std::sin(angle)) * g;
}

CVector theta_ket(double angle) {
  CVector v = CVector::Zero(3);
  v(0) = std::sin(angle);
  v(1) = std::cos(angle);
  return v;
}

SuperOp make_E(int index, const MapParams& params) {
  const ConstantsTable& c = constants();
  switch (index) {
    case 1: {
      const CMatrix id = CMatrix::Identity(3, 3);
      return from_kraus(KrausSet{{0.5 * id, 0.5 * c.D1, 0.5 * c.D2, 0.5 * c.D3}});
    }
    case 2: return from_kraus(KrausSet{{c.K2}});
    case 3:
      return SuperOp::from_action(3, [&](const CMatrix& x) -> CMatrix {
        return x(0, 0) * c.rho_a.matrix() + x(1, 1) * c.rho_b.matrix();
      });
    case 4: return gamma4(1.0, 1.0, params.theta);
    default: throw DomainError("make_E: index " + std::to_string(index) + " outside 1..4");
  }
}

SuperOp dephasing_generator() {
  const ConstantsTable& c = constants();
  return from_kraus(KrausSet{{c.D1, c.D2, c.D3}}) - SuperOp::identity(3) * 3.0;
}

SuperOp gkls_generator(double s, const MapParams& params) {
  return dephasing_generator() * params.gamma.value(s);
}

SuperOp gamma_family(int index, double tau, const MapParams& params) {
  require_unit_interval(tau, "gamma_family");
  switch (index) {
    case 1: {
      // exp(g L0) keeps populations and scales every coherence by exp(-4 g).
      const double decay = tau < 1.0 ? std::exp(-4.0 * params.gamma.cumulative(tau)) : 0.0;
      CMatrix m = CMatrix::Zero(9, 9);
      for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) m(j * 3 + i, j * 3 + i) = (i == j) ? 1.0 : decay;
      return SuperOp(3, std::move(m));
    }
    case 2: return mixture_with_identity(params.f1.value(tau), make_E(2, params));
    case 3: return mixture_with_identity(params.f2.value(tau), make_E(3, params));
    case 4: {
      const double smoothed = std::pow(tau, params.delta);
      const double weight_tau =
          params.smoothing == Smoothing::whole_segment ? smoothed : tau;
      return gamma4(weight_tau, smoothed, params.theta);
    }
    default: throw DomainError("gamma_family: index " + std::to_string(index) + " outside 1..4");
  }
}

SuperOp lambda_t(double t, const MapParams& params) { return Counterexample(params).at(t); }

MapFamily counterexample_family(const MapParams& params) {
  auto shared = std::make_shared<const Counterexample>(params);
  return [shared](double t) { return shared->at(t); };
}

// ---------------------------------------------------------------------------
// Junction diagnostics

bool JunctionGaps::strictly_decreasing() const {
  for (std::size_t k = 1; k < gaps.size(); ++k)
    if (!(gaps[k] < gaps[k - 1])) return false;
  return true;
}

std::vector<double> JunctionGaps::orders() const {
  std::vector<double> out;
  for (std::size_t k = 1; k < gaps.size(); ++k) {
    out.push_back(std::log(gaps[k - 1] / gaps[k]) / std::log(epsilons[k - 1] / epsilons[k]));
  }
  return out;
}

namespace {

void require_ladder(const MapParams& params, const std::vector<double>& ladder) {
  for (double eps : ladder) {
    if (!(eps > 0.0 && eps < params.min_segment() / 2)) {
      throw DomainError("junction ladder: epsilon " + std::to_string(eps) +
                        " must lie in (0, shortest segment / 2)");
    }
  }
}

template <typename Probe>
std::vector<JunctionGaps> junction_gaps(const MapParams& params, const std::vector<double>& ladder,
                                        Probe probe) {
  require_ladder(params, ladder);
  std::vector<JunctionGaps> out;
  for (double junction : {params.t1, params.t2, params.t3}) {
    JunctionGaps g;
    g.junction = junction;
    for (double eps : ladder) {
      g.epsilons.push_back(eps);
      g.gaps.push_back(max_abs_entry(probe(junction - eps, eps) - probe(junction + eps, eps)));
    }
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace

std::vector<JunctionGaps> continuity_report(const MapParams& params,
                                            const std::vector<double>& ladder) {
  const Counterexample family(params);
  return junction_gaps(params, ladder,
                       [&](double t, double) -> CMatrix { return family.at(t).matrix(); });
}

std::vector<JunctionGaps> derivative_continuity_report(const MapParams& params,
                                                       const std::vector<double>& ladder) {
  const Counterexample family(params);
  return junction_gaps(params, ladder, [&](double t, double eps) -> CMatrix {
    const double h = eps / 100.0;
    return (family.at(t + h).matrix() - family.at(t - h).matrix()) / (2.0 * h);
  });
}

}  // namespace qdyn
