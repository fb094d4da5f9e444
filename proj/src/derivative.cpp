#include "qdyn/derivative.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qdyn/errors.hpp"

namespace qdyn {

namespace {

constexpr int kMaxContractions = 3;
constexpr double kContraction = 16.0;

// Relative consistency demanded of the Richardson table before accepting it.
bool consistent(double r2, double r1, double scale) {
  return std::abs(r2 - r1) <= 1e-7 * std::max(1.0, scale);
}

}  // namespace

RightDerivative right_derivative_detailed(const std::function<double(double)>& f, double t,
                                          double h0) {
  if (!(h0 > 0.0)) {
    throw InvalidOperand("right_derivative: step must be positive, got " + std::to_string(h0));
  }
  const double f0 = f(t);
  RightDerivative out;
  double h = h0;
  for (int attempt = 0; attempt <= kMaxContractions; ++attempt, h /= kContraction) {
    const double d1 = (f(t + h) - f0) / h;
    const double d2 = (f(t + h / 2) - f0) / (h / 2);
    const double d4 = (f(t + h / 4) - f0) / (h / 4);
    const double r1_coarse = 2.0 * d2 - d1;
    const double r1_fine = 2.0 * d4 - d2;
    const double r2 = (4.0 * r1_fine - r1_coarse) / 3.0;
    out = {r2, h, std::abs(r2 - r1_fine)};
    if (consistent(r2, r1_fine, std::abs(d1))) break;
  }
  return out;
}

double right_derivative(const std::function<double(double)>& f, double t, double h0) {
  return right_derivative_detailed(f, t, h0).value;
}

}  // namespace qdyn
