#pragma once

// Reference computations used only by the tests. Each one is written from
// first principles (explicit loops, textbook series) so it shares no code
// path with the library.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;

inline Mat random_matrix(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Mat a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = cplx(n(rng), n(rng));
  return a;
}

inline Mat random_hermitian(int dim, std::mt19937_64& rng) {
  Mat a = random_matrix(dim, rng);
  return (a + a.adjoint()) * 0.5;
}

inline Mat random_density(int dim, std::mt19937_64& rng) {
  Mat a = random_matrix(dim, rng);
  Mat r = a * a.adjoint();
  return r / r.trace().real();
}

// Faddeev-LeVerrier: coefficients c[0..n] of det(zI - A) = sum c[k] z^(n-k).
inline std::vector<cplx> characteristic_polynomial(const Mat& a) {
  const int n = static_cast<int>(a.rows());
  std::vector<cplx> c(n + 1);
  c[0] = 1.0;
  Mat m = Mat::Zero(n, n);
  const Mat id = Mat::Identity(n, n);
  for (int k = 1; k <= n; ++k) {
    m = a * m + c[k - 1] * id;
    c[k] = -(a * m).trace() / static_cast<double>(k);
  }
  return c;
}

// Durand-Kerner simultaneous iteration on a monic polynomial.
inline std::vector<cplx> polynomial_roots(const std::vector<cplx>& c) {
  const int n = static_cast<int>(c.size()) - 1;
  std::vector<cplx> z(n);
  double radius = 1.0;
  for (int k = 1; k <= n; ++k) radius = std::max(radius, 1.0 + std::abs(c[k]));
  for (int k = 0; k < n; ++k) z[k] = radius * std::polar(1.0, 0.4 + 2.0 * M_PI * k / n);
  auto eval = [&](cplx x) {
    cplx v = c[0];
    for (int k = 1; k <= n; ++k) v = v * x + c[k];
    return v;
  };
  for (int iter = 0; iter < 2000; ++iter) {
    double change = 0.0;
    for (int i = 0; i < n; ++i) {
      cplx denom = 1.0;
      for (int j = 0; j < n; ++j)
        if (j != i) denom *= z[i] - z[j];
      const cplx step = eval(z[i]) / denom;
      z[i] -= step;
      change = std::max(change, std::abs(step));
    }
    if (change < 1e-15 * radius) break;
  }
  // Newton polish on the original polynomial.
  for (auto& x : z) {
    for (int it = 0; it < 5; ++it) {
      cplx v = c[0], dv = 0.0;
      for (int k = 1; k <= n; ++k) {
        dv = dv * x + v;
        v = v * x + c[k];
      }
      if (std::abs(dv) < 1e-300) break;
      x -= v / dv;
    }
  }
  return z;
}

inline std::vector<double> eigenvalues(const Mat& hermitian) {
  std::vector<double> out;
  for (const cplx& z : polynomial_roots(characteristic_polynomial(hermitian))) out.push_back(z.real());
  std::sort(out.begin(), out.end());
  return out;
}

inline double trace_norm(const Mat& hermitian) {
  double s = 0.0;
  for (double e : eigenvalues(hermitian)) s += std::abs(e);
  return s;
}

inline Mat partial_trace(const Mat& x, int da, int db, bool keep_first) {
  Mat out = Mat::Zero(keep_first ? da : db, keep_first ? da : db);
  for (int a1 = 0; a1 < da; ++a1)
    for (int a2 = 0; a2 < da; ++a2)
      for (int b1 = 0; b1 < db; ++b1)
        for (int b2 = 0; b2 < db; ++b2) {
          const cplx v = x(a1 * db + b1, a2 * db + b2);
          if (keep_first && b1 == b2) out(a1, a2) += v;
          if (!keep_first && a1 == a2) out(b1, b2) += v;
        }
  return out;
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      for (int k = 0; k < b.rows(); ++k)
        for (int l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

// Scaling-and-squaring Taylor series.
inline Mat expm(const Mat& a) {
  double norm = 0.0;
  for (int i = 0; i < a.rows(); ++i) {
    double row = 0.0;
    for (int j = 0; j < a.cols(); ++j) row += std::abs(a(i, j));
    norm = std::max(norm, row);
  }
  int squarings = 0;
  while (norm > 0.25) {
    norm /= 2.0;
    ++squarings;
  }
  const Mat b = a / std::pow(2.0, squarings);
  Mat term = Mat::Identity(a.rows(), a.cols());
  Mat sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * b / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

inline Mat random_unitary(int dim, std::mt19937_64& rng) {
  const Mat h = random_hermitian(dim, rng);
  return expm(cplx(0.0, 1.0) * h);
}

inline Mat kraus_apply(const std::vector<Mat>& ks, const Mat& x) {
  Mat out = Mat::Zero(x.rows(), x.cols());
  for (const Mat& k : ks) out += k * x * k.adjoint();
  return out;
}

inline Mat diag3(double a, double b, double c) {
  Mat m = Mat::Zero(3, 3);
  m(0, 0) = a;
  m(1, 1) = b;
  m(2, 2) = c;
  return m;
}

inline Mat projector(const Eigen::VectorXcd& v) { return v * v.adjoint(); }

inline Eigen::VectorXcd theta_ket(double angle) {
  Eigen::VectorXcd v(3);
  v << std::sin(angle), std::cos(angle), 0.0;
  return v;
}

inline Mat rho_a() { return diag3(0.5, 0.0, 0.5); }
inline Mat rho_b() { return diag3(0.0, 0.5, 0.5); }

// Direct transcription of the Gamma^(4) family: weights 1 +- u^2, rotation by theta*u.
inline Mat gamma4_apply(const Mat& x, double u, double theta) {
  const Mat p1 = diag3(1, 0, 0);
  const Mat pt = projector(theta_ket(theta * u));
  const Mat p3 = diag3(0, 0, 1);
  const cplx x11 = x(0, 0), x22 = x(1, 1);
  return (1 + u * u) * (x11 * p1 + x22 * pt) + (1 - u * u) * (x11 + x22) * p3;
}

inline double norm_formula(double lambda, double tau, double theta) {
  return 0.5 * ((1 - tau * tau) * std::abs(lambda - 1) +
                (1 + tau * tau) * std::sqrt(1 + lambda * lambda + 2 * lambda * std::cos(2 * theta * tau)));
}

// Central difference of a scalar function.
template <class F>
double central_difference(F f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2 * h);
}

inline double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace oracle
