#include "qdyn/operator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qdyn/errors.hpp"
#include "qdyn/tolerances.hpp"

namespace qdyn {

namespace {

void require_square(const CMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw InvalidOperand(std::string(what) + ": expected a non-empty square matrix, got " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

}  // namespace

double hermiticity_defect(const CMatrix& m) {
  require_square(m, "hermiticity_defect");
  return max_abs_entry(m - m.adjoint());
}

double max_abs_entry(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

CVector basis_ket(int dim, int index) {
  if (index < 0 || index >= dim) {
    throw InvalidOperand("basis_ket: index " + std::to_string(index) + " outside dimension " +
                         std::to_string(dim));
  }
  CVector v = CVector::Zero(dim);
  v(index) = 1.0;
  return v;
}

HermOp::HermOp(CMatrix m) : m_(std::move(m)) {
  const double defect = hermiticity_defect(m_);
  if (defect > tol::kHermitian) {
    throw InvalidOperand("HermOp: matrix is not Hermitian (defect " + std::to_string(defect) + ")");
  }
  m_ = 0.5 * (m_ + m_.adjoint()).eval();
}

HermOp HermOp::hermitized(const CMatrix& m, double slack) {
  const double defect = hermiticity_defect(m);
  if (defect > slack) {
    throw InvalidOperand("HermOp::hermitized: defect " + std::to_string(defect) +
                         " exceeds slack " + std::to_string(slack));
  }
  return HermOp(0.5 * (m + m.adjoint()), Trusted{});
}

HermOp HermOp::zero(int dim) {
  if (dim < 1) throw InvalidOperand("HermOp::zero: dim must be >= 1");
  return HermOp(CMatrix::Zero(dim, dim), Trusted{});
}

HermOp HermOp::identity(int dim) {
  if (dim < 1) throw InvalidOperand("HermOp::identity: dim must be >= 1");
  return HermOp(CMatrix::Identity(dim, dim), Trusted{});
}

HermOp HermOp::diagonal(std::initializer_list<double> entries) {
  RVector v(static_cast<Eigen::Index>(entries.size()));
  Eigen::Index i = 0;
  for (double e : entries) v(i++) = e;
  return diagonal(v);
}

HermOp HermOp::diagonal(const RVector& entries) {
  if (entries.size() < 1) throw InvalidOperand("HermOp::diagonal: empty diagonal");
  CMatrix m = entries.cast<cplx>().asDiagonal();
  return HermOp(std::move(m), Trusted{});
}

HermOp HermOp::projector(const CVector& v) {
  if (v.size() < 1) throw InvalidOperand("HermOp::projector: empty vector");
  return HermOp(v * v.adjoint(), Trusted{});
}

HermOp HermOp::basis_projector(int dim, int index) { return projector(basis_ket(dim, index)); }

HermOp HermOp::operator+(const HermOp& other) const {
  if (dim() != other.dim()) throw InvalidOperand("HermOp +: dimension mismatch");
  return HermOp(m_ + other.m_, Trusted{});
}

HermOp HermOp::operator-(const HermOp& other) const {
  if (dim() != other.dim()) throw InvalidOperand("HermOp -: dimension mismatch");
  return HermOp(m_ - other.m_, Trusted{});
}

HermOp HermOp::operator*(double c) const { return HermOp(c * m_, Trusted{}); }

DensityOp::DensityOp(HermOp op) : op_(std::move(op)) {
  if (std::abs(op_.trace() - 1.0) > tol::kUnitTrace) {
    throw InvalidOperand("DensityOp: trace " + std::to_string(op_.trace()) + " differs from 1");
  }
  if (min_eigenvalue(op_) < -tol::kPsd) {
    throw InvalidOperand("DensityOp: operator has a negative eigenvalue");
  }
}

DensityOp DensityOp::pure(const CVector& psi) {
  const double n = psi.norm();
  if (n == 0.0) throw InvalidOperand("DensityOp::pure: zero vector");
  return DensityOp(HermOp::projector(psi / n));
}

DensityOp DensityOp::maximally_mixed(int dim) {
  return DensityOp(HermOp::identity(dim) * (1.0 / dim));
}

double DensityOp::purity() const { return (op_.matrix() * op_.matrix()).trace().real(); }

RVector eigenvalues(const HermOp& x) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(x.matrix(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

double min_eigenvalue(const HermOp& x) { return eigenvalues(x).minCoeff(); }

double trace_norm(const HermOp& x) { return eigenvalues(x).cwiseAbs().sum(); }

double trace_norm(const CMatrix& m) { return trace_norm(HermOp(m)); }

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

HermOp tensor(const HermOp& a, const HermOp& b) {
  return HermOp::hermitized(kron(a.matrix(), b.matrix()), tol::kHermitian);
}

CMatrix partial_trace(const CMatrix& x, int dim_a, int dim_b, Keep keep) {
  if (dim_a < 1 || dim_b < 1 || x.rows() != x.cols() || x.rows() != dim_a * dim_b) {
    throw InvalidOperand("partial_trace: operator of size " + std::to_string(x.rows()) + "x" +
                         std::to_string(x.cols()) + " does not match dims (" +
                         std::to_string(dim_a) + "," + std::to_string(dim_b) + ")");
  }
  if (keep == Keep::first) {
    CMatrix out = CMatrix::Zero(dim_a, dim_a);
    for (int i = 0; i < dim_a; ++i)
      for (int j = 0; j < dim_a; ++j)
        for (int b = 0; b < dim_b; ++b) out(i, j) += x(i * dim_b + b, j * dim_b + b);
    return out;
  }
  CMatrix out = CMatrix::Zero(dim_b, dim_b);
  for (int a = 0; a < dim_a; ++a) out += x.block(a * dim_b, a * dim_b, dim_b, dim_b);
  return out;
}

HermOp partial_trace(const HermOp& x, int dim_a, int dim_b, Keep keep) {
  return HermOp::hermitized(partial_trace(x.matrix(), dim_a, dim_b, keep), tol::kHermitian);
}

}  // namespace qdyn
