#pragma once

#include <complex>
#include <initializer_list>
#include <utility>

#include <Eigen/Dense>

namespace qdyn {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Largest entry of |M - M^dagger|. Throws InvalidOperand for non-square input.
double hermiticity_defect(const CMatrix& m);

/// Largest absolute entry of a matrix (the sup-norm used for gaps and residuals).
double max_abs_entry(const CMatrix& m);

/// Computational basis ket |index> in dimension dim (zero-based index).
CVector basis_ket(int dim, int index);

/**
 * Dense Hermitian operator on a dim-dimensional Hilbert space.
 *
 * Construction validates squareness, dim >= 1 and Hermiticity within
 * tol::kHermitian; the stored matrix is exactly Hermitian afterwards.
 */
class HermOp {
 public:
  explicit HermOp(CMatrix m);

  /// (M + M^dagger)/2 after checking that M is Hermitian within `slack`.
  static HermOp hermitized(const CMatrix& m, double slack);
  static HermOp zero(int dim);
  static HermOp identity(int dim);
  static HermOp diagonal(std::initializer_list<double> entries);
  static HermOp diagonal(const RVector& entries);
  /// |v><v| for the vector as given (no normalization).
  static HermOp projector(const CVector& v);
  /// |i><i| in dimension dim.
  static HermOp basis_projector(int dim, int index);

  int dim() const { return static_cast<int>(m_.rows()); }
  const CMatrix& matrix() const { return m_; }
  cplx operator()(int row, int col) const { return m_(row, col); }
  double trace() const { return m_.trace().real(); }

  HermOp operator+(const HermOp& other) const;
  HermOp operator-(const HermOp& other) const;
  HermOp operator*(double c) const;
  friend HermOp operator*(double c, const HermOp& x) { return x * c; }

 private:
  struct Trusted {};
  HermOp(CMatrix m, Trusted) : m_(std::move(m)) {}

  CMatrix m_;
};

/// Unit-trace, positive semidefinite HermOp.
class DensityOp {
 public:
  explicit DensityOp(HermOp op);

  /// |psi><psi| / <psi|psi>.
  static DensityOp pure(const CVector& psi);
  static DensityOp maximally_mixed(int dim);

  const HermOp& op() const { return op_; }
  int dim() const { return op_.dim(); }
  double purity() const;

 private:
  HermOp op_;
};

/// Eigenvalues in ascending order.
RVector eigenvalues(const HermOp& x);
double min_eigenvalue(const HermOp& x);

/// Sum of absolute eigenvalues.
double trace_norm(const HermOp& x);
/// Validating overload; throws InvalidOperand when `m` is not Hermitian.
double trace_norm(const CMatrix& m);

/// Kronecker product, first factor outermost.
CMatrix kron(const CMatrix& a, const CMatrix& b);
HermOp tensor(const HermOp& a, const HermOp& b);

enum class Keep { first, second };

/// Partial trace of an operator on C^dA (x) C^dB, returning the kept factor.
CMatrix partial_trace(const CMatrix& x, int dim_a, int dim_b, Keep keep);
HermOp partial_trace(const HermOp& x, int dim_a, int dim_b, Keep keep);

}  // namespace qdyn
