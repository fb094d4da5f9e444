#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "qdyn/operator.hpp"
#include "qdyn/tolerances.hpp"

namespace qdyn {

/// Column-stacking vectorization: vec(|i><j|) has its 1 at index j*d + i.
CVector vec(const CMatrix& x);
CMatrix unvec(const CVector& v, int dim);

/**
 * Linear map on d x d operators stored as a d^2 x d^2 matrix acting on
 * column-stacked vectors, so vec(A X B) = (B^T (x) A) vec(X).
 */
class SuperOp {
 public:
  SuperOp(int dim, CMatrix matrix);

  static SuperOp identity(int dim);
  static SuperOp zero(int dim);
  /// X -> X^T, positive but not completely positive.
  static SuperOp transposition(int dim);
  /// Tabulates an arbitrary linear action on the matrix units |i><j|.
  static SuperOp from_action(int dim, const std::function<CMatrix(const CMatrix&)>& action);

  int dim() const { return dim_; }
  const CMatrix& matrix() const { return matrix_; }

  CMatrix apply(const CMatrix& x) const;
  /// Throws InvalidOperand when the output is not Hermitian within tol::kMapHermitian.
  HermOp apply(const HermOp& x) const;
  /// (S (x) 1_k)(X) for X on C^d (x) C^k, system factor first.
  CMatrix apply_with_ancilla(const CMatrix& x, int ancilla_dim) const;

  SuperOp operator+(const SuperOp& other) const;
  SuperOp operator-(const SuperOp& other) const;
  SuperOp operator*(cplx c) const;
  friend SuperOp operator*(cplx c, const SuperOp& s) { return s * c; }

 private:
  int dim_;
  CMatrix matrix_;
};

/// second o first.
SuperOp compose(const SuperOp& second, const SuperOp& first);

/// Max-entry distance between the matrices of two superoperators.
double sup_distance(const SuperOp& a, const SuperOp& b);

struct KrausSet {
  std::vector<CMatrix> operators;
};

/// X -> sum_k K X K^dagger, i.e. sum_k conj(K) (x) K.
SuperOp from_kraus(const KrausSet& kraus);

/// Unnormalized Choi matrix C = sum_ij S(|i><j|) (x) |i><j| (output factor first).
struct ChoiMatrix {
  HermOp base;
  int dim = 0;

  double min_eigenvalue() const;
  /// Max entry of Tr_output(C) - I.
  double trace_preservation_defect() const;
  bool is_cp(double tol = tol::kPsd) const { return min_eigenvalue() >= -tol; }
  bool is_tp(double tol = tol::kTracePreserving) const {
    return trace_preservation_defect() <= tol;
  }
};

ChoiMatrix to_choi(const SuperOp& s);
bool is_cp(const SuperOp& s, double tol = tol::kPsd);
bool is_tp(const SuperOp& s, double tol = tol::kTracePreserving);

/**
 * Positivity evidence from n random pure inputs. A witness is returned when
 * some S(|psi><psi|) has an eigenvalue below -tol::kPsd, which certifies
 * that S is not positive. No witness only means none was found.
 */
struct PositivitySample {
  double min_eigenvalue = 0.0;
  std::optional<DensityOp> witness;
  int samples = 0;
};

PositivitySample positivity_sample(const SuperOp& s, int n, std::uint64_t seed);

/// Orthonormal basis of Im(S) in operator space (Hilbert-Schmidt inner product).
struct ImageBasis {
  int dim = 0;
  /// d^2 x rank, orthonormal columns (vectorized basis operators).
  CMatrix vectors;
  RVector singular_values;

  int rank() const { return static_cast<int>(vectors.cols()); }
  CMatrix element(int i) const { return unvec(vectors.col(i), dim); }
  /// Largest norm of the component of an orthonormal basis of `other` outside this image.
  double inclusion_residual(const ImageBasis& other) const;
};

/// Singular values below rel_cutoff * (largest) are discarded.
ImageBasis image_basis(const SuperOp& s, double rel_cutoff = tol::kRankCutoff);

using MapFamily = std::function<SuperOp(double)>;

struct ImageInclusionReport {
  bool nonincreasing = true;
  double max_residual = 0.0;
  /// (s, t) pair attaining max_residual.
  double worst_s = 0.0;
  double worst_t = 0.0;
  std::vector<int> ranks;
};

/// Checks Im(family(t)) within Im(family(s)) for every grid pair s < t.
ImageInclusionReport image_inclusion_report(const MapFamily& family,
                                            const std::vector<double>& grid,
                                            double tol = tol::kRankCutoff);

bool is_image_nonincreasing(const MapFamily& family, const std::vector<double>& grid,
                            double tol = tol::kRankCutoff);

}  // namespace qdyn
