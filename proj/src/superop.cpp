#include "qdyn/superop.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <string>

#include "qdyn/errors.hpp"
#include "qdyn/probes.hpp"

namespace qdyn {

namespace {

void require_same_dim(const SuperOp& a, const SuperOp& b, const char* what) {
  if (a.dim() != b.dim()) {
    throw InvalidOperand(std::string(what) + ": dimension mismatch (" + std::to_string(a.dim()) +
                         " vs " + std::to_string(b.dim()) + ")");
  }
}

}  // namespace

CVector vec(const CMatrix& x) {
  return Eigen::Map<const CVector>(x.data(), x.size());
}

CMatrix unvec(const CVector& v, int dim) {
  if (v.size() != static_cast<Eigen::Index>(dim) * dim) {
    throw InvalidOperand("unvec: vector length does not match dim^2");
  }
  return Eigen::Map<const CMatrix>(v.data(), dim, dim);
}

SuperOp::SuperOp(int dim, CMatrix matrix) : dim_(dim), matrix_(std::move(matrix)) {
  const Eigen::Index n = static_cast<Eigen::Index>(dim) * dim;
  if (dim < 1 || matrix_.rows() != n || matrix_.cols() != n) {
    throw InvalidOperand("SuperOp: expected a " + std::to_string(n) + "x" + std::to_string(n) +
                         " matrix for dim " + std::to_string(dim));
  }
}

SuperOp SuperOp::identity(int dim) {
  const int n = dim * dim;
  return SuperOp(dim, CMatrix::Identity(n, n));
}

SuperOp SuperOp::zero(int dim) {
  const int n = dim * dim;
  return SuperOp(dim, CMatrix::Zero(n, n));
}

SuperOp SuperOp::transposition(int dim) {
  return from_action(dim, [](const CMatrix& x) -> CMatrix { return x.transpose(); });
}

SuperOp SuperOp::from_action(int dim, const std::function<CMatrix(const CMatrix&)>& action) {
  if (dim < 1) throw InvalidOperand("SuperOp::from_action: dim must be >= 1");
  const int n = dim * dim;
  CMatrix m(n, n);
  for (int j = 0; j < dim; ++j) {
    for (int i = 0; i < dim; ++i) {
      CMatrix unit = CMatrix::Zero(dim, dim);
      unit(i, j) = 1.0;
      const CMatrix out = action(unit);
      if (out.rows() != dim || out.cols() != dim) {
        throw InvalidOperand("SuperOp::from_action: action changed the operator dimension");
      }
      m.col(j * dim + i) = vec(out);
    }
  }
  return SuperOp(dim, std::move(m));
}

CMatrix SuperOp::apply(const CMatrix& x) const {
  if (x.rows() != dim_ || x.cols() != dim_) {
    throw InvalidOperand("SuperOp::apply: operand is " + std::to_string(x.rows()) + "x" +
                         std::to_string(x.cols()) + ", map dimension is " + std::to_string(dim_));
  }
  const CVector out = matrix_ * vec(x);
  return unvec(out, dim_);
}

HermOp SuperOp::apply(const HermOp& x) const {
  return HermOp::hermitized(apply(x.matrix()), tol::kMapHermitian);
}

CMatrix SuperOp::apply_with_ancilla(const CMatrix& x, int ancilla_dim) const {
  const int k = ancilla_dim;
  const int n = dim_ * k;
  if (k < 1 || x.rows() != n || x.cols() != n) {
    throw InvalidOperand("SuperOp::apply_with_ancilla: operand does not live on C^d (x) C^k");
  }
  // Index (i, a) -> i*k + a. Each ancilla block (a, b) is a d x d operator.
  CMatrix out(n, n);
  CMatrix block(dim_, dim_);
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) block(i, j) = x(i * k + a, j * k + b);
      const CMatrix mapped = apply(block);
      for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) out(i * k + a, j * k + b) = mapped(i, j);
    }
  }
  return out;
}

SuperOp SuperOp::operator+(const SuperOp& other) const {
  require_same_dim(*this, other, "SuperOp +");
  return SuperOp(dim_, matrix_ + other.matrix_);
}

SuperOp SuperOp::operator-(const SuperOp& other) const {
  require_same_dim(*this, other, "SuperOp -");
  return SuperOp(dim_, matrix_ - other.matrix_);
}

SuperOp SuperOp::operator*(cplx c) const { return SuperOp(dim_, c * matrix_); }

SuperOp compose(const SuperOp& second, const SuperOp& first) {
  require_same_dim(second, first, "compose");
  return SuperOp(first.dim(), second.matrix() * first.matrix());
}

double sup_distance(const SuperOp& a, const SuperOp& b) {
  require_same_dim(a, b, "sup_distance");
  return max_abs_entry(a.matrix() - b.matrix());
}

SuperOp from_kraus(const KrausSet& kraus) {
  if (kraus.operators.empty()) throw InvalidOperand("from_kraus: empty Kraus set");
  const auto d = kraus.operators.front().rows();
  CMatrix m = CMatrix::Zero(d * d, d * d);
  for (const CMatrix& k : kraus.operators) {
    if (k.rows() != d || k.cols() != d) {
      throw InvalidOperand("from_kraus: Kraus operators must be square with a common dimension");
    }
    m += kron(k.conjugate(), k);
  }
  return SuperOp(static_cast<int>(d), std::move(m));
}

double ChoiMatrix::min_eigenvalue() const { return qdyn::min_eigenvalue(base); }

double ChoiMatrix::trace_preservation_defect() const {
  const CMatrix reduced = partial_trace(base.matrix(), dim, dim, Keep::second);
  return max_abs_entry(reduced - CMatrix::Identity(dim, dim));
}

ChoiMatrix to_choi(const SuperOp& s) {
  const int d = s.dim();
  CMatrix c = CMatrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      CMatrix unit = CMatrix::Zero(d, d);
      unit(i, j) = 1.0;
      c += kron(s.apply(unit), unit);
    }
  }
  return ChoiMatrix{HermOp::hermitized(c, tol::kMapHermitian), d};
}

bool is_cp(const SuperOp& s, double tol) { return to_choi(s).is_cp(tol); }

bool is_tp(const SuperOp& s, double tol) { return to_choi(s).is_tp(tol); }

PositivitySample positivity_sample(const SuperOp& s, int n, std::uint64_t seed) {
  if (n < 1) throw InvalidOperand("positivity_sample: need at least one sample");
  std::mt19937_64 seeder(seed);
  PositivitySample out;
  out.samples = n;
  out.min_eigenvalue = std::numeric_limits<double>::infinity();
  std::optional<CVector> worst;
  for (int k = 0; k < n; ++k) {
    const CVector psi = random_unit_vector(s.dim(), seeder());
    const HermOp image = s.apply(HermOp::projector(psi));
    const double lowest = min_eigenvalue(image);
    if (lowest < out.min_eigenvalue) {
      out.min_eigenvalue = lowest;
      worst = psi;
    }
  }
  if (out.min_eigenvalue < -tol::kPsd && worst) out.witness = DensityOp::pure(*worst);
  return out;
}

double ImageBasis::inclusion_residual(const ImageBasis& other) const {
  if (other.rank() == 0) return 0.0;
  const CMatrix outside = other.vectors - vectors * (vectors.adjoint() * other.vectors);
  return outside.colwise().norm().maxCoeff();
}

ImageBasis image_basis(const SuperOp& s, double rel_cutoff) {
  Eigen::JacobiSVD<CMatrix> svd(s.matrix(), Eigen::ComputeFullU);
  const RVector& sv = svd.singularValues();
  const double largest = sv.size() > 0 ? sv(0) : 0.0;
  int rank = 0;
  while (rank < sv.size() && largest > 0.0 && sv(rank) > rel_cutoff * largest) ++rank;
  return ImageBasis{s.dim(), svd.matrixU().leftCols(rank), sv};
}

ImageInclusionReport image_inclusion_report(const MapFamily& family,
                                            const std::vector<double>& grid, double tol) {
  if (!std::is_sorted(grid.begin(), grid.end())) {
    throw InvalidOperand("image_inclusion_report: grid must be ascending");
  }
  std::vector<ImageBasis> images;
  images.reserve(grid.size());
  ImageInclusionReport report;
  for (double t : grid) {
    images.push_back(image_basis(family(t), tol));
    report.ranks.push_back(images.back().rank());
  }
  for (std::size_t i = 0; i < images.size(); ++i) {
    for (std::size_t j = i + 1; j < images.size(); ++j) {
      const double r = images[i].inclusion_residual(images[j]);
      if (r > report.max_residual) {
        report.max_residual = r;
        report.worst_s = grid[i];
        report.worst_t = grid[j];
      }
    }
  }
  report.nonincreasing = report.max_residual < tol;
  return report;
}

bool is_image_nonincreasing(const MapFamily& family, const std::vector<double>& grid, double tol) {
  return image_inclusion_report(family, grid, tol).nonincreasing;
}

}  // namespace qdyn
