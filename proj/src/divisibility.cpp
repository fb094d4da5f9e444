#include "qdyn/divisibility.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qdyn/errors.hpp"

namespace qdyn {

namespace {

CMatrix pseudoinverse(const CMatrix& m, double rel_cutoff, int& rank) {
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RVector& sv = svd.singularValues();
  const double largest = sv.size() > 0 ? sv(0) : 0.0;
  rank = 0;
  while (rank < sv.size() && largest > 0.0 && sv(rank) > rel_cutoff * largest) ++rank;
  RVector inv = RVector::Zero(sv.size());
  for (int k = 0; k < rank; ++k) inv(k) = 1.0 / sv(k);
  return svd.matrixV() * inv.cast<cplx>().asDiagonal() * svd.matrixU().adjoint();
}

// Projector onto the eigenvectors of x with eigenvalue above cutoff.
CMatrix support_projector(const HermOp& x, double cutoff) {
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(x.matrix());
  const int d = x.dim();
  CMatrix p = CMatrix::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    if (eig.eigenvalues()(k) > cutoff) p += eig.eigenvectors().col(k) * eig.eigenvectors().col(k).adjoint();
  }
  return p;
}

// Unit vector in supp(a) and supp(b), from the kernel of (I - Pa) + (I - Pb).
std::optional<CVector> support_intersection(const CMatrix& pa, const CMatrix& pb, double cutoff) {
  const auto d = pa.rows();
  const CMatrix complement = 2.0 * CMatrix::Identity(d, d) - pa - pb;
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(complement);
  if (eig.eigenvalues()(0) > cutoff) return std::nullopt;
  CVector v = eig.eigenvectors().col(0);
  Eigen::Index big = 0;
  v.cwiseAbs().maxCoeff(&big);
  v *= std::conj(v(big)) / std::abs(v(big));
  return v;
}

}  // namespace

std::string to_string(Definedness d) {
  switch (d) {
    case Definedness::exact: return "exact";
    case Definedness::image_restricted: return "image-restricted";
    case Definedness::inconsistent: return "inconsistent";
  }
  return "unknown";
}

std::string to_string(CpVerdict v) {
  switch (v) {
    case CpVerdict::cp: return "CP";
    case CpVerdict::not_cp: return "not-CP";
    case CpVerdict::undefined_off_image: return "undefined-off-image";
  }
  return "unknown";
}

IntermediateMap intermediate_map(const MapFamily& family, double s, double t, double rel_cutoff) {
  if (!(s < t)) {
    throw InvalidOperand("intermediate_map: need s < t, got s = " + std::to_string(s) +
                         ", t = " + std::to_string(t));
  }
  const SuperOp earlier = family(s);
  const SuperOp later = family(t);
  if (earlier.dim() != later.dim()) throw InvalidOperand("intermediate_map: dimension changed");
  IntermediateMap out;
  out.s = s;
  out.t = t;
  const CMatrix pinv = pseudoinverse(earlier.matrix(), rel_cutoff, out.rank_s);
  out.map = SuperOp(earlier.dim(), later.matrix() * pinv);
  out.residual = max_abs_entry(out.map.matrix() * earlier.matrix() - later.matrix());
  const int full = earlier.dim() * earlier.dim();
  if (out.rank_s == full) {
    out.definedness = Definedness::exact;
  } else if (out.residual < tol::kIntermediateResidual) {
    out.definedness = Definedness::image_restricted;
  } else {
    out.definedness = Definedness::inconsistent;
  }
  return out;
}

std::vector<IntervalVerdict> cp_divisibility_scan(const MapFamily& family,
                                                  const std::vector<double>& grid, double tol) {
  if (!std::is_sorted(grid.begin(), grid.end())) {
    throw InvalidOperand("cp_divisibility_scan: grid must be ascending");
  }
  std::vector<IntervalVerdict> out;
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const IntermediateMap v = intermediate_map(family, grid[k - 1], grid[k]);
    IntervalVerdict row;
    row.s = v.s;
    row.t = v.t;
    row.definedness = v.definedness;
    row.residual = v.residual;
    const ChoiMatrix choi = to_choi(v.map);
    row.choi_min = choi.min_eigenvalue();
    row.tp_defect = choi.trace_preservation_defect();
    if (const auto w = positive_forcing_witness(family, v.s, v.t)) {
      row.forcing_discrepancy = w->discrepancy;
    }
    const bool cp = row.choi_min >= -tol;
    switch (v.definedness) {
      case Definedness::exact:
        row.verdict = cp ? CpVerdict::cp : CpVerdict::not_cp;
        break;
      case Definedness::image_restricted:
        if (cp && row.tp_defect <= tol::kTracePreserving) {
          row.verdict = CpVerdict::cp;
        } else if (row.forcing_discrepancy > tol::kSupportCutoff) {
          row.verdict = CpVerdict::not_cp;
        } else {
          row.verdict = CpVerdict::undefined_off_image;
        }
        break;
      case Definedness::inconsistent:
        row.verdict = CpVerdict::undefined_off_image;
        break;
    }
    out.push_back(row);
  }
  return out;
}

std::optional<ForcingWitness> positive_forcing_witness(const MapFamily& family, double s, double t,
                                                       double support_cutoff,
                                                       const std::vector<CVector>& inputs) {
  const SuperOp earlier = family(s);
  const SuperOp later = family(t);
  const int d = earlier.dim();
  std::vector<CVector> kets = inputs;
  if (kets.empty()) {
    for (int i = 0; i < d; ++i) kets.push_back(basis_ket(d, i));
  }

  struct Constraint {
    HermOp source;
    HermOp target;
    CMatrix support;
  };
  std::vector<Constraint> constraints;
  for (const CVector& ket : kets) {
    const HermOp input = HermOp::projector(ket / ket.norm());
    HermOp target = later.apply(input);
    const double tr = target.trace();
    if (tr <= 0.0) continue;
    const double purity = (target.matrix() * target.matrix()).trace().real() / (tr * tr);
    if (purity <= 1.0 - tol::kPurity) continue;
    HermOp source = earlier.apply(input);
    CMatrix support = support_projector(source, support_cutoff);
    constraints.push_back({std::move(source), target * (1.0 / tr), std::move(support)});
  }

  std::optional<ForcingWitness> best;
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    for (std::size_t j = i + 1; j < constraints.size(); ++j) {
      const auto shared =
          support_intersection(constraints[i].support, constraints[j].support, support_cutoff);
      if (!shared) continue;
      const double discrepancy = trace_norm(constraints[i].target - constraints[j].target);
      if (best && discrepancy <= best->discrepancy) continue;
      best = ForcingWitness{*shared,
                            constraints[i].source,
                            constraints[j].source,
                            constraints[i].target,
                            constraints[j].target,
                            discrepancy};
    }
  }
  return best;
}

}  // namespace qdyn
