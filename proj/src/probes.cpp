#include "qdyn/probes.hpp"

#include <random>

#include "qdyn/errors.hpp"
#include "qdyn/superop.hpp"
#include "qdyn/tolerances.hpp"

namespace qdyn {

namespace {

CMatrix ginibre(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix a(rows, cols);
  // Column-major fill keeps the draw order fixed for a given seed.
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      a(i, j) = cplx(re, im);
    }
  return a;
}

DensityOp draw_state(int dim, bool mixed, std::mt19937_64& rng) {
  if (!mixed) {
    CVector v = ginibre(dim, 1, rng).col(0);
    return DensityOp::pure(v);
  }
  const CMatrix g = ginibre(dim, dim, rng);
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityOp(HermOp::hermitized(rho, 1e-10));
}

void require_count(int dim, int count) {
  if (dim < 1) throw InvalidOperand("random_probes: dim must be >= 1");
  if (count < 1) throw InvalidOperand("random_probes: count must be >= 1");
}

}  // namespace

std::string to_string(ProbeKind kind) {
  switch (kind) {
    case ProbeKind::random_hermitian: return "random-hermitian";
    case ProbeKind::state_difference: return "state-difference";
    case ProbeKind::image_restricted: return "image-restricted";
  }
  return "unknown";
}

CVector random_unit_vector(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  CVector v = ginibre(dim, 1, rng).col(0);
  return v / v.norm();
}

DensityOp random_state(int dim, std::uint64_t seed, bool mixed) {
  std::mt19937_64 rng(seed);
  return draw_state(dim, mixed, rng);
}

ProbeSet random_probes(int dim, int count, std::uint64_t seed, ProbeKind kind) {
  require_count(dim, count);
  ProbeSet set;
  set.seed = seed;
  set.kind = kind;
  set.probes.reserve(static_cast<std::size_t>(count));
  std::mt19937_64 rng(seed);
  switch (kind) {
    case ProbeKind::random_hermitian:
      for (int n = 0; n < count; ++n) {
        const CMatrix a = ginibre(dim, dim, rng);
        set.probes.push_back(HermOp::hermitized(0.5 * (a + a.adjoint()), 0.0));
      }
      break;
    case ProbeKind::state_difference: {
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      std::bernoulli_distribution coin(0.5);
      for (int n = 0; n < count; ++n) {
        const double p1 = unit(rng);
        const bool mixed1 = coin(rng);
        const bool mixed2 = coin(rng);
        const DensityOp rho1 = draw_state(dim, mixed1, rng);
        const DensityOp rho2 = draw_state(dim, mixed2, rng);
        set.probes.push_back(p1 * rho1.op() - (1.0 - p1) * rho2.op());
      }
      break;
    }
    case ProbeKind::image_restricted:
      throw InvalidOperand("random_probes: image-restricted probes need a map, use image_probes()");
  }
  return set;
}

ProbeSet image_probes(const SuperOp& map, int count, std::uint64_t seed) {
  ProbeSet base = random_probes(map.dim(), count, seed, ProbeKind::random_hermitian);
  ProbeSet set;
  set.seed = seed;
  set.kind = ProbeKind::image_restricted;
  set.probes.reserve(base.probes.size());
  for (const HermOp& y : base.probes) set.probes.push_back(map.apply(y));
  return set;
}

}  // namespace qdyn
