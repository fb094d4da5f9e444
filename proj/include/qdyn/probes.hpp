#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qdyn/operator.hpp"

namespace qdyn {

class SuperOp;

enum class ProbeKind { random_hermitian, state_difference, image_restricted };

std::string to_string(ProbeKind kind);

/// Deterministic, seeded set of Hermitian probe operators of one dimension.
struct ProbeSet {
  std::vector<HermOp> probes;
  std::uint64_t seed = 0;
  ProbeKind kind = ProbeKind::random_hermitian;

  int dim() const { return probes.empty() ? 0 : probes.front().dim(); }
  std::size_t size() const { return probes.size(); }
};

/// Gaussian vector normalized to unit length (Haar-distributed pure state).
CVector random_unit_vector(int dim, std::uint64_t seed);

/// Random pure or mixed density operator; `mixed` draws a Ginibre G and uses G G^dagger / tr.
DensityOp random_state(int dim, std::uint64_t seed, bool mixed);

/**
 * random_hermitian: (A + A^dagger)/2 with A complex Ginibre (independent
 * N(0,1) real and imaginary parts).
 * state_difference: p1*rho1 - p2*rho2, p1 ~ U[0,1], p2 = 1 - p1, with each
 * state independently pure or mixed.
 * image_restricted needs a map; use image_probes().
 */
ProbeSet random_probes(int dim, int count, std::uint64_t seed, ProbeKind kind);

/// Probes inside the image of `map`: map(Y) for random Hermitian Y.
ProbeSet image_probes(const SuperOp& map, int count, std::uint64_t seed);

}  // namespace qdyn
