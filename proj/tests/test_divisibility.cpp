#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "qdyn/counterexample.hpp"
#include "qdyn/divisibility.hpp"
#include "qdyn/errors.hpp"
#include "qdyn/probes.hpp"

using namespace qdyn;

namespace {

MapParams with_theta(double theta) {
  MapParams p;
  p.theta = theta;
  return p;
}

}  // namespace

TEST_CASE("intermediate map from the origin is the map itself") {
  const MapParams p;
  const MapFamily family = counterexample_family(p);
  for (double t : {0.5, 1.5, 2.5, 3.5}) {
    const IntermediateMap v = intermediate_map(family, 0.0, t);
    CHECK(v.definedness == Definedness::exact);
    CHECK(v.residual < 1e-12);
    CHECK(sup_distance(v.map, family(t)) < 1e-12);
    CHECK(v.rank_s == 9);
  }
  CHECK_THROWS_AS(intermediate_map(family, 1.0, 1.0), InvalidOperand);
  CHECK_THROWS_AS(intermediate_map(family, 2.0, 1.0), InvalidOperand);
}

TEST_CASE("intermediate maps inside the first segment are CP") {
  const MapFamily family = counterexample_family(MapParams{});
  const IntermediateMap v = intermediate_map(family, 0.2, 0.7);
  CHECK(v.definedness == Definedness::exact);
  CHECK(v.residual < 1e-8);
  CHECK(is_cp(v.map));
  CHECK(is_tp(v.map));
  CHECK(to_string(Definedness::exact) == "exact");
}

TEST_CASE("cocycle property on the invertible stretch") {
  const MapFamily family = counterexample_family(MapParams{});
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 0.95);
  for (int trial = 0; trial < 25; ++trial) {
    double r = u(rng), s = u(rng), t = u(rng);
    if (r > s) std::swap(r, s);
    if (s > t) std::swap(s, t);
    if (r > s) std::swap(r, s);
    if (s - r < 1e-3 || t - s < 1e-3) continue;
    const SuperOp ts = intermediate_map(family, s, t).map;
    const SuperOp sr = intermediate_map(family, r, s).map;
    const SuperOp tr = intermediate_map(family, r, t).map;
    CHECK(sup_distance(compose(ts, sr), tr) < 1e-8);
  }
}

TEST_CASE("intermediate map across the last segment is image restricted") {
  const MapParams p;
  const MapFamily family = counterexample_family(p);
  const IntermediateMap v = intermediate_map(family, p.t3, p.t4);
  CHECK(v.definedness == Definedness::image_restricted);
  CHECK(v.residual < 1e-8);
  CHECK(v.rank_s == 2);
  CHECK(oracle::max_abs(v.map.apply(CMatrix(oracle::rho_a())) - oracle::diag3(1, 0, 0)) < 1e-10);
  CHECK(oracle::max_abs(v.map.apply(CMatrix(oracle::rho_b())) -
                        oracle::projector(oracle::theta_ket(p.theta))) < 1e-10);
}

TEST_CASE("definedness of rank-deficient stretches") {
  const MapFamily family = counterexample_family(MapParams{});
  const IntermediateMap v = intermediate_map(family, 1.5, 3.5);
  CHECK(v.definedness == Definedness::image_restricted);
  CHECK(v.residual < 1e-8);

  // a family that forgets coherences and then recovers them has no intermediate map
  const SuperOp e1 = make_E(1, MapParams{});
  const MapFamily regrowing = [&](double t) { return t < 1.0 ? e1 : SuperOp::identity(3); };
  const IntermediateMap w = intermediate_map(regrowing, 0.5, 1.5);
  CHECK(w.definedness == Definedness::inconsistent);
  CHECK(w.residual > 0.1);
  const auto verdicts = cp_divisibility_scan(regrowing, {0.5, 1.5});
  CHECK(verdicts[0].verdict == CpVerdict::undefined_off_image);
}

TEST_CASE("CP-divisibility scan") {
  const MapParams p;
  const MapFamily family = counterexample_family(p);
  std::vector<double> grid;
  for (int i = 0; i < 10; ++i) grid.push_back(0.095 * i);
  for (const IntervalVerdict& v : cp_divisibility_scan(family, grid)) {
    CHECK(v.verdict == CpVerdict::cp);
    CHECK(v.choi_min >= -1e-10);
  }
  const auto last = cp_divisibility_scan(family, {p.t3, p.t4});
  REQUIRE(last.size() == 1);
  CHECK(last[0].verdict == CpVerdict::not_cp);
  CHECK(last[0].forcing_discrepancy > 0.1);
  CHECK(to_string(CpVerdict::not_cp) == "not-CP");
  CHECK(to_string(CpVerdict::cp) == "CP");
  CHECK(to_string(CpVerdict::undefined_off_image) == "undefined-off-image");

  const MapFamily identity = [](double) { return SuperOp::identity(3); };
  for (const IntervalVerdict& v : cp_divisibility_scan(identity, {0.0, 0.5, 1.0, 2.0}))
    CHECK(v.verdict == CpVerdict::cp);
  CHECK_THROWS_AS(cp_divisibility_scan(identity, {1.0, 0.5}), InvalidOperand);
}

TEST_CASE("CP verdicts map states to states") {
  const MapParams p;
  const MapFamily family = counterexample_family(p);
  std::vector<double> grid;
  for (int i = 0; i <= 16; ++i) grid.push_back(0.25 * i);
  int checked = 0;
  for (const IntervalVerdict& v : cp_divisibility_scan(family, grid)) {
    if (v.verdict != CpVerdict::cp) continue;
    const SuperOp map = intermediate_map(family, v.s, v.t).map;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const DensityOp rho = random_state(3, seed, seed % 2 == 0);
      CHECK(min_eigenvalue(map.apply(rho.op())) >= -1e-10);
    }
    ++checked;
  }
  CHECK(checked > 0);
}

TEST_CASE("forcing witness at the last segment") {
  const MapParams p;
  const auto w = positive_forcing_witness(counterexample_family(p), p.t3, p.t4);
  REQUIRE(w.has_value());
  CHECK(std::abs(std::abs(w->shared_vector(2)) - 1.0) < 1e-12);
  const oracle::Mat diff = oracle::diag3(1, 0, 0) - oracle::projector(oracle::theta_ket(p.theta));
  const double expected = oracle::trace_norm(diff);
  CHECK(std::abs(expected - 2 * std::abs(std::cos(p.theta))) < 1e-9);
  CHECK(std::abs(w->discrepancy - expected) < 1e-9);
  const double targets = oracle::trace_norm(w->first_target.matrix() - w->second_target.matrix());
  CHECK(std::abs(targets - w->discrepancy) < 1e-9);
}

TEST_CASE("forcing witness vanishes at theta = pi/2") {
  const double right_angle = std::numbers::pi / 2;
  const MapParams edge = with_theta(right_angle);
  const auto w = positive_forcing_witness(counterexample_family(edge), edge.t3, edge.t4);
  REQUIRE(w.has_value());
  CHECK(w->discrepancy < 1e-12);

  const MapParams near = with_theta(right_angle - 1e-3);
  const auto n = positive_forcing_witness(counterexample_family(near), near.t3, near.t4);
  REQUIRE(n.has_value());
  CHECK(std::abs(n->discrepancy - 2e-3) < 2e-4);
}

TEST_CASE("no forcing configuration for the identity family") {
  const MapFamily identity = [](double) { return SuperOp::identity(3); };
  CHECK_FALSE(positive_forcing_witness(identity, 0.0, 1.0).has_value());
}

TEST_CASE("forcing witness is invariant under global unitary conjugation") {
  const MapParams p;
  const MapFamily family = counterexample_family(p);
  const double base = positive_forcing_witness(family, p.t3, p.t4)->discrepancy;
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 10; ++trial) {
    const CMatrix u = oracle::random_unitary(3, rng);
    const SuperOp conj = SuperOp::from_action(3, [&](const CMatrix& x) { return CMatrix(u * x * u.adjoint()); });
    const SuperOp inv = SuperOp::from_action(3, [&](const CMatrix& x) { return CMatrix(u.adjoint() * x * u); });
    const MapFamily rotated = [&](double t) { return compose(conj, compose(family(t), inv)); };
    std::vector<CVector> inputs;
    for (int i = 0; i < 3; ++i) inputs.push_back(u * basis_ket(3, i));
    const auto w = positive_forcing_witness(rotated, p.t3, p.t4, tol::kSupportCutoff, inputs);
    REQUIRE(w.has_value());
    CHECK(std::abs(w->discrepancy - base) < 1e-9);
  }
}
