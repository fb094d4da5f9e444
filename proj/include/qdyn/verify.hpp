#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qdyn/contractivity.hpp"
#include "qdyn/counterexample.hpp"

namespace qdyn {

/// Seed used when none is given, so default runs are reproducible.
inline constexpr std::uint64_t kDefaultSeed = 20230311;

struct VerifyOptions {
  int grid = 200;
  int probes = 500;
  int tp_probes = 50;
  std::uint64_t seed = kDefaultSeed;
  double slack = tol::kDerivativeSlack;
  std::vector<double> ladder = {1e-2, 1e-3, 1e-4};
};

enum class CheckStatus { pass, fail, inconclusive, skipped };

std::string to_string(CheckStatus s);

struct CheckResult {
  /// Group tag reported in the failing-check manifest (e.g. "contractivity").
  std::string tag;
  std::string name;
  CheckStatus status = CheckStatus::pass;
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  ScanReport scan;

  /// No check failed or was inconclusive.
  bool pass() const;
  /// Distinct tags of checks that did not pass (skipped ones excluded).
  std::vector<std::string> failing_tags() const;
};

/**
 * Runs every verification check on the family defined by `params`:
 * dynamical-map (CP and TP on a grid), continuity (and derivative continuity
 * when delta > 1), closed-forms, not-P-divisible, contractivity,
 * image-structure, bounds.
 */
VerifyReport run_verification(const MapParams& params, const VerifyOptions& options);

/// Gamma^(1)_tau as the dense matrix exponential of g(tau) L0.
SuperOp gamma1_by_exponential(double tau, const MapParams& params);

}  // namespace qdyn
