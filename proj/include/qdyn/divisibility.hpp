#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qdyn/superop.hpp"
#include "qdyn/tolerances.hpp"

namespace qdyn {

enum class Definedness {
  /// Lambda_s invertible; V is unique.
  exact,
  /// Lambda_s singular but V Lambda_s reproduces Lambda_t; V is fixed only on Im(Lambda_s).
  image_restricted,
  /// No linear V with V Lambda_s = Lambda_t.
  inconsistent,
};

std::string to_string(Definedness d);

/**
 * Candidate V with Lambda_t = V Lambda_s, V = Lambda_t pinv(Lambda_s).
 * Off Im(Lambda_s) the pseudoinverse gives the minimum-norm completion,
 * which is a convention: any other completion is equally valid there.
 */
struct IntermediateMap {
  double s = 0.0;
  double t = 0.0;
  SuperOp map = SuperOp::identity(1);
  /// max entry of V Lambda_s - Lambda_t.
  double residual = 0.0;
  Definedness definedness = Definedness::exact;
  int rank_s = 0;
};

IntermediateMap intermediate_map(const MapFamily& family, double s, double t,
                                 double rel_cutoff = tol::kRankCutoff);

enum class CpVerdict { cp, not_cp, undefined_off_image };

std::string to_string(CpVerdict v);

struct IntervalVerdict {
  double s = 0.0;
  double t = 0.0;
  Definedness definedness = Definedness::exact;
  double residual = 0.0;
  double choi_min = 0.0;
  /// TP defect of the (completed) intermediate map.
  double tp_defect = 0.0;
  /// Forcing-witness discrepancy, negative when no witness exists.
  double forcing_discrepancy = -1.0;
  CpVerdict verdict = CpVerdict::cp;
};

/**
 * CP verdict for every consecutive grid interval.
 *
 * exact: cp iff the Choi matrix of V is PSD within `tol`.
 * image_restricted: cp when the minimum-norm completion is already CPTP;
 * not_cp when a forcing witness with positive discrepancy rules out every
 * positive TP completion; undefined_off_image otherwise.
 * inconsistent: undefined_off_image.
 */
std::vector<IntervalVerdict> cp_divisibility_scan(const MapFamily& family,
                                                  const std::vector<double>& grid,
                                                  double tol = tol::kPsd);

/**
 * Proof that no positive, trace-preserving V with Lambda_t = V Lambda_s
 * exists. If Lambda_t sends an input state to a pure state pi while
 * Lambda_s sends it to sigma, a positive TP V must map every pure state
 * in supp(sigma) to pi. Two such constraints whose supports share a
 * vector force that vector's projector onto two targets; their trace
 * distance is the discrepancy.
 */
struct ForcingWitness {
  CVector shared_vector;
  HermOp first_source;
  HermOp second_source;
  HermOp first_target;
  HermOp second_target;
  double discrepancy = 0.0;
};

/// Inputs default to the computational basis states. Returns nullopt when no
/// pair of pure-target constraints has intersecting supports.
std::optional<ForcingWitness> positive_forcing_witness(const MapFamily& family, double s, double t,
                                                       double support_cutoff = tol::kSupportCutoff,
                                                       const std::vector<CVector>& inputs = {});

}  // namespace qdyn
