#pragma once

#include <cstdint>
#include <vector>

#include "idt/quantum.hpp"
#include "idt/sdp.hpp"

namespace idt {

// How a measure value was obtained. Exact values come from closed formulas
// or eigenvalue computations, sign enumeration is exact over a finite
// search, heuristic values are the best of many local optimizations and are
// one-sided bounds, and sdp values are exact within the solver tolerance.
enum class MeasureMethod { kExact, kSignEnumeration, kHeuristicRestarts, kSdp };

struct MeasureValue {
  double value = 0.0;
  MeasureMethod method = MeasureMethod::kExact;
  // Certificate of the reported value where one exists: the pure state
  // achieving it and, for sign enumeration, the winning sign pattern.
  std::vector<Complex> witness;
  std::vector<int> signs;
  int restarts_used = 0;
};

// Default base seed for the heuristic restarts. Each restart i derives its
// own generator as Rng(seed ^ (0x9e3779b97f4a7c15 * (i + 1))), so batches
// are reproducible and independent of execution order.
inline constexpr std::uint64_t kMeasureSeed = 0x6d656173ULL;

// Largest distinguish-by-sign probability between the outcome distributions
// of two measurements over a shared input state,
//   sup_rho 1/2 sum_i |tr[(F_i - E_i) rho]|.
// Computed exactly as half the maximum over sign vectors s of
// lambda_max(sum_i s_i (F_i - E_i)); the differences sum to zero, so only
// 2^(m-1) patterns need scanning. Throws std::invalid_argument when the
// POVMs do not share shape or when m > 24 (enumeration too large).
MeasureValue delta_tv(const Povm& e, const Povm& f);

// Worst-case single-outcome deviation max_i ||F_i - E_i||_inf, equal to
// sup_rho max_i |tr[(F_i - E_i) rho]|.
MeasureValue delta_linf(const Povm& e, const Povm& f);

// Worst-case pure-state fidelity inf_psi <psi|T(|psi><psi|)|psi>, estimated
// by projected gradient descent on the unit sphere from `restarts` random
// starts. The result is an upper bound on the true infimum.
MeasureValue worst_fidelity(const Channel& t, int restarts, std::uint64_t seed = kMeasureSeed);

// Average pure-state fidelity over the unitarily invariant measure, exact
// through the entanglement fidelity: fbar = (d F_e + 1) / (d + 1) with
// F_e = <Omega| J/d |Omega> and Omega the normalized maximally entangled
// vector.
MeasureValue avg_fidelity(const Channel& t);

// Total variational disturbance 1/2 sup_rho ||T(rho) - rho||_1. Convexity
// lets the supremum run over pure states only; estimated like
// worst_fidelity, so the value is a lower bound on the supremum.
MeasureValue trace_norm_disturbance(const Channel& t, int restarts,
                                    std::uint64_t seed = kMeasureSeed);

// Spread of the state-overlap function, sup_psi <psi|T(psi)|psi> minus
// inf_phi <phi|T(phi)|phi>, each side estimated by restarts as in
// worst_fidelity. The witness records the infimum state.
MeasureValue hat_delta(const Channel& t, int restarts, std::uint64_t seed = kMeasureSeed);

// Diamond-norm disturbance ||T - id||_diamond via the semidefinite program.
// Throws std::runtime_error carrying the final duality gap if the solver
// does not converge.
MeasureValue diamond_distance(const Channel& t, const SdpOptions& options = {});

}  // namespace idt
