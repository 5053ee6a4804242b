#pragma once

#include <optional>

#include "idt/quantum.hpp"

namespace idt {

// Channels that commute with all diagonal unitaries and basis permutations
// form a three-parameter family
//   Phi = alpha tr[.] 1/d + beta id + gamma sum_i |i><i| <i|.|i>,
// with alpha + beta + gamma = 1 imposed by trace preservation. Complete
// positivity is equivalent to the three Choi eigenvalues
//   a = alpha/d^2,  c = a + gamma/d,  b = beta + c
// being nonnegative.
struct SymmetricParams {
  int d = 0;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;

  // Throws std::invalid_argument naming the violated condition: parameter
  // sum (1e-12) or an offending Choi eigenvalue (>= -1e-10).
  void validate() const;
};

// Parameters of the universal measurement instrument family
//   I_i(rho) = z <i|rho|i> (1 - |i><i|)/(d-1) + (1-z) K_i rho K_i,
//   K_i = mu 1 + nu |i><i|,
// with z in [0,1] and d mu^2 + nu^2 + 2 mu nu = 1 for trace preservation.
// The pair (mu, nu) and its negation describe the same instrument; mu >= 0
// is the canonical representative.
struct FamilyParams {
  int d = 0;
  double z = 0.0;
  double mu = 0.0;
  double nu = 0.0;

  // Throws std::invalid_argument on z outside [0,1] or a broken trace
  // preservation identity (1e-12).
  void validate() const;
};

// Coordinates on the unit cone z in [0,1], x^2 + y^2 <= (1-z)^2 that label
// the candidate optimal symmetric devices; envelope points satisfy the
// equality. The cone state is
//   rho = 1/2 ((1-z) 1_2 + x sigma_x + y sigma_z) (+) (z),
// in the fixed gauge where |e_2><e_2| = (1_2 + sigma_x)/2 and e_1 has the
// Bloch vector (2/d - 1, 2 sqrt(d-1)/d) in the (x, z) plane.
struct ConePoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  void validate() const;
};

// Channel-marginal parameters read off a cone state:
//   alpha1 = d z / (d-1),
//   beta1  = d/(d-1) <e1|rho|e1> - (1-z)/(d-1),
//   a2     = (1 - <e2|rho|e2> - z)/(d^2 - d),
// and the induced worst-case total variational deviation
// delta_tv = (1 - z - x)/2 = (d^2 - d) a2. Raw formula values are reported
// without clipping; physicality is the caller's concern.
struct ConeMarginals {
  double alpha1 = 0.0;
  double beta1 = 0.0;
  double a2 = 0.0;
  double delta_tv = 0.0;
};

// Closed-form measure values of a symmetric channel (gamma1 = 1 - alpha1 -
// beta1):
//   f     = alpha1/d + beta1 + (gamma1 >= 0 ? gamma1/d : gamma1),
//   fbar  = 2/(d+1) - alpha1 (d-1)/(d (d+1)) + beta1 (d-1)/(d+1),
//   Delta_TV = 1 - f,
//   Delta_diamond = 2 gamma1 (1 - 1/d), exposed only when alpha1 = 0 (up to
//   1e-12, admitting numerically twirled parameters) where the closed form
//   is an equality; otherwise callers route to the SDP.
// When the parameters describe a measurement marginal, the measurement
// deviation depends only on the depolarizing weight: delta_tv =
// alpha (1 - 1/d).
struct SymMeasures {
  double worst_fidelity = 0.0;
  double avg_fidelity = 0.0;
  double tv_disturbance = 0.0;
  double delta_tv = 0.0;
  std::optional<double> diamond;
};

// Builds the d-branch instrument of the family. Throws on invalid
// parameters or d < 2 (the erase branch needs an orthocomplement). The
// induced POVM is E'_i = alpha2 1/d + (1 - alpha2)|i><i| with
// alpha2 = d (1-z) mu^2.
Instrument family_instrument(const FamilyParams& p);

// Choi construction of the symmetric channel from its three eigenvalues on
// the commutant eigenprojectors.
Channel symmetric_channel(const SymmetricParams& p);

// Exact algebraic twirl: projects any square channel onto the symmetric
// family by reading the three eigenvalue expectations off the normalized
// Choi state. Idempotent on symmetric channels.
SymmetricParams twirl_channel(const Channel& t);

// Twirl of a d-outcome POVM onto the symmetric form
// E_i = alpha2 1/d + (1 - alpha2)|i><i|; returns alpha2 =
// d/(d-1) (1 - (1/d) sum_i <i|E_i|i>). Throws unless m = d.
double twirl_povm(const Povm& e);

// The symmetric POVM with the given depolarizing weight.
Povm symmetric_povm(int d, double alpha2);

// Marginal parameters of a cone state for target dimension d.
ConeMarginals cone_to_marginals(const ConePoint& c, int d);

// Closed-form measures of the symmetric channel; see SymMeasures.
SymMeasures sym_measures(const SymmetricParams& p);

// The z = 0 family member achieving the optimal fidelity, trace-norm and
// diamond tradeoffs at measurement deviation delta in [0, 1 - 1/d]:
// mu = sqrt(delta/(d-1)), nu = -mu + sqrt(1 - (d-1) mu^2).
FamilyParams achiever_from_delta(int d, double delta);

}  // namespace idt
