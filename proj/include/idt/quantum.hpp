#pragma once

#include <random>
#include <vector>

#include "idt/linalg.hpp"

namespace idt {

using Rng = std::mt19937_64;

// Validation thresholds used across the quantum object types. They are
// absolute: all objects handled here are O(1) in norm.
inline constexpr double kPsdTolState = 1e-10;
inline constexpr double kPsdTolChoi = 1e-9;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kSumTol = 1e-9;

struct DensityMatrix {
  int dim = 0;
  ComplexMatrix rho;

  // Throws std::invalid_argument naming the violated invariant:
  // hermiticity, unit trace (1e-10), positivity (eigenvalues >= -1e-10).
  void validate() const;
};

struct Povm {
  int dim = 0;
  std::vector<ComplexMatrix> effects;

  int outcomes() const { return static_cast<int>(effects.size()); }
  // Effects hermitian and PSD within 1e-10, sum within 1e-9 of the identity
  // in spectral norm.
  void validate() const;
};

// Completely positive map from M_din to M_dout stored through its Choi
// matrix J(T) = sum_ij T(|i><j|) (x) |i><j| on C^dout (x) C^din. The output
// factor comes first and J is unnormalized: tr J = din when T is trace
// preserving, and tracing out the first factor gives tr_1 J = 1_din.
struct Channel {
  int din = 0;
  int dout = 0;
  ComplexMatrix choi;

  // CP within -1e-9 on Choi eigenvalues and TP within 1e-9 on ||tr_1 J - 1||.
  void validate() const;
};

// Collection of CP branch maps I_i on one input space whose sum is trace
// preserving. Branches are stored as Choi matrices in the same convention
// as Channel.
struct Instrument {
  int dim = 0;
  std::vector<ComplexMatrix> branch_choi;

  int outcomes() const { return static_cast<int>(branch_choi.size()); }
  void validate() const;
};

// J = sum_r flat(K_r) flat(K_r)^* with flat(K) the row-major vectorization,
// so J acts on C^dout (x) C^din.
ComplexMatrix choi_from_kraus(const std::vector<ComplexMatrix>& kraus);
Channel channel_from_kraus(const std::vector<ComplexMatrix>& kraus);

Channel identity_channel(int d);
Channel depolarizing_channel(int d);                 // rho -> tr(rho) 1/d
Channel dephasing_channel(int d);                    // rho -> diag(rho)

// T(x) = tr_2[J (1 (x) x^T)]. Linear in x, so x need not be a state.
ComplexMatrix apply_channel(const Channel& t, const ComplexMatrix& x);

// Composition, t applied after s: J(t o s) = (t (x) id)(J(s)).
Channel channel_compose(const Channel& t, const Channel& s);

// rho -> U t(U^* rho U) U^* for unitary u on the (square) channel space.
Channel conjugate_channel(const Channel& t, const ComplexMatrix& u);

// Induced measurement: E_i = (tr_1 J(I_i))^T, i.e. tr(I_i(rho)) = tr(rho E_i).
Povm instrument_povm(const Instrument& inst);
// Unconditioned evolution: Choi of sum_i I_i.
Channel instrument_channel(const Instrument& inst);

// Measurement back-action with Kraus operators sqrt(E_i).
Instrument lueders_instrument(const Povm& e);

// Uhlmann fidelity ||sqrt(a) sqrt(b)||_1, returned in [0, 1].
double fidelity(const DensityMatrix& a, const DensityMatrix& b);

// Samplers. All take an explicit RNG so runs are reproducible under a seed.
ComplexMatrix random_unitary(int d, Rng& rng);          // Haar distributed
ComplexMatrix random_pure(int d, Rng& rng);             // unit column vector
DensityMatrix random_density(int d, Rng& rng);          // Hilbert-Schmidt measure
// Haar isometry V : C^d -> C^d (x) C^m cut into branches
// I_i(rho) = (1 (x) <i|) V rho V^* (1 (x) |i>).
Instrument random_instrument(int d, int m, Rng& rng);
Povm random_povm(int d, int m, Rng& rng);

}  // namespace idt
