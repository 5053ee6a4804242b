#include "idt/targets.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "idt/linalg.hpp"

namespace idt {

namespace {

// Rank-one qubit projector (1 + r . sigma) / 2 for a unit Bloch vector r.
ComplexMatrix bloch_projector(double x, double y, double z) {
  ComplexMatrix p(2, 2);
  p(0, 0) = 0.5 * (1.0 + z);
  p(0, 1) = 0.5 * Complex(x, -y);
  p(1, 0) = 0.5 * Complex(x, y);
  p(1, 1) = 0.5 * (1.0 - z);
  return p;
}

// Unnormalized outer product |v><v| scaled by `weight`.
ComplexMatrix scaled_outer(const std::vector<Complex>& v, double weight) {
  const int d = static_cast<int>(v.size());
  ComplexMatrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = weight * v[i] * std::conj(v[j]);
  return m;
}

}  // namespace

Povm basis_target(int d) {
  if (d < 1) throw std::invalid_argument("basis_target: dimension must be positive");
  Povm out;
  out.dim = d;
  for (int i = 0; i < d; ++i) {
    ComplexMatrix e(d, d);
    e(i, i) = 1.0;
    out.effects.push_back(e);
  }
  out.validate();
  return out;
}

Povm sic_povm(int d) {
  Povm out;
  out.dim = d;
  if (d == 2) {
    // Regular tetrahedron: pairwise Bloch angles with r_i . r_j = -1/3,
    // which gives tr[P_i P_j] = (1 + r_i . r_j) / 2 = 1/3.
    const double s2 = std::sqrt(2.0);
    const double s23 = std::sqrt(2.0 / 3.0);
    const double vecs[4][3] = {{0.0, 0.0, 1.0},
                               {2.0 * s2 / 3.0, 0.0, -1.0 / 3.0},
                               {-s2 / 3.0, s23, -1.0 / 3.0},
                               {-s2 / 3.0, -s23, -1.0 / 3.0}};
    for (const auto& r : vecs) {
      ComplexMatrix e = bloch_projector(r[0], r[1], r[2]);
      e *= Complex(0.5);
      out.effects.push_back(e);
    }
  } else if (d == 3) {
    // Nine vectors of norm sqrt(2); the projectors are |v><v| / 2 and the
    // effects |v><v| / 6, so that any two distinct projectors overlap in
    // tr[P_i P_j] = |<v_i|v_j>|^2 / 4 = 1/4.
    const Complex eta = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
    for (int k = 0; k < 3; ++k) {
      const Complex ek = std::pow(eta, k);
      const std::vector<std::vector<Complex>> group = {
          {0.0, 1.0, -ek}, {-ek, 0.0, 1.0}, {1.0, -ek, 0.0}};
      for (const auto& v : group) out.effects.push_back(scaled_outer(v, 1.0 / 6.0));
    }
  } else {
    throw std::invalid_argument("sic_povm: only dimensions 2 and 3 are built in");
  }
  out.validate();
  return out;
}

Povm degenerate_pair_target() {
  Povm out;
  out.dim = 4;
  for (int block = 0; block < 2; ++block) {
    ComplexMatrix e(4, 4);
    e(2 * block, 2 * block) = 1.0;
    e(2 * block + 1, 2 * block + 1) = 1.0;
    out.effects.push_back(e);
  }
  out.validate();
  return out;
}

Povm lueders_mix(const Povm& povm, double t) {
  if (!(t >= 0.0 && t <= 1.0))
    throw std::invalid_argument("lueders_mix: mixing weight must lie in [0, 1]");
  povm.validate();
  Povm out;
  out.dim = povm.dim;
  for (const ComplexMatrix& e : povm.effects) {
    ComplexMatrix mixed = e;
    mixed *= Complex(t);
    const double share = (1.0 - t) * e.trace().real() / povm.dim;
    for (int i = 0; i < povm.dim; ++i) mixed(i, i) += share;
    out.effects.push_back(mixed);
  }
  out.validate();
  return out;
}

double lueders_mix_scale(const Povm& povm) {
  povm.validate();
  double worst = 0.0;
  for (const ComplexMatrix& e : povm.effects) {
    ComplexMatrix diff = e;
    const double share = e.trace().real() / povm.dim;
    for (int i = 0; i < povm.dim; ++i) diff(i, i) -= share;
    worst = std::max(worst, spectral_norm(diff));
  }
  return worst;
}

Povm named_target(const std::string& name, int d) {
  if (name == "basis") return basis_target(d);
  if (name == "sic2") return sic_povm(2);
  if (name == "sic3") return sic_povm(3);
  if (name == "degenerate") return degenerate_pair_target();
  throw std::invalid_argument("named_target: unknown target \"" + name + "\"");
}

}  // namespace idt
