#include "idt/family.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace idt {

namespace {

struct ChoiEigs {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

ChoiEigs choi_eigs(const SymmetricParams& p) {
  ChoiEigs e;
  e.a = p.alpha / (p.d * p.d);
  e.c = e.a + p.gamma / p.d;
  e.b = p.beta + e.c;
  return e;
}

// Eigenprojectors of the normalized Choi state of a symmetric channel:
// P_b projects on the maximally entangled vector, P_c on the rest of the
// diagonal-pair space span{|ii>}, and P_a on its orthocomplement.
struct CommutantProjectors {
  ComplexMatrix pa;
  ComplexMatrix pb;
  ComplexMatrix pc;
};

CommutantProjectors commutant_projectors(int d) {
  CommutantProjectors out;
  ComplexMatrix diag_pairs(d * d, d * d);
  for (int i = 0; i < d; ++i) diag_pairs(i * d + i, i * d + i) = 1.0;
  ComplexMatrix pb(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) pb(i * d + i, j * d + j) = 1.0 / d;
  out.pa = ComplexMatrix::identity(d * d) - diag_pairs;
  out.pb = pb;
  out.pc = diag_pairs - pb;
  return out;
}

}  // namespace

void SymmetricParams::validate() const {
  if (d < 1) throw std::invalid_argument("SymmetricParams: dimension must be positive");
  if (std::abs(alpha + beta + gamma - 1.0) > 1e-12)
    throw std::invalid_argument("SymmetricParams: parameters must sum to one");
  const ChoiEigs e = choi_eigs(*this);
  const auto reject = [](const char* name, double value) {
    std::ostringstream msg;
    msg << "SymmetricParams: Choi eigenvalue " << name << " = " << value << " is negative";
    throw std::invalid_argument(msg.str());
  };
  if (e.a < -1e-10) reject("a", e.a);
  if (e.b < -1e-10) reject("b", e.b);
  if (e.c < -1e-10) reject("c", e.c);
}

void FamilyParams::validate() const {
  if (d < 1) throw std::invalid_argument("FamilyParams: dimension must be positive");
  if (z < 0.0 || z > 1.0) throw std::invalid_argument("FamilyParams: z must lie in [0, 1]");
  if (std::abs(d * mu * mu + nu * nu + 2.0 * mu * nu - 1.0) > 1e-12)
    throw std::invalid_argument(
        "FamilyParams: trace preservation needs d mu^2 + nu^2 + 2 mu nu = 1");
}

void ConePoint::validate() const {
  if (z < 0.0 || z > 1.0) throw std::invalid_argument("ConePoint: z must lie in [0, 1]");
  if (x * x + y * y > (1.0 - z) * (1.0 - z) + 1e-12)
    throw std::invalid_argument("ConePoint: (x, y) must lie inside the cone slice");
}

Instrument family_instrument(const FamilyParams& p) {
  p.validate();
  if (p.d < 2)
    throw std::invalid_argument("family_instrument: the erase branch needs dimension >= 2");
  const int d = p.d;
  // The sign pair (mu, nu) and its negation give the same K rho K branch.
  const double mu = p.mu < 0.0 ? -p.mu : p.mu;
  const double nu = p.mu < 0.0 ? -p.nu : p.nu;

  Instrument inst;
  inst.dim = d;
  inst.branch_choi.reserve(static_cast<size_t>(d));
  for (int i = 0; i < d; ++i) {
    std::vector<ComplexMatrix> kraus;
    kraus.reserve(static_cast<size_t>(d));
    const double erase = std::sqrt(p.z / (d - 1));
    for (int j = 0; j < d; ++j) {
      if (j == i) continue;
      ComplexMatrix hop(d, d);
      hop(j, i) = erase;
      kraus.push_back(hop);
    }
    ComplexMatrix keep = ComplexMatrix::identity(d);
    keep *= Complex(mu, 0.0);
    keep(i, i) += nu;
    keep *= Complex(std::sqrt(1.0 - p.z), 0.0);
    kraus.push_back(keep);
    inst.branch_choi.push_back(choi_from_kraus(kraus));
  }
  return inst;
}

Channel symmetric_channel(const SymmetricParams& p) {
  p.validate();
  const ChoiEigs e = choi_eigs(p);
  const CommutantProjectors proj = commutant_projectors(p.d);
  ComplexMatrix j = proj.pa;
  j *= Complex(e.a, 0.0);
  ComplexMatrix tb = proj.pb;
  tb *= Complex(e.b, 0.0);
  ComplexMatrix tc = proj.pc;
  tc *= Complex(e.c, 0.0);
  j += tb;
  j += tc;
  j *= Complex(p.d, 0.0);

  Channel out;
  out.din = p.d;
  out.dout = p.d;
  out.choi = j;
  return out;
}

SymmetricParams twirl_channel(const Channel& t) {
  if (t.din != t.dout || t.din < 1)
    throw std::invalid_argument("twirl_channel: channel must map a space to itself");
  const int d = t.din;
  const CommutantProjectors proj = commutant_projectors(d);
  ComplexMatrix state = t.choi;
  state *= Complex(1.0 / d, 0.0);

  const double a = (proj.pa * state).trace().real() / (d * d - d);
  const double b = (proj.pb * state).trace().real();
  const double c = d > 1 ? (proj.pc * state).trace().real() / (d - 1) : b;

  SymmetricParams p;
  p.d = d;
  p.alpha = d * d * a;
  p.beta = b - c;
  p.gamma = d * (c - a);
  return p;
}

double twirl_povm(const Povm& e) {
  if (e.dim < 2) throw std::invalid_argument("twirl_povm: dimension must be at least 2");
  if (e.outcomes() != e.dim)
    throw std::invalid_argument("twirl_povm: needs exactly one outcome per basis vector");
  const int d = e.dim;
  double diag_mass = 0.0;
  for (int i = 0; i < d; ++i) diag_mass += e.effects[static_cast<size_t>(i)](i, i).real();
  return d / (d - 1.0) * (1.0 - diag_mass / d);
}

Povm symmetric_povm(int d, double alpha2) {
  Povm out;
  out.dim = d;
  for (int i = 0; i < d; ++i) {
    ComplexMatrix e = ComplexMatrix::identity(d);
    e *= Complex(alpha2 / d, 0.0);
    e(i, i) += 1.0 - alpha2;
    out.effects.push_back(e);
  }
  return out;
}

ConeMarginals cone_to_marginals(const ConePoint& c, int d) {
  c.validate();
  if (d < 2) throw std::invalid_argument("cone_to_marginals: dimension must be at least 2");
  // Overlaps of the cone state with the gauge-fixed vectors: e2 has Bloch
  // vector (1, 0) and e1 has (2/d - 1, 2 sqrt(d-1)/d) in the (x, z) plane.
  const double e2_overlap = 0.5 * ((1.0 - c.z) + c.x);
  const double e1_overlap =
      0.5 * ((1.0 - c.z) + c.x * (2.0 / d - 1.0) + c.y * 2.0 * std::sqrt(d - 1.0) / d);

  ConeMarginals out;
  out.alpha1 = d * c.z / (d - 1.0);
  out.beta1 = d / (d - 1.0) * e1_overlap - (1.0 - c.z) / (d - 1.0);
  out.a2 = (1.0 - e2_overlap - c.z) / (d * d - d);
  out.delta_tv = 0.5 * (1.0 - c.z - c.x);
  return out;
}

SymMeasures sym_measures(const SymmetricParams& p) {
  p.validate();
  const int d = p.d;
  const double gamma1 = p.gamma;
  SymMeasures out;
  out.worst_fidelity = p.alpha / d + p.beta + (gamma1 >= 0.0 ? gamma1 / d : gamma1);
  out.avg_fidelity =
      2.0 / (d + 1.0) - p.alpha * (d - 1.0) / (d * (d + 1.0)) + p.beta * (d - 1.0) / (d + 1.0);
  out.tv_disturbance = 1.0 - out.worst_fidelity;
  out.delta_tv = p.alpha * (1.0 - 1.0 / d);
  // The diamond closed form is an equality only on the alpha = 0 slice. The
  // latitude admits parameters recovered from a numerical twirl.
  if (std::abs(p.alpha) <= 1e-12) out.diamond = 2.0 * gamma1 * (1.0 - 1.0 / d);
  return out;
}

FamilyParams achiever_from_delta(int d, double delta) {
  if (d < 2) throw std::invalid_argument("achiever_from_delta: dimension must be at least 2");
  if (delta < 0.0 || delta > 1.0 - 1.0 / d + 1e-12)
    throw std::invalid_argument("achiever_from_delta: deviation must lie in [0, 1 - 1/d]");
  FamilyParams p;
  p.d = d;
  p.z = 0.0;
  p.mu = std::sqrt(delta / (d - 1.0));
  p.nu = -p.mu + std::sqrt(std::max(0.0, 1.0 - (d - 1.0) * p.mu * p.mu));
  return p;
}

}  // namespace idt
