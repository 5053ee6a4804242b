#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "idt/measures.hpp"
#include "idt/quantum.hpp"
#include "idt/sdp_programs.hpp"

using idt::Channel;
using idt::Complex;
using idt::ComplexMatrix;
using idt::MeasureMethod;
using idt::MeasureValue;
using idt::Povm;
using idt::Rng;

namespace {

Povm basis_povm(int d) {
  Povm p;
  p.dim = d;
  for (int i = 0; i < d; ++i) {
    ComplexMatrix e(d, d);
    e(i, i) = 1.0;
    p.effects.push_back(e);
  }
  return p;
}

Povm uniform_povm(int d, int m) {
  Povm p;
  p.dim = d;
  for (int i = 0; i < m; ++i) {
    ComplexMatrix e = ComplexMatrix::identity(d);
    e *= Complex(1.0 / m, 0.0);
    p.effects.push_back(e);
  }
  return p;
}

ComplexMatrix witness_state(const MeasureValue& mv) {
  ComplexMatrix psi(static_cast<int>(mv.witness.size()), 1);
  for (size_t i = 0; i < mv.witness.size(); ++i) psi(static_cast<int>(i), 0) = mv.witness[i];
  return psi;
}

double outcome_gap(const Povm& e, const Povm& f, const ComplexMatrix& rho) {
  double sum = 0.0;
  for (int i = 0; i < e.outcomes(); ++i)
    sum += std::abs(((f.effects[static_cast<size_t>(i)] - e.effects[static_cast<size_t>(i)]) * rho)
                        .trace()
                        .real());
  return 0.5 * sum;
}

Channel unitary_conjugation(const ComplexMatrix& u) {
  return idt::channel_from_kraus({u});
}

Channel mix(const Channel& a, const Channel& b, double lam) {
  Channel out;
  out.din = a.din;
  out.dout = a.dout;
  ComplexMatrix ja = a.choi, jb = b.choi;
  ja *= Complex(lam, 0.0);
  jb *= Complex(1.0 - lam, 0.0);
  out.choi = ja + jb;
  return out;
}

Povm mix(const Povm& a, const Povm& b, double lam) {
  Povm out;
  out.dim = a.dim;
  for (int i = 0; i < a.outcomes(); ++i) {
    ComplexMatrix ea = a.effects[static_cast<size_t>(i)], eb = b.effects[static_cast<size_t>(i)];
    ea *= Complex(lam, 0.0);
    eb *= Complex(1.0 - lam, 0.0);
    out.effects.push_back(ea + eb);
  }
  return out;
}

}  // namespace

TEST_CASE("delta_tv on hand-checked pairs") {
  const Povm basis = basis_povm(2);

  SUBCASE("identical POVMs") {
    Rng rng(201);
    const Povm e = idt::random_povm(3, 4, rng);
    const MeasureValue mv = idt::delta_tv(e, e);
    CHECK(mv.value == doctest::Approx(0.0).scale(1));
    CHECK(mv.method == MeasureMethod::kSignEnumeration);
  }

  SUBCASE("basis versus coin flip") {
    const MeasureValue mv = idt::delta_tv(basis, uniform_povm(2, 2));
    CHECK(mv.value == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(mv.signs.size() == 2);
  }

  SUBCASE("noisy basis with known smearing") {
    // E'_i = alpha/2 1 + (1 - alpha)|i><i| lands at alpha (1 - 1/d).
    const double alpha = 0.4;
    Povm noisy = mix(uniform_povm(2, 2), basis, alpha);
    const MeasureValue tv = idt::delta_tv(basis, noisy);
    const MeasureValue linf = idt::delta_linf(basis, noisy);
    CHECK(tv.value == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(linf.value == doctest::Approx(0.2).epsilon(1e-12));
  }
}

TEST_CASE("delta_tv certificate reproduces the value and dominates sampling") {
  Rng rng(202);
  for (int trial = 0; trial < 6; ++trial) {
    const int d = 2 + trial % 2;
    const int m = 3 + trial % 3;
    const Povm e = idt::random_povm(d, m, rng);
    const Povm f = idt::random_povm(d, m, rng);
    const MeasureValue mv = idt::delta_tv(e, f);

    const ComplexMatrix psi = witness_state(mv);
    const ComplexMatrix rho_w = psi * psi.adjoint();
    CHECK(outcome_gap(e, f, rho_w) == doctest::Approx(mv.value).epsilon(1e-9));

    double sampled = 0.0;
    for (int s = 0; s < 2000; ++s)
      sampled = std::max(sampled, outcome_gap(e, f, idt::random_density(d, rng).rho));
    CHECK(mv.value >= sampled - 1e-9);
  }
}

TEST_CASE("delta_tv input validation") {
  const Povm basis = basis_povm(2);
  CHECK_THROWS_AS(idt::delta_tv(basis, basis_povm(3)), std::invalid_argument);

  Povm wide;
  wide.dim = 2;
  for (int i = 0; i < 25; ++i) {
    ComplexMatrix e = ComplexMatrix::identity(2);
    e *= Complex(1.0 / 25, 0.0);
    wide.effects.push_back(e);
  }
  CHECK_THROWS_WITH_AS(idt::delta_tv(wide, wide), doctest::Contains("m > 24"),
                       std::invalid_argument);
}

TEST_CASE("delta_linf matches a direct scan") {
  Rng rng(203);
  const Povm e = idt::random_povm(3, 5, rng);
  const Povm f = idt::random_povm(3, 5, rng);
  const MeasureValue mv = idt::delta_linf(e, f);
  double direct = 0.0;
  for (int i = 0; i < 5; ++i)
    direct = std::max(direct, idt::spectral_norm(f.effects[static_cast<size_t>(i)] -
                                                 e.effects[static_cast<size_t>(i)]));
  CHECK(mv.value == doctest::Approx(direct).epsilon(1e-12));
  CHECK(mv.method == MeasureMethod::kExact);

  // witness reproduces the winning outcome deviation
  const ComplexMatrix psi = witness_state(mv);
  const ComplexMatrix rho_w = psi * psi.adjoint();
  double at_witness = 0.0;
  for (int i = 0; i < 5; ++i)
    at_witness = std::max(
        at_witness, std::abs(((f.effects[static_cast<size_t>(i)] - e.effects[static_cast<size_t>(i)]) *
                              rho_w)
                                 .trace()
                                 .real()));
  CHECK(at_witness == doctest::Approx(mv.value).epsilon(1e-9));
}

TEST_CASE("worst_fidelity on reference channels") {
  CHECK(idt::worst_fidelity(idt::identity_channel(3), 20).value ==
        doctest::Approx(1.0).epsilon(1e-9));
  CHECK(idt::worst_fidelity(idt::depolarizing_channel(2), 20).value ==
        doctest::Approx(0.5).epsilon(1e-9));
  CHECK(idt::worst_fidelity(idt::dephasing_channel(2), 50).value ==
        doctest::Approx(0.5).epsilon(1e-9));

  const MeasureValue mv = idt::worst_fidelity(idt::dephasing_channel(3), 50);
  CHECK(mv.method == MeasureMethod::kHeuristicRestarts);
  CHECK(mv.restarts_used == 50);

  // the witness certifies the value through an independent evaluation
  const ComplexMatrix psi = witness_state(mv);
  const ComplexMatrix rho = psi * psi.adjoint();
  const double direct =
      (idt::apply_channel(idt::dephasing_channel(3), rho) * rho).trace().real();
  CHECK(direct == doctest::Approx(mv.value).epsilon(1e-10));

  CHECK_THROWS_AS(idt::worst_fidelity(idt::identity_channel(2), 0), std::invalid_argument);
}

TEST_CASE("avg_fidelity closed form against Monte Carlo") {
  CHECK(idt::avg_fidelity(idt::identity_channel(4)).value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(idt::avg_fidelity(idt::depolarizing_channel(2)).value ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(idt::avg_fidelity(idt::dephasing_channel(2)).value ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-12));

  Rng rng(204);
  const Channel t = idt::instrument_channel(idt::random_instrument(3, 5, rng));
  const double exact = idt::avg_fidelity(t).value;
  double mc = 0.0;
  const int samples = 20000;
  for (int s = 0; s < samples; ++s) {
    const ComplexMatrix psi = idt::random_pure(3, rng);
    const ComplexMatrix rho = psi * psi.adjoint();
    mc += (idt::apply_channel(t, rho) * rho).trace().real();
  }
  mc /= samples;
  CHECK(exact == doctest::Approx(mc).epsilon(2e-2));
}

TEST_CASE("trace_norm_disturbance on reference channels") {
  CHECK(idt::trace_norm_disturbance(idt::identity_channel(2), 20).value ==
        doctest::Approx(0.0).scale(1));
  CHECK(idt::trace_norm_disturbance(idt::dephasing_channel(2), 50).value ==
        doctest::Approx(0.5).epsilon(1e-9));

  ComplexMatrix pauli_x(2, 2);
  pauli_x(0, 1) = 1.0;
  pauli_x(1, 0) = 1.0;
  const MeasureValue mv = idt::trace_norm_disturbance(unitary_conjugation(pauli_x), 50);
  CHECK(mv.value == doctest::Approx(1.0).epsilon(1e-9));

  // the witness certifies the value
  const ComplexMatrix psi = witness_state(mv);
  const ComplexMatrix rho = psi * psi.adjoint();
  const double direct =
      0.5 * idt::trace_norm(rho - idt::apply_channel(unitary_conjugation(pauli_x), rho));
  CHECK(direct == doctest::Approx(mv.value).epsilon(1e-10));

  CHECK_THROWS_AS(idt::trace_norm_disturbance(idt::identity_channel(2), 0),
                  std::invalid_argument);
}

TEST_CASE("hat_delta spread on reference channels") {
  // both the ideal channel and erase-and-replace have zero spread; complete
  // dephasing spreads between a basis state and a balanced superposition
  CHECK(idt::hat_delta(idt::identity_channel(2), 20).value ==
        doctest::Approx(0.0).scale(1));
  CHECK(idt::hat_delta(idt::depolarizing_channel(3), 20).value ==
        doctest::Approx(0.0).scale(1));
  CHECK(idt::hat_delta(idt::dephasing_channel(2), 50).value ==
        doctest::Approx(0.5).epsilon(1e-9));
  CHECK_THROWS_AS(idt::hat_delta(idt::identity_channel(2), 0), std::invalid_argument);
}

TEST_CASE("diamond_distance on reference channels") {
  CHECK(idt::diamond_distance(idt::identity_channel(2)).value ==
        doctest::Approx(0.0).scale(1));
  CHECK(idt::diamond_distance(idt::dephasing_channel(2)).value ==
        doctest::Approx(1.0).epsilon(1e-6));

  ComplexMatrix pauli_z(2, 2);
  pauli_z(0, 0) = 1.0;
  pauli_z(1, 1) = -1.0;
  const MeasureValue mv = idt::diamond_distance(unitary_conjugation(pauli_z));
  CHECK(mv.value == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(mv.method == MeasureMethod::kSdp);
}

TEST_CASE("fidelity and total variation obey the two-sided bound") {
  Rng rng(205);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 2 + trial % 2;
    const Channel t = idt::instrument_channel(idt::random_instrument(d, 1 + trial % 4, rng));
    const double f = idt::worst_fidelity(t, 60, 205).value;
    const double tv = idt::trace_norm_disturbance(t, 60, 205).value;
    CHECK(1.0 - f <= tv + 2e-4);
    CHECK(tv <= std::sqrt(1.0 - f) + 2e-4);
  }
}

TEST_CASE("measures are convex in their argument") {
  Rng rng(206);
  const int d = 2;
  for (const double lam : {0.25, 0.5, 0.75}) {
    const Channel a = idt::instrument_channel(idt::random_instrument(d, 3, rng));
    const Channel b = idt::instrument_channel(idt::random_instrument(d, 2, rng));
    const Channel ab = mix(a, b, lam);

    const double tv_mix = idt::trace_norm_disturbance(ab, 40).value;
    const double tv_sum = lam * idt::trace_norm_disturbance(a, 40).value +
                          (1.0 - lam) * idt::trace_norm_disturbance(b, 40).value;
    CHECK(tv_mix <= tv_sum + 2e-4);

    const double hd_mix = idt::hat_delta(ab, 40).value;
    const double hd_sum = lam * idt::hat_delta(a, 40).value +
                          (1.0 - lam) * idt::hat_delta(b, 40).value;
    CHECK(hd_mix <= hd_sum + 2e-4);

    const double dd_mix = idt::diamond_distance(ab).value;
    const double dd_sum = lam * idt::diamond_distance(a).value +
                          (1.0 - lam) * idt::diamond_distance(b).value;
    CHECK(dd_mix <= dd_sum + 1e-6);

    // complement of a concave functional: check the matching direction
    const double wf_mix = idt::worst_fidelity(ab, 40).value;
    const double wf_sum = lam * idt::worst_fidelity(a, 40).value +
                          (1.0 - lam) * idt::worst_fidelity(b, 40).value;
    CHECK(1.0 - wf_mix <= (1.0 - wf_sum) + 2e-4);

    const Povm pe = idt::random_povm(d, 3, rng);
    const Povm pf = idt::random_povm(d, 3, rng);
    const Povm pg = idt::random_povm(d, 3, rng);
    const double dtv_mix = idt::delta_tv(pe, mix(pf, pg, lam)).value;
    const double dtv_sum =
        lam * idt::delta_tv(pe, pf).value + (1.0 - lam) * idt::delta_tv(pe, pg).value;
    CHECK(dtv_mix <= dtv_sum + 1e-9);

    const double dli_mix = idt::delta_linf(pe, mix(pf, pg, lam)).value;
    const double dli_sum =
        lam * idt::delta_linf(pe, pf).value + (1.0 - lam) * idt::delta_linf(pe, pg).value;
    CHECK(dli_mix <= dli_sum + 1e-9);
  }
}

TEST_CASE("channel measures are basis independent") {
  Rng rng(207);
  const Channel t = idt::instrument_channel(idt::random_instrument(3, 3, rng));
  const ComplexMatrix u = idt::random_unitary(3, rng);
  const Channel tu = idt::conjugate_channel(t, u);

  CHECK(idt::avg_fidelity(tu).value == doctest::Approx(idt::avg_fidelity(t).value).epsilon(1e-10));
  CHECK(idt::worst_fidelity(tu, 80).value ==
        doctest::Approx(idt::worst_fidelity(t, 80).value).epsilon(2e-4));
  CHECK(idt::trace_norm_disturbance(tu, 80).value ==
        doctest::Approx(idt::trace_norm_disturbance(t, 80).value).epsilon(2e-4));
  CHECK(idt::hat_delta(tu, 80).value ==
        doctest::Approx(idt::hat_delta(t, 80).value).epsilon(2e-4));
  CHECK(idt::diamond_distance(tu).value ==
        doctest::Approx(idt::diamond_distance(t).value).epsilon(1e-7));
}

TEST_CASE("measurement deviations respect outcome and basis symmetries") {
  Rng rng(208);
  const int d = 3, m = 4;
  const Povm e = idt::random_povm(d, m, rng);
  const Povm f = idt::random_povm(d, m, rng);
  const double tv = idt::delta_tv(e, f).value;
  const double li = idt::delta_linf(e, f).value;

  // relabeling outcomes by a cyclic shift
  Povm ep, fp;
  ep.dim = fp.dim = d;
  for (int i = 0; i < m; ++i) {
    ep.effects.push_back(e.effects[static_cast<size_t>((i + 1) % m)]);
    fp.effects.push_back(f.effects[static_cast<size_t>((i + 1) % m)]);
  }
  CHECK(idt::delta_tv(ep, fp).value == doctest::Approx(tv).epsilon(1e-9));
  CHECK(idt::delta_linf(ep, fp).value == doctest::Approx(li).epsilon(1e-9));

  // conjugating both POVMs by a diagonal unitary
  ComplexMatrix diag(d, d);
  for (int i = 0; i < d; ++i) diag(i, i) = std::exp(Complex(0.0, 0.4 * (i + 1)));
  Povm ed, fd;
  ed.dim = fd.dim = d;
  for (int i = 0; i < m; ++i) {
    ed.effects.push_back(diag * e.effects[static_cast<size_t>(i)] * diag.adjoint());
    fd.effects.push_back(diag * f.effects[static_cast<size_t>(i)] * diag.adjoint());
  }
  CHECK(idt::delta_tv(ed, fd).value == doctest::Approx(tv).epsilon(1e-9));
  CHECK(idt::delta_linf(ed, fd).value == doctest::Approx(li).epsilon(1e-9));
}

TEST_CASE("heuristic batches are reproducible under a fixed seed") {
  Rng rng(209);
  const Channel t = idt::instrument_channel(idt::random_instrument(3, 4, rng));
  const MeasureValue a = idt::worst_fidelity(t, 30, 777);
  const MeasureValue b = idt::worst_fidelity(t, 30, 777);
  CHECK(a.value == b.value);
  REQUIRE(a.witness.size() == b.witness.size());
  for (size_t i = 0; i < a.witness.size(); ++i) CHECK(a.witness[i] == b.witness[i]);

  const MeasureValue c = idt::worst_fidelity(t, 30, 778);
  CHECK(a.value == doctest::Approx(c.value).epsilon(1e-6));
}
