#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "idt/json_io.hpp"
#include "idt/linalg.hpp"
#include "idt/quantum.hpp"

using idt::Complex;
using idt::ComplexMatrix;

namespace {

// Direct Kraus application, used as the oracle for the Choi-based path.
ComplexMatrix kraus_apply(const std::vector<ComplexMatrix>& kraus, const ComplexMatrix& rho) {
  ComplexMatrix out(kraus.front().rows(), kraus.front().rows());
  for (const ComplexMatrix& k : kraus) out += k * rho * k.adjoint();
  return out;
}

std::vector<ComplexMatrix> random_kraus_set(int d, int count, idt::Rng& rng) {
  // Columns of a Haar isometry stacked into `count` Kraus operators gives a
  // valid channel.
  const ComplexMatrix u = idt::random_unitary(d * count, rng);
  std::vector<ComplexMatrix> ks;
  for (int i = 0; i < count; ++i) {
    ComplexMatrix k(d, d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) k(a, b) = u(a * count + i, b);
    ks.push_back(k);
  }
  return ks;
}

}  // namespace

TEST_CASE("identity channel Choi matrix and action") {
  const idt::Channel id = idt::identity_channel(3);
  id.validate();
  // J(id) = sum_ij |ii><jj|.
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(id.choi(i * 3 + i, j * 3 + j) == Complex(1.0, 0.0));
  CHECK(id.choi.trace().real() == doctest::Approx(3.0));

  std::mt19937_64 rng(101);
  const idt::DensityMatrix rho = idt::random_density(3, rng);
  CHECK((idt::apply_channel(id, rho.rho) - rho.rho).max_abs() < 1e-14);
}

TEST_CASE("choi_from_kraus matches direct Kraus application") {
  std::mt19937_64 rng(102);
  for (int trial = 0; trial < 10; ++trial) {
    const int d = 2 + trial % 3;
    const auto kraus = random_kraus_set(d, 3, rng);
    const idt::Channel t = idt::channel_from_kraus(kraus);
    t.validate();
    const idt::DensityMatrix rho = idt::random_density(d, rng);
    const ComplexMatrix via_choi = idt::apply_channel(t, rho.rho);
    const ComplexMatrix direct = kraus_apply(kraus, rho.rho);
    CHECK((via_choi - direct).max_abs() < 1e-10);
  }
}

TEST_CASE("dephasing and depolarizing channels") {
  const idt::Channel deph = idt::dephasing_channel(3);
  deph.validate();
  std::mt19937_64 rng(103);
  const idt::DensityMatrix rho = idt::random_density(3, rng);
  const ComplexMatrix out = idt::apply_channel(deph, rho.rho);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j)
        CHECK(std::abs(out(i, j) - rho.rho(i, j)) < 1e-14);
      else
        CHECK(std::abs(out(i, j)) < 1e-14);
    }

  const idt::Channel dep = idt::depolarizing_channel(4);
  dep.validate();
  const idt::DensityMatrix rho4 = idt::random_density(4, rng);
  const ComplexMatrix mixed = idt::apply_channel(dep, rho4.rho);
  CHECK((mixed - (1.0 / 4.0) * ComplexMatrix::identity(4)).max_abs() < 1e-14);
}

TEST_CASE("channel composition is consistent with sequential application") {
  std::mt19937_64 rng(104);
  const idt::Channel t = idt::channel_from_kraus(random_kraus_set(3, 2, rng));
  const idt::Channel s = idt::channel_from_kraus(random_kraus_set(3, 4, rng));
  const idt::Channel ts = idt::channel_compose(t, s);
  ts.validate();
  const idt::DensityMatrix rho = idt::random_density(3, rng);
  const ComplexMatrix seq = idt::apply_channel(t, idt::apply_channel(s, rho.rho));
  const ComplexMatrix comp = idt::apply_channel(ts, rho.rho);
  CHECK((seq - comp).max_abs() < 1e-12);
}

TEST_CASE("conjugate_channel sandwiches the action with the unitary") {
  std::mt19937_64 rng(105);
  const idt::Channel t = idt::channel_from_kraus(random_kraus_set(3, 3, rng));
  const ComplexMatrix u = idt::random_unitary(3, rng);
  const idt::Channel tc = idt::conjugate_channel(t, u);
  tc.validate();
  const idt::DensityMatrix rho = idt::random_density(3, rng);
  const ComplexMatrix direct =
      u * idt::apply_channel(t, u.adjoint() * rho.rho * u) * u.adjoint();
  CHECK((idt::apply_channel(tc, rho.rho) - direct).max_abs() < 1e-12);
}

TEST_CASE("instrument_povm implements the dual pairing") {
  std::mt19937_64 rng(106);
  const idt::Instrument inst = idt::random_instrument(3, 4, rng);
  inst.validate();
  const idt::Povm e = idt::instrument_povm(inst);
  e.validate();
  for (int trial = 0; trial < 5; ++trial) {
    const idt::DensityMatrix rho = idt::random_density(3, rng);
    for (int i = 0; i < inst.outcomes(); ++i) {
      idt::Channel branch{3, 3, inst.branch_choi[i]};
      const double p_channel = idt::apply_channel(branch, rho.rho).trace().real();
      const double p_povm = (e.effects[i] * rho.rho).trace().real();
      CHECK(p_channel == doctest::Approx(p_povm).epsilon(1e-10));
    }
  }
}

TEST_CASE("lueders_instrument reproduces its target POVM") {
  std::mt19937_64 rng(107);
  const idt::Povm e = idt::random_povm(3, 5, rng);
  const idt::Instrument lue = idt::lueders_instrument(e);
  lue.validate();
  const idt::Povm back = idt::instrument_povm(lue);
  for (int i = 0; i < e.outcomes(); ++i)
    CHECK((back.effects[i] - e.effects[i]).max_abs() < 1e-10);
}

TEST_CASE("fidelity basics") {
  std::mt19937_64 rng(108);
  const idt::DensityMatrix rho = idt::random_density(3, rng);
  CHECK(idt::fidelity(rho, rho) == doctest::Approx(1.0).epsilon(1e-8));

  idt::DensityMatrix zero{2, ComplexMatrix(2, 2)}, one{2, ComplexMatrix(2, 2)};
  zero.rho(0, 0) = 1.0;
  one.rho(1, 1) = 1.0;
  CHECK(idt::fidelity(zero, one) == doctest::Approx(0.0).epsilon(1e-10));

  idt::DensityMatrix mixed{2, ComplexMatrix(2, 2)};
  mixed.rho(0, 0) = 0.5;
  mixed.rho(1, 1) = 0.5;
  CHECK(idt::fidelity(zero, mixed) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-10));
}

TEST_CASE("random_unitary is unitary and mixes states to the uniform average") {
  std::mt19937_64 rng(109);
  const ComplexMatrix u = idt::random_unitary(6, rng);
  CHECK((u.adjoint() * u - ComplexMatrix::identity(6)).max_abs() < 1e-10);

  // First-moment twirl: the sample mean of U rho U^* approaches 1/d.
  const int d = 3, samples = 2000;
  const idt::DensityMatrix rho = idt::random_density(d, rng);
  ComplexMatrix avg(d, d);
  for (int s = 0; s < samples; ++s) {
    const ComplexMatrix v = idt::random_unitary(d, rng);
    avg += v * rho.rho * v.adjoint();
  }
  avg *= Complex(1.0 / samples, 0.0);
  CHECK((avg - (1.0 / d) * ComplexMatrix::identity(d)).max_abs() < 5e-2);
}

TEST_CASE("random samplers produce valid objects") {
  std::mt19937_64 rng(110);
  for (int d = 2; d <= 4; ++d) {
    idt::random_density(d, rng).validate();
    idt::random_instrument(d, d, rng).validate();
    idt::random_povm(d, d + 1, rng).validate();
    const ComplexMatrix psi = idt::random_pure(d, rng);
    double nrm = 0.0;
    for (int r = 0; r < d; ++r) nrm += std::norm(psi(r, 0));
    CHECK(nrm == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("validation rejects broken objects with named invariants") {
  idt::DensityMatrix bad_trace{2, ComplexMatrix::identity(2)};
  CHECK_THROWS_WITH_AS(bad_trace.validate(),
                       doctest::Contains("trace"), std::invalid_argument);

  idt::Povm bad_sum{2, {ComplexMatrix::identity(2), ComplexMatrix::identity(2)}};
  CHECK_THROWS_WITH_AS(bad_sum.validate(),
                       doctest::Contains("identity"), std::invalid_argument);

  // A non-CP "channel": swap the sign of the identity Choi.
  idt::Channel bad_cp = idt::identity_channel(2);
  bad_cp.choi *= Complex(-1.0, 0.0);
  CHECK_THROWS_AS(bad_cp.validate(), std::invalid_argument);

  // Trace-increasing instrument.
  std::mt19937_64 rng(111);
  idt::Instrument bad_tp = idt::random_instrument(2, 2, rng);
  bad_tp.branch_choi.push_back(bad_tp.branch_choi.front());
  CHECK_THROWS_WITH_AS(bad_tp.validate(),
                       doctest::Contains("trace preservation"), std::invalid_argument);
}

TEST_CASE("json round trips preserve objects and validate on load") {
  std::mt19937_64 rng(112);

  const idt::Povm e = idt::random_povm(3, 4, rng);
  const idt::Povm e2 = idt::povm_from_json(idt::povm_to_json(e));
  REQUIRE(e2.outcomes() == e.outcomes());
  for (int i = 0; i < e.outcomes(); ++i)
    CHECK((e2.effects[i] - e.effects[i]).max_abs() < 1e-15);

  const idt::Instrument inst = idt::random_instrument(2, 3, rng);
  const idt::Instrument inst2 = idt::instrument_from_json(idt::instrument_to_json(inst));
  REQUIRE(inst2.outcomes() == inst.outcomes());
  for (int i = 0; i < inst.outcomes(); ++i)
    CHECK((inst2.branch_choi[i] - inst.branch_choi[i]).max_abs() < 1e-15);

  const idt::DensityMatrix rho = idt::random_density(4, rng);
  const idt::DensityMatrix rho2 = idt::density_from_json(idt::density_to_json(rho));
  CHECK((rho2.rho - rho.rho).max_abs() < 1e-15);
}

TEST_CASE("json parser rejects malformed input") {
  CHECK_THROWS_AS((void)idt::povm_from_json("not json at all"), std::invalid_argument);
  CHECK_THROWS_AS((void)idt::povm_from_json("{\"kind\":\"povm\",\"dim\":2}"),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)idt::povm_from_json(
                      "{\"kind\":\"density\",\"dim\":2,\"outcomes\":1,\"effects\":[]}"),
                  std::invalid_argument);
  // Well-formed JSON that fails POVM validation (effects do not sum to 1).
  const std::string bad =
      "{\"kind\":\"povm\",\"dim\":1,\"outcomes\":1,\"effects\":[[[[0.5,0.0]]]]}";
  CHECK_THROWS_AS((void)idt::povm_from_json(bad), std::invalid_argument);
}
