#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "idt/linalg.hpp"
#include "idt/quantum.hpp"
#include "idt/sdp.hpp"
#include "idt/sdp_programs.hpp"

using idt::Complex;
using idt::ComplexMatrix;

namespace {

ComplexMatrix random_hermitian(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m(r, c) = Complex(gauss(rng), gauss(rng));
  return m.hermitized();
}

ComplexMatrix random_general(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m(r, c) = Complex(gauss(rng), gauss(rng));
  return m;
}

idt::Povm qubit_basis_povm() {
  ComplexMatrix e0(2, 2), e1(2, 2);
  e0(0, 0) = 1.0;
  e1(1, 1) = 1.0;
  return {2, {e0, e1}};
}

}  // namespace

TEST_CASE("lambda_max program reproduces the eigensolver") {
  std::mt19937_64 rng(501);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 7;
    const ComplexMatrix m = random_hermitian(n, rng);
    const idt::LmiSolution sol = idt::lambda_max_sdp(m);
    REQUIRE(sol.status == idt::SdpStatus::kOptimal);
    CHECK(sol.gap <= 1e-8);
    const double exact = idt::herm_eigenvalues(m).front();
    CHECK(std::abs(sol.value - exact) < 1e-7);
  }
}

TEST_CASE("trace_norm program reproduces the singular value sum") {
  std::mt19937_64 rng(502);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 2 + trial % 5;
    const ComplexMatrix m = trial % 2 == 0 ? random_hermitian(n, rng) : random_general(n, rng);
    const idt::LmiSolution sol = idt::trace_norm_sdp(m);
    REQUIRE(sol.status == idt::SdpStatus::kOptimal);
    CHECK(std::abs(sol.value - idt::trace_norm(m)) < 1e-7);
  }
}

TEST_CASE("realified solves agree with the hermitian path") {
  std::mt19937_64 rng(503);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 2 + trial % 4;
    const ComplexMatrix h = random_hermitian(n, rng);
    const idt::LmiSolution direct = idt::lambda_max_sdp(h);
    const idt::LmiSolution real = idt::lambda_max_sdp(h, {}, true);
    REQUIRE(real.status == idt::SdpStatus::kOptimal);
    CHECK(std::abs(direct.value - real.value) < 1e-7);

    const ComplexMatrix g = random_general(n, rng);
    const idt::LmiSolution tdirect = idt::trace_norm_sdp(g);
    const idt::LmiSolution treal = idt::trace_norm_sdp(g, {}, true);
    REQUIRE(treal.status == idt::SdpStatus::kOptimal);
    CHECK(std::abs(tdirect.value - treal.value) < 1e-7);
  }
}

TEST_CASE("derealify inverts the real embedding") {
  std::mt19937_64 rng(504);
  const int n = 5;
  const ComplexMatrix h = random_hermitian(n, rng);
  ComplexMatrix embedded(2 * n, 2 * n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      embedded(r, c) = h(r, c).real();
      embedded(n + r, n + c) = h(r, c).real();
      embedded(n + r, c) = h(r, c).imag();
      embedded(r, n + c) = -h(r, c).imag();
    }
  CHECK((idt::derealify_block(embedded) - h).max_abs() < 1e-14);
}

TEST_CASE("equalities posed as opposing inequalities converge") {
  // minimize t subject to t - x >= 0, t + x >= 0, x - 0.3 >= 0, 0.3 - x >= 0.
  // The paired band pins x = 0.3, so the optimum is t = 0.3.
  idt::LmiBuilder builder;
  const int b0 = builder.add_block(1);
  const int b1 = builder.add_block(1);
  const int b2 = builder.add_block(1);
  const int b3 = builder.add_block(1);
  const int t = builder.add_scalar(1.0);
  const int x = builder.add_scalar(0.0);
  builder.add_identity(t, b0, 1.0);
  builder.add_identity(x, b0, -1.0);
  builder.add_identity(t, b1, 1.0);
  builder.add_identity(x, b1, 1.0);
  builder.add_identity(x, b2, 1.0);
  ComplexMatrix bound(1, 1);
  bound(0, 0) = 0.3;
  builder.set_constant(b2, bound);
  builder.add_identity(x, b3, -1.0);
  ComplexMatrix neg(1, 1);
  neg(0, 0) = -0.3;
  builder.set_constant(b3, neg);
  const idt::LmiSolution sol = idt::solve_lmi(builder.build());
  CHECK(std::abs(sol.value - 0.3) < 1e-6);
  CHECK(std::abs(sol.y[1] - 0.3) < 1e-6);
}

TEST_CASE("an infeasible band is flagged") {
  // y - 1 >= 0 and -y >= 0 cannot hold together.
  idt::LmiBuilder builder;
  const int b0 = builder.add_block(1);
  const int b1 = builder.add_block(1);
  const int y = builder.add_scalar(1.0);
  builder.add_identity(y, b0, 1.0);
  ComplexMatrix one(1, 1);
  one(0, 0) = 1.0;
  builder.set_constant(b0, one);
  builder.add_identity(y, b1, -1.0);
  const idt::LmiSolution sol = idt::solve_lmi(builder.build());
  CHECK(sol.status != idt::SdpStatus::kOptimal);
}

TEST_CASE("sdpa dump is well formed and matches the problem shape") {
  std::mt19937_64 rng(505);
  const ComplexMatrix h = random_hermitian(3, rng);
  idt::LmiBuilder builder;
  const int block = builder.add_block(3);
  const int t = builder.add_scalar(1.0);
  builder.add_identity(t, block, 1.0);
  builder.set_constant(block, h);
  const idt::SdpProblem standard = idt::lmi_to_standard(builder.build());
  const std::string path = "sdpa_dump_test.dat-s";
  idt::write_sdpa_sparse(standard, path);

  std::ifstream in(path);
  REQUIRE(in.good());
  std::string line;
  while (std::getline(in, line) && !line.empty() && line.front() == '*') {
  }
  const int nvars = std::stoi(line);
  CHECK(nvars == 1);
  std::getline(in, line);
  const int nblocks = std::stoi(line);
  CHECK(nblocks == 1);
  std::getline(in, line);
  CHECK(std::stoi(line) == 6);  // realified block dimension
  std::getline(in, line);       // cost vector
  CHECK(!line.empty());
  int entry_lines = 0;
  int k, b, i, j;
  double v;
  while (in >> k >> b >> i >> j >> v) {
    CHECK(k >= 0);
    CHECK(k <= nvars);
    CHECK(b == 1);
    CHECK(i >= 1);
    CHECK(j >= i);
    CHECK(j <= 6);
    CHECK(std::isfinite(v));
    ++entry_lines;
  }
  CHECK(entry_lines > 6);
  std::remove(path.c_str());
}

TEST_CASE("diamond norm on reference channel pairs") {
  const idt::Channel id2 = idt::identity_channel(2);
  CHECK(idt::diamond_distance(id2, id2) < 1e-7);

  const idt::Channel deph = idt::dephasing_channel(2);
  CHECK(std::abs(idt::diamond_distance(id2, deph) - 1.0) < 1e-6);
  CHECK(std::abs(idt::diamond_distance(id2, deph, {}, true) - 1.0) < 1e-6);

  ComplexMatrix sz(2, 2);
  sz(0, 0) = 1.0;
  sz(1, 1) = -1.0;
  const idt::Channel zflip = idt::channel_from_kraus({sz});
  CHECK(std::abs(idt::diamond_distance(id2, zflip) - 2.0) < 1e-6);

  const idt::Channel depol = idt::depolarizing_channel(2);
  CHECK(std::abs(idt::diamond_distance(id2, depol) - 1.5) < 1e-6);
}

TEST_CASE("tradeoff dimensions follow the published shapes") {
  const idt::TradeoffDims d24 = idt::tradeoff_dims(2, 4);
  CHECK(d24.primal_dim == 56);
  CHECK(d24.dual_dim == 26);
  const idt::TradeoffDims d39 = idt::tradeoff_dims(3, 9);
  CHECK(d39.primal_dim == 183);
  CHECK(d39.dual_dim == 101);

  // The assembled program's blocks must add up to the primal side length,
  // and its variable count is 2 scalars plus (m+2) hermitian matrices.
  for (const auto& [d, m] : {std::pair{2, 2}, std::pair{2, 4}, std::pair{3, 3}}) {
    std::mt19937_64 rng(600 + d + m);
    const idt::Povm target = idt::random_povm(d, m, rng);
    const idt::LmiProblem lmi = idt::tradeoff_problem(target, 0.1);
    int total = 0;
    for (const int dim : lmi.block_dims) total += dim;
    CHECK(total == idt::tradeoff_dims(d, m).primal_dim);
    CHECK(static_cast<int>(lmi.cost.size()) == 2 + (m + 2) * d * d * d * d);
  }
}

TEST_CASE("tradeoff program on the qubit basis measurement") {
  const idt::Povm target = qubit_basis_povm();

  // Zero budget forces the measurement exactly; the cheapest instrument
  // still disturbs by 2 - 2/m = 1 in diamond norm.
  const idt::TradeoffResult tight = idt::tradeoff_sdp(target, 0.0);
  CHECK(std::abs(tight.value - 1.0) < 1e-5);
  tight.instrument.validate();
  const idt::Povm induced = idt::instrument_povm(tight.instrument);
  for (int i = 0; i < 2; ++i)
    CHECK((induced.effects[i] - target.effects[i]).max_abs() < 5e-4);

  // A budget of 1 - 1/m already admits a disturbance-free instrument.
  const idt::TradeoffResult loose = idt::tradeoff_sdp(target, 0.5);
  CHECK(loose.value < 1e-5);
  loose.instrument.validate();

  // Monotone in the budget.
  const idt::TradeoffResult mid1 = idt::tradeoff_sdp(target, 0.1);
  const idt::TradeoffResult mid2 = idt::tradeoff_sdp(target, 0.2);
  mid1.instrument.validate();
  CHECK(mid1.value >= mid2.value - 1e-6);
  CHECK(tight.value >= mid1.value - 1e-6);
}
