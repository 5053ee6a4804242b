#include "idt/verify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <sstream>
#include <stdexcept>

#include "idt/curves.hpp"
#include "idt/family.hpp"
#include "idt/linalg.hpp"
#include "idt/measures.hpp"
#include "idt/quantum.hpp"
#include "idt/sdp_programs.hpp"
#include "idt/targets.hpp"

namespace idt {

namespace {

constexpr int kRestarts = 60;

void record(SuiteResult& out, const std::string& name, bool ok, double observed,
            double bound) {
  std::ostringstream detail;
  detail.precision(10);
  detail << "observed " << observed << ", bound " << bound;
  out.properties.push_back({name, ok, detail.str()});
}

// Worst observed violation of v <= 0 over a batch, recorded as one property.
struct WorstCase {
  double value = -1e300;
  void feed(double v) { value = std::max(value, v); }
  bool within(double slack) const { return value <= slack; }
};

Channel twirled(const Channel& t) { return symmetric_channel(twirl_channel(t)); }

SuiteResult suite_twirl(std::uint64_t seed) {
  SuiteResult out{"twirl", {}, };
  Rng rng(seed ^ 0x7477696cULL);

  // Twirling a symmetric channel is the identity on parameters.
  WorstCase idem;
  for (int d : {2, 3, 4}) {
    const SymmetricParams p = twirl_channel(instrument_channel(random_instrument(d, d, rng)));
    const SymmetricParams q = twirl_channel(symmetric_channel(p));
    idem.feed(std::abs(q.alpha - p.alpha));
    idem.feed(std::abs(q.beta - p.beta));
    idem.feed(std::abs(q.gamma - p.gamma));
  }
  record(out, "twirl-idempotent-on-symmetric-channels", idem.within(1e-12), idem.value,
         1e-12);

  // Deviation from the basis readout never grows under twirling.
  WorstCase dev;
  for (int trial = 0; trial < 30; ++trial) {
    const int d = trial < 20 ? 2 : 3;
    const Povm e = random_povm(d, d, rng);
    const Povm basis = basis_target(d);
    const Povm sym = symmetric_povm(d, twirl_povm(e));
    dev.feed(delta_tv(sym, basis).value - delta_tv(e, basis).value);
    dev.feed(delta_linf(sym, basis).value - delta_linf(e, basis).value);
  }
  record(out, "twirl-never-increases-deviation", dev.within(1e-9), dev.value, 1e-9);

  // Disturbance measures of a twirled marginal never exceed the original's.
  WorstCase fid, avg, tra;
  WorstCase dia;
  for (int trial = 0; trial < 4; ++trial) {
    const int d = trial < 3 ? 2 : 3;
    const Channel t = instrument_channel(random_instrument(d, d, rng));
    const Channel s = twirled(t);
    fid.feed(worst_fidelity(t, kRestarts).value - worst_fidelity(s, kRestarts).value);
    avg.feed(avg_fidelity(t).value - avg_fidelity(s).value);
    tra.feed(trace_norm_disturbance(s, kRestarts).value -
             trace_norm_disturbance(t, kRestarts).value);
    if (d == 2 && trial < 2)
      dia.feed(diamond_distance(s).value - diamond_distance(t).value);
  }
  record(out, "twirl-never-decreases-worst-fidelity", fid.within(2e-4), fid.value, 2e-4);
  record(out, "twirl-never-decreases-avg-fidelity", avg.within(1e-10), avg.value, 1e-10);
  record(out, "twirl-never-increases-trace-disturbance", tra.within(2e-4), tra.value,
         2e-4);
  record(out, "twirl-never-increases-diamond-disturbance", dia.within(1e-7), dia.value,
         1e-7);
  return out;
}

SuiteResult suite_fuchs(std::uint64_t seed) {
  SuiteResult out{"fuchs-van-de-graaf", {}};
  Rng rng(seed ^ 0x66766447ULL);

  WorstCase lower, upper;
  for (int trial = 0; trial < 50; ++trial) {
    const int d = trial % 2 == 0 ? 2 : 3;
    Channel t;
    if (trial % 3 == 0) {
      t = instrument_channel(random_instrument(d, d, rng));
    } else if (trial % 3 == 1) {
      t = conjugate_channel(dephasing_channel(d), random_unitary(d, rng));
    } else {
      SymmetricParams p = twirl_channel(instrument_channel(random_instrument(d, d, rng)));
      t = symmetric_channel(p);
    }
    const double f = worst_fidelity(t, 40).value;
    const double tv = trace_norm_disturbance(t, 40).value;
    lower.feed((1.0 - f) - tv);
    upper.feed(tv - std::sqrt(1.0 - f));
  }
  record(out, "one-minus-fidelity-below-tv-disturbance", lower.within(2e-4), lower.value,
         2e-4);
  record(out, "tv-disturbance-below-root-infidelity", upper.within(2e-4), upper.value,
         2e-4);

  // Symmetric channels attain the lower branch with equality.
  WorstCase eq;
  for (double mu : {0.2, 0.4}) {
    for (int d : {2, 3}) {
      const double nu = -mu + std::sqrt(1.0 - (d - 1) * mu * mu);
      const Channel t =
          instrument_channel(family_instrument(FamilyParams{d, 0.0, mu, nu}));
      eq.feed(std::abs(trace_norm_disturbance(t, kRestarts).value -
                       (1.0 - worst_fidelity(t, kRestarts).value)));
    }
  }
  record(out, "symmetric-channels-attain-equality", eq.within(2e-4), eq.value, 2e-4);
  return out;
}

SuiteResult suite_corz(std::uint64_t seed) {
  SuiteResult out{"corz", {}};
  (void)seed;
  const Povm basis = basis_target(2);

  // Erase-and-prepare point: zero deviation and zero span of the overlap.
  const Instrument erase = family_instrument(FamilyParams{2, 0.5, 0.0, 1.0});
  const Channel erased = instrument_channel(erase);
  const double dev0 = delta_tv(instrument_povm(erase), basis).value;
  record(out, "erase-point-has-zero-deviation", dev0 <= 1e-12, dev0, 1e-12);
  const double depol_gap =
      (erased.choi - depolarizing_channel(2).choi).max_abs();
  record(out, "erase-point-marginal-is-depolarizing", depol_gap <= 1e-12, depol_gap,
         1e-12);
  const double hat0 = hat_delta(erased, 80).value;
  record(out, "erase-point-has-zero-hat-disturbance", hat0 <= 2e-4, hat0, 2e-4);

  // The only undisturbed-slice device with zero deviation is dephasing, and
  // its overlap span stays macroscopically large.
  const Instrument keep = family_instrument(achiever_from_delta(2, 0.0));
  const Channel kept = instrument_channel(keep);
  const double devk = delta_tv(instrument_povm(keep), basis).value;
  record(out, "dephasing-point-has-zero-deviation", devk <= 1e-12, devk, 1e-12);
  const double deph_gap = (kept.choi - dephasing_channel(2).choi).max_abs();
  record(out, "dephasing-point-marginal-is-dephasing", deph_gap <= 1e-12, deph_gap,
         1e-12);
  const double hatk = hat_delta(kept, 80).value;
  record(out, "dephasing-point-hat-disturbance-stays-large", hatk >= 0.49, hatk, 0.49);
  return out;
}

SuiteResult suite_axioms(std::uint64_t seed) {
  SuiteResult out{"axioms", {}};
  Rng rng(seed ^ 0x6178696fULL);

  // Convexity in the first argument, exact deviation measures.
  WorstCase cvx;
  for (int trial = 0; trial < 10; ++trial) {
    const int d = trial % 2 == 0 ? 2 : 3;
    const int m = d + trial % 2;
    const Povm e = random_povm(d, m, rng);
    const Povm f = random_povm(d, m, rng);
    const Povm g = random_povm(d, m, rng);
    for (double lam : {0.25, 0.5, 0.75}) {
      Povm mix;
      mix.dim = d;
      for (int i = 0; i < m; ++i) {
        ComplexMatrix a = e.effects[i];
        a *= Complex(lam);
        ComplexMatrix b = f.effects[i];
        b *= Complex(1.0 - lam);
        mix.effects.push_back(a + b);
      }
      cvx.feed(delta_tv(mix, g).value -
               (lam * delta_tv(e, g).value + (1.0 - lam) * delta_tv(f, g).value));
      cvx.feed(delta_linf(mix, g).value -
               (lam * delta_linf(e, g).value + (1.0 - lam) * delta_linf(f, g).value));
    }
  }
  record(out, "deviation-measures-are-convex", cvx.within(1e-6), cvx.value, 1e-6);

  // Convexity of disturbance measures over channel mixtures.
  WorstCase ccvx;
  for (int trial = 0; trial < 4; ++trial) {
    const int d = trial % 2 == 0 ? 2 : 3;
    const Channel a = instrument_channel(random_instrument(d, d, rng));
    const Channel b = conjugate_channel(dephasing_channel(d), random_unitary(d, rng));
    for (double lam : {0.25, 0.5, 0.75}) {
      Channel mix = a;
      ComplexMatrix choi_a = a.choi;
      choi_a *= Complex(lam);
      ComplexMatrix choi_b = b.choi;
      choi_b *= Complex(1.0 - lam);
      mix.choi = choi_a + choi_b;
      ccvx.feed(trace_norm_disturbance(mix, kRestarts).value -
                (lam * trace_norm_disturbance(a, kRestarts).value +
                 (1.0 - lam) * trace_norm_disturbance(b, kRestarts).value));
      ccvx.feed((1.0 - avg_fidelity(mix).value) -
                (lam * (1.0 - avg_fidelity(a).value) +
                 (1.0 - lam) * (1.0 - avg_fidelity(b).value)));
    }
  }
  record(out, "disturbance-measures-are-convex", ccvx.within(1e-6), ccvx.value, 1e-6);

  // Basis independence: conjugating a channel by a unitary on both sides
  // leaves every disturbance measure unchanged.
  WorstCase basis_exact, basis_heur, basis_dia;
  for (int trial = 0; trial < 5; ++trial) {
    const int d = trial < 3 ? 2 : 3;
    const Channel t = instrument_channel(random_instrument(d, d, rng));
    const Channel s = conjugate_channel(t, random_unitary(d, rng));
    basis_exact.feed(std::abs(avg_fidelity(t).value - avg_fidelity(s).value));
    if (trial < 2) {
      basis_heur.feed(
          std::abs(worst_fidelity(t, kRestarts).value - worst_fidelity(s, kRestarts).value));
      basis_heur.feed(std::abs(hat_delta(t, kRestarts).value - hat_delta(s, kRestarts).value));
      basis_dia.feed(std::abs(diamond_distance(t).value - diamond_distance(s).value));
    }
  }
  record(out, "avg-fidelity-is-basis-independent", basis_exact.within(1e-10),
         basis_exact.value, 1e-10);
  record(out, "heuristic-measures-are-basis-independent", basis_heur.within(2e-4),
         basis_heur.value, 2e-4);
  record(out, "diamond-disturbance-is-basis-independent", basis_dia.within(1e-7),
         basis_dia.value, 1e-7);

  // Outcome relabeling and diagonal-unitary conjugation leave the deviation
  // measures unchanged.
  WorstCase relabel;
  for (int trial = 0; trial < 5; ++trial) {
    const int d = 2 + trial % 2;
    const int m = d + 1;
    const Povm e = random_povm(d, m, rng);
    const Povm f = random_povm(d, m, rng);

    Povm ep, fp;
    ep.dim = fp.dim = d;
    for (int i = 0; i < m; ++i) {
      ep.effects.push_back(e.effects[(i + 1) % m]);
      fp.effects.push_back(f.effects[(i + 1) % m]);
    }
    relabel.feed(std::abs(delta_tv(ep, fp).value - delta_tv(e, f).value));
    relabel.feed(std::abs(delta_linf(ep, fp).value - delta_linf(e, f).value));

    ComplexMatrix u(d, d);
    for (int i = 0; i < d; ++i)
      u(i, i) = std::polar(1.0, 2.0 * (i + 1) * (trial + 1) / 7.0);
    Povm eu, fu;
    eu.dim = fu.dim = d;
    for (int i = 0; i < m; ++i) {
      eu.effects.push_back(u * e.effects[i] * u.adjoint());
      fu.effects.push_back(u * f.effects[i] * u.adjoint());
    }
    relabel.feed(std::abs(delta_tv(eu, fu).value - delta_tv(e, f).value));
    relabel.feed(std::abs(delta_linf(eu, fu).value - delta_linf(e, f).value));
  }
  record(out, "deviation-invariant-under-relabeling-and-phases", relabel.within(1e-9),
         relabel.value, 1e-9);

  // The sign-enumeration value dominates direct sampling over random states.
  WorstCase sampled;
  for (int trial = 0; trial < 3; ++trial) {
    const int d = 2 + trial % 2;
    const Povm e = random_povm(d, d + 1, rng);
    const Povm f = random_povm(d, d + 1, rng);
    const double enumerated = delta_tv(e, f).value;
    double best = 0.0;
    for (int s = 0; s < 2000; ++s) {
      const DensityMatrix rho = random_density(d, rng);
      double sum = 0.0;
      for (int i = 0; i < e.outcomes(); ++i)
        sum += std::abs(((e.effects[i] - f.effects[i]) * rho.rho).trace().real());
      best = std::max(best, 0.5 * sum);
    }
    sampled.feed(best - enumerated);
  }
  record(out, "sign-enumeration-dominates-state-sampling", sampled.within(1e-9),
         sampled.value, 1e-9);
  return out;
}

SuiteResult suite_family(std::uint64_t seed) {
  SuiteResult out{"family", {}};
  Rng rng(seed ^ 0x66616dULL);

  // Eigenvalue and parameter forms invert each other.
  WorstCase round;
  for (int d : {2, 3, 5}) {
    for (int trial = 0; trial < 4; ++trial) {
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      double a = unit(rng), b = unit(rng), c = unit(rng);
      const double total = (d * d - d) * a + b + (d - 1) * c;
      a /= total;
      b /= total;
      c /= total;
      const SymmetricParams p{d, d * d * a, b - c, d * (c - a)};
      const SymmetricParams q = twirl_channel(symmetric_channel(p));
      round.feed(std::abs(q.alpha - p.alpha));
      round.feed(std::abs(q.beta - p.beta));
      round.feed(std::abs(q.gamma - p.gamma));
    }
  }
  record(out, "parameter-forms-are-inverse", round.within(1e-12), round.value, 1e-12);

  // Marginals of family instruments expose the defining parameters.
  WorstCase expose;
  for (int d : {2, 3}) {
    for (double z : {0.0, 0.4, 0.9}) {
      for (double mu : {0.0, 0.3}) {
        const double nu = -mu + std::sqrt(1.0 - (d - 1) * mu * mu);
        const Instrument inst = family_instrument(FamilyParams{d, z, mu, nu});
        const SymmetricParams p = twirl_channel(instrument_channel(inst));
        expose.feed(std::abs(p.alpha - d * z / (d - 1)));
        expose.feed(std::abs(twirl_povm(instrument_povm(inst)) - d * (1.0 - z) * mu * mu));
      }
    }
  }
  record(out, "marginals-expose-family-parameters", expose.within(1e-10), expose.value,
         1e-10);

  // Achievers hit their designated deviation from the basis readout.
  WorstCase hit;
  for (int d : {2, 3}) {
    const Povm basis = basis_target(d);
    for (int i = 0; i <= 8; ++i) {
      const double delta = (1.0 - 1.0 / d) * i / 8.0;
      const Instrument inst = family_instrument(achiever_from_delta(d, delta));
      hit.feed(std::abs(delta_tv(instrument_povm(inst), basis).value - delta));
    }
  }
  record(out, "achievers-hit-designated-deviation", hit.within(1e-10), hit.value, 1e-10);

  // Undisturbed slice: diamond disturbance doubles the total-variation one.
  WorstCase chain;
  for (int d : {2, 3}) {
    for (double mu : {0.2, 0.45}) {
      const double nu = -mu + std::sqrt(1.0 - (d - 1) * mu * mu);
      const SymmetricParams p =
          twirl_channel(instrument_channel(family_instrument(FamilyParams{d, 0.0, mu, nu})));
      const SymMeasures sm = sym_measures(p);
      if (!sm.diamond) {
        chain.feed(1.0);
        continue;
      }
      chain.feed(std::abs(*sm.diamond - 2.0 * sm.tv_disturbance));
      chain.feed(std::abs(*sm.diamond - 2.0 * (1.0 - sm.worst_fidelity)));
    }
  }
  record(out, "undisturbed-slice-diamond-chain", chain.within(1e-12), chain.value, 1e-12);

  const Channel probe =
      instrument_channel(family_instrument(FamilyParams{2, 0.0, 0.35,
                                                        -0.35 + std::sqrt(1.0 - 0.35 * 0.35)}));
  const SymMeasures sm = sym_measures(twirl_channel(probe));
  const double sdp_gap =
      sm.diamond ? std::abs(diamond_distance(probe).value - *sm.diamond) : 1.0;
  record(out, "closed-form-diamond-matches-sdp", sdp_gap <= 1e-6, sdp_gap, 1e-6);
  (void)rng;
  return out;
}

SuiteResult suite_curves(std::uint64_t seed) {
  SuiteResult out{"curves", {}};
  (void)seed;

  bool endpoints = true;
  for (int m = 2; m <= 6; ++m) {
    endpoints = endpoints && curve_tv_diamond(m, 0.0) == (m - 1.0) / m;
    endpoints = endpoints && curve_tv_diamond(m, 2.0 - 2.0 / m) == 0.0;
  }
  record(out, "diamond-endpoints-are-exact", endpoints, endpoints ? 0.0 : 1.0, 0.0);

  const double mid = std::abs(curve_tv_diamond(2, 0.5) - 0.0669872981077807);
  record(out, "diamond-midpoint-value", mid <= 1e-12, mid, 1e-12);

  WorstCase cvx;
  for (int p : {2, 3, 5}) {
    const struct {
      double (*f)(int, double);
      double hi;
    } curves[] = {{curve_tv_fidelity, 1.0},
                  {curve_tv_avg_fidelity, 1.0},
                  {curve_tv_trace, 1.0},
                  {curve_tv_diamond, 2.0},
                  {min_diamond_for_tv, 1.0}};
    for (const auto& c : curves) {
      double prev2 = 0.0, prev1 = 0.0;
      for (int i = 0; i < 200; ++i) {
        const double y = c.f(p, c.hi * i / 199.0);
        if (i >= 2) cvx.feed(-(y - 2.0 * prev1 + prev2));
        prev2 = prev1;
        prev1 = y;
      }
    }
  }
  record(out, "curves-are-convex", cvx.within(1e-9), cvx.value, 1e-9);

  WorstCase chain;
  for (int d : {2, 3, 5}) {
    for (int i = 0; i <= 40; ++i) {
      const double delta = i / 40.0;
      chain.feed(std::abs(curve_tv_trace(d, delta) - curve_tv_fidelity(d, 1.0 - delta)));
      chain.feed(std::abs(curve_tv_diamond(d, 2.0 * delta) - curve_tv_trace(d, delta)));
    }
  }
  record(out, "substitution-chains-agree", chain.within(1e-15), chain.value, 1e-15);

  WorstCase inv;
  for (int m : {2, 3, 5}) {
    for (int i = 0; i <= 16; ++i) {
      const double lambda = (1.0 - 1.0 / m) * (0.05 + 0.9 * i / 16.0);
      inv.feed(std::abs(curve_tv_diamond(m, min_diamond_for_tv(m, lambda)) - lambda));
    }
  }
  record(out, "inversion-round-trips", inv.within(1e-11), inv.value, 1e-11);
  return out;
}

SuiteResult suite_solver(std::uint64_t seed) {
  SuiteResult out{"solver", {}};
  Rng rng(seed ^ 0x736f6cULL);

  WorstCase lam, tnorm, gap;
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 3 + trial % 4;
    ComplexMatrix h = random_density(n, rng).rho;
    h *= Complex(static_cast<double>(n));
    for (int i = 0; i < n; ++i) h(i, i) -= 0.5;
    const auto eigs = herm_eigenvalues(h.hermitized());

    const LmiSolution top = lambda_max_sdp(h.hermitized());
    lam.feed(std::abs(top.value - eigs.front()));
    gap.feed(top.gap);

    double sum = 0.0;
    for (double e : eigs) sum += std::abs(e);
    const LmiSolution tn = trace_norm_sdp(h.hermitized());
    tnorm.feed(std::abs(tn.value - sum));
    gap.feed(tn.gap);
  }
  record(out, "largest-eigenvalue-sdp-matches-oracle", lam.within(1e-7), lam.value, 1e-7);
  record(out, "trace-norm-sdp-matches-oracle", tnorm.within(1e-7), tnorm.value, 1e-7);
  record(out, "duality-gaps-stay-small", gap.within(1e-8), gap.value, 1e-8);

  const double id_dia = diamond_norm_choi(
      (identity_channel(2).choi - identity_channel(2).choi), 2, 2);
  record(out, "zero-map-has-zero-diamond-norm", std::abs(id_dia) <= 1e-9,
         std::abs(id_dia), 1e-9);

  const double depol_dia =
      diamond_norm_choi(depolarizing_channel(2).choi - identity_channel(2).choi, 2, 2);
  record(out, "depolarizing-diamond-distance", std::abs(depol_dia - 1.5) <= 1e-7,
         std::abs(depol_dia - 1.5), 1e-7);
  return out;
}

}  // namespace

bool SuiteResult::passed() const {
  for (const PropertyResult& p : properties)
    if (!p.passed) return false;
  return true;
}

std::vector<std::string> verify_suite_names() {
  return {"twirl", "fuchs-van-de-graaf", "corz", "axioms", "family", "curves", "solver"};
}

SuiteResult run_verify_suite(const std::string& name, std::uint64_t seed) {
  if (name == "twirl") return suite_twirl(seed);
  if (name == "fuchs-van-de-graaf") return suite_fuchs(seed);
  if (name == "corz") return suite_corz(seed);
  if (name == "axioms") return suite_axioms(seed);
  if (name == "family") return suite_family(seed);
  if (name == "curves") return suite_curves(seed);
  if (name == "solver") return suite_solver(seed);
  throw std::invalid_argument("run_verify_suite: unknown suite \"" + name + "\"");
}

std::vector<SuiteResult> run_verify(const std::string& name, std::uint64_t seed) {
  std::vector<SuiteResult> out;
  if (name == "all") {
    for (const std::string& suite : verify_suite_names())
      out.push_back(run_verify_suite(suite, seed));
  } else {
    out.push_back(run_verify_suite(name, seed));
  }
  return out;
}

}  // namespace idt
