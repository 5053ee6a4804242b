#include "idt/measures.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "idt/parallel.hpp"
#include "idt/sdp_programs.hpp"

namespace idt {

namespace {

constexpr std::uint64_t kRestartStride = 0x9e3779b97f4a7c15ULL;

void require_square(const Channel& t, const char* who) {
  if (t.din != t.dout || t.din <= 0)
    throw std::invalid_argument(std::string(who) + ": channel must map a space to itself");
}

void require_restarts(int restarts, const char* who) {
  if (restarts <= 0)
    throw std::invalid_argument(std::string(who) + ": restart count must be positive");
}

void require_same_shape(const Povm& e, const Povm& f, const char* who) {
  if (e.dim != f.dim || e.outcomes() != f.outcomes())
    throw std::invalid_argument(std::string(who) + ": POVMs must share dimension and outcomes");
}

// Adjoint action T*(a) = (tr_1[(a (x) 1) J])^T, the map satisfying
// tr[a T(x)] = tr[T*(a) x].
ComplexMatrix adjoint_apply(const Channel& t, const ComplexMatrix& a) {
  const ComplexMatrix lifted = kron(a, ComplexMatrix::identity(t.din));
  return partial_trace(lifted * t.choi, t.dout, t.din, 1).transpose();
}

std::vector<Complex> to_witness(const ComplexMatrix& psi) {
  std::vector<Complex> w(static_cast<size_t>(psi.rows()));
  for (int i = 0; i < psi.rows(); ++i) w[static_cast<size_t>(i)] = psi(i, 0);
  return w;
}

ComplexMatrix pure_projector(const ComplexMatrix& psi) {
  return psi * psi.adjoint();
}

// State overlap q(psi) = <psi|T(|psi><psi|)|psi>, evaluated through the Choi
// matrix as <psi (x) conj(psi)| J |psi (x) conj(psi)>.
double overlap_value(const Channel& t, const ComplexMatrix& psi) {
  const int d = t.din;
  ComplexMatrix v(d * d, 1);
  for (int a = 0; a < d; ++a)
    for (int c = 0; c < d; ++c) v(a * d + c, 0) = psi(a, 0) * std::conj(psi(c, 0));
  return (v.adjoint() * (t.choi * v))(0, 0).real();
}

// Euclidean gradient of overlap_value with respect to conj(psi). The state
// enters both through the channel input and the outer bra-ket, so the
// channel and its adjoint each contribute one term.
ComplexMatrix overlap_grad(const Channel& t, const ComplexMatrix& psi) {
  const ComplexMatrix rho = pure_projector(psi);
  return (apply_channel(t, rho) + adjoint_apply(t, rho)) * psi;
}

struct SphereResult {
  double value = 0.0;
  ComplexMatrix psi;
};

ComplexMatrix normalized(ComplexMatrix psi) {
  const double n = psi.frobenius_norm();
  if (n > 0.0) psi *= Complex(1.0 / n, 0.0);
  return psi;
}

// Projected gradient descent for min_psi value(psi) over unit vectors.
// Steps follow the Riemannian gradient (the Euclidean one projected onto
// the tangent space), with Armijo halving and retraction by normalization.
template <typename ValueFn, typename GradFn>
SphereResult minimize_sphere(int d, const ValueFn& value, const GradFn& grad, Rng& rng) {
  ComplexMatrix psi = random_pure(d, rng);
  double f0 = value(psi);
  for (int iter = 0; iter < 400; ++iter) {
    const ComplexMatrix g = grad(psi);
    const Complex overlap = (psi.adjoint() * g)(0, 0);
    ComplexMatrix tangent = g;
    tangent -= ComplexMatrix(psi) *= overlap;
    const double gn = tangent.frobenius_norm();
    if (gn < 1e-9) break;

    bool moved = false;
    for (double step = 1.0; step > 1e-16; step *= 0.5) {
      ComplexMatrix trial = psi;
      trial -= ComplexMatrix(tangent) *= Complex(step, 0.0);
      trial = normalized(trial);
      const double f = value(trial);
      // A sufficient-decrease constant this large rejects overshooting
      // steps that barely descend; anything below 1/2 still accepts the
      // exact minimizer of the local quadratic model.
      if (f <= f0 - 0.3 * step * gn * gn) {
        psi = std::move(trial);
        f0 = f;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  return {f0, psi};
}

// Best of `restarts` independent local searches, reduced in index order so
// the outcome does not depend on thread scheduling.
template <typename ValueFn, typename GradFn>
SphereResult restarted_minimum(int d, const ValueFn& value, const GradFn& grad, int restarts,
                               std::uint64_t seed, std::uint64_t index_offset = 0) {
  std::vector<SphereResult> runs = parallel_map(restarts, [&](int i) {
    Rng rng(seed ^ (kRestartStride * (static_cast<std::uint64_t>(i) + index_offset + 1)));
    return minimize_sphere(d, value, grad, rng);
  });
  SphereResult best = std::move(runs.front());
  for (size_t i = 1; i < runs.size(); ++i)
    if (runs[i].value < best.value) best = std::move(runs[i]);
  return best;
}

}  // namespace

MeasureValue delta_tv(const Povm& e, const Povm& f) {
  require_same_shape(e, f, "delta_tv");
  const int m = e.outcomes();
  if (m > 24)
    throw std::invalid_argument(
        "delta_tv: sign enumeration scans 2^(m-1) patterns and refuses m > 24");
  const int d = e.dim;

  std::vector<ComplexMatrix> deltas(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i)
    deltas[static_cast<size_t>(i)] = (f.effects[static_cast<size_t>(i)] -
                                      e.effects[static_cast<size_t>(i)])
                                         .hermitized();

  // The differences sum to zero, so negating a sign vector mirrors the
  // spectrum and it suffices to scan the half-cube with the first sign
  // fixed. Patterns are visited in Gray-code order with rank-limited
  // updates, rebuilding the sum periodically to shed rounding drift.
  std::vector<int> signs(static_cast<size_t>(m), 1);
  ComplexMatrix sum(d, d);
  for (const ComplexMatrix& delta : deltas) sum += delta;

  double best_norm = -1.0;
  std::vector<int> best_signs;
  bool best_negated = false;
  const std::uint64_t patterns = m >= 1 ? (1ULL << (m - 1)) : 1ULL;
  for (std::uint64_t k = 0;; ++k) {
    const std::vector<double> eigs = herm_eigenvalues(sum);
    const double hi = eigs.front();
    const double lo = eigs.back();
    const double nrm = std::max(hi, -lo);
    if (nrm > best_norm + 1e-15) {
      best_norm = nrm;
      best_signs = signs;
      best_negated = -lo > hi;
    }
    if (k + 1 >= patterns) break;

    const int flip = std::countr_zero(k + 1) + 1;
    ComplexMatrix bump = deltas[static_cast<size_t>(flip)];
    bump *= Complex(-2.0 * signs[static_cast<size_t>(flip)], 0.0);
    sum += bump;
    signs[static_cast<size_t>(flip)] = -signs[static_cast<size_t>(flip)];
    if ((k & 0xfffULL) == 0xfffULL) {
      sum = ComplexMatrix(d, d);
      for (int i = 0; i < m; ++i) {
        ComplexMatrix term = deltas[static_cast<size_t>(i)];
        term *= Complex(signs[static_cast<size_t>(i)], 0.0);
        sum += term;
      }
    }
  }

  if (best_negated)
    for (int& s : best_signs) s = -s;
  ComplexMatrix winner(d, d);
  for (int i = 0; i < m; ++i) {
    ComplexMatrix term = deltas[static_cast<size_t>(i)];
    term *= Complex(best_signs[static_cast<size_t>(i)], 0.0);
    winner += term;
  }
  const HermEig eig = herm_eig(winner);

  MeasureValue out;
  out.method = MeasureMethod::kSignEnumeration;
  out.value = 0.5 * std::max(0.0, eig.values.front());
  out.signs = best_signs;
  ComplexMatrix top(d, 1);
  for (int r = 0; r < d; ++r) top(r, 0) = eig.vectors(r, 0);
  out.witness = to_witness(top);
  return out;
}

MeasureValue delta_linf(const Povm& e, const Povm& f) {
  require_same_shape(e, f, "delta_linf");
  const int d = e.dim;
  MeasureValue out;
  out.method = MeasureMethod::kExact;
  ComplexMatrix winner(d, d);
  for (int i = 0; i < e.outcomes(); ++i) {
    const ComplexMatrix diff = (f.effects[static_cast<size_t>(i)] -
                                e.effects[static_cast<size_t>(i)])
                                   .hermitized();
    const double nrm = spectral_norm(diff);
    if (nrm > out.value) {
      out.value = nrm;
      winner = diff;
    }
  }
  const HermEig eig = herm_eig(winner);
  const int pick = eig.values.front() >= -eig.values.back() ? 0 : d - 1;
  ComplexMatrix top(d, 1);
  for (int r = 0; r < d; ++r) top(r, 0) = eig.vectors(r, pick);
  out.witness = to_witness(top);
  return out;
}

MeasureValue worst_fidelity(const Channel& t, int restarts, std::uint64_t seed) {
  require_square(t, "worst_fidelity");
  require_restarts(restarts, "worst_fidelity");
  const auto value = [&](const ComplexMatrix& psi) { return overlap_value(t, psi); };
  const auto grad = [&](const ComplexMatrix& psi) { return overlap_grad(t, psi); };
  const SphereResult best = restarted_minimum(t.din, value, grad, restarts, seed);

  MeasureValue out;
  out.method = MeasureMethod::kHeuristicRestarts;
  out.value = best.value;
  out.witness = to_witness(best.psi);
  out.restarts_used = restarts;
  return out;
}

MeasureValue avg_fidelity(const Channel& t) {
  require_square(t, "avg_fidelity");
  const int d = t.din;
  Complex fid_ent = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) fid_ent += t.choi(i * d + i, j * d + j);
  const double fe = fid_ent.real() / (d * d);

  MeasureValue out;
  out.method = MeasureMethod::kExact;
  out.value = (d * fe + 1.0) / (d + 1.0);
  return out;
}

MeasureValue trace_norm_disturbance(const Channel& t, int restarts, std::uint64_t seed) {
  require_square(t, "trace_norm_disturbance");
  require_restarts(restarts, "trace_norm_disturbance");

  const auto deviation = [&](const ComplexMatrix& psi) {
    const ComplexMatrix rho = pure_projector(psi);
    return (rho - apply_channel(t, rho)).hermitized();
  };
  // Maximized through its negation. The gradient linearizes the trace norm
  // at the spectral sign of the deviation, a subgradient step that is exact
  // wherever the deviation has no zero eigenvalues.
  const auto value = [&](const ComplexMatrix& psi) { return -0.5 * trace_norm(deviation(psi)); };
  const auto grad = [&](const ComplexMatrix& psi) {
    const HermEig eig = herm_eig(deviation(psi));
    const int d = t.din;
    ComplexMatrix sign(d, d);
    for (int k = 0; k < d; ++k) {
      const double s = eig.values[static_cast<size_t>(k)];
      if (s == 0.0) continue;
      ComplexMatrix v(d, 1);
      for (int r = 0; r < d; ++r) v(r, 0) = eig.vectors(r, k);
      ComplexMatrix proj = v * v.adjoint();
      proj *= Complex(s > 0.0 ? 1.0 : -1.0, 0.0);
      sign += proj;
    }
    return ComplexMatrix((sign - adjoint_apply(t, sign)) * psi) *= Complex(-0.5, 0.0);
  };
  const SphereResult best = restarted_minimum(t.din, value, grad, restarts, seed);

  MeasureValue out;
  out.method = MeasureMethod::kHeuristicRestarts;
  out.value = std::max(0.0, -best.value);
  out.witness = to_witness(best.psi);
  out.restarts_used = restarts;
  return out;
}

MeasureValue hat_delta(const Channel& t, int restarts, std::uint64_t seed) {
  require_square(t, "hat_delta");
  require_restarts(restarts, "hat_delta");
  const auto value = [&](const ComplexMatrix& psi) { return overlap_value(t, psi); };
  const auto grad = [&](const ComplexMatrix& psi) { return overlap_grad(t, psi); };
  const auto neg_value = [&](const ComplexMatrix& psi) { return -overlap_value(t, psi); };
  const auto neg_grad = [&](const ComplexMatrix& psi) {
    return ComplexMatrix(overlap_grad(t, psi)) *= Complex(-1.0, 0.0);
  };
  // The two batches draw disjoint restart indices from the same seed.
  const SphereResult low = restarted_minimum(t.din, value, grad, restarts, seed);
  const SphereResult high = restarted_minimum(t.din, neg_value, neg_grad, restarts, seed,
                                              static_cast<std::uint64_t>(restarts));

  MeasureValue out;
  out.method = MeasureMethod::kHeuristicRestarts;
  out.value = std::max(0.0, -high.value - low.value);
  out.witness = to_witness(low.psi);
  out.restarts_used = restarts;
  return out;
}

MeasureValue diamond_distance(const Channel& t, const SdpOptions& options) {
  require_square(t, "diamond_distance");
  const ComplexMatrix diff = t.choi - identity_channel(t.din).choi;
  const LmiSolution sol = diamond_norm_lmi(diff, t.dout, t.din, options);
  if (sol.status != SdpStatus::kOptimal) {
    std::ostringstream msg;
    msg << "diamond_distance: solver did not converge (duality gap " << sol.gap << ")";
    throw std::runtime_error(msg.str());
  }

  MeasureValue out;
  out.method = MeasureMethod::kSdp;
  out.value = std::max(0.0, sol.value);
  return out;
}

}  // namespace idt
