#include "idt/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace idt {

namespace {

using BlockMat = std::vector<ComplexMatrix>;

// A coefficient entry with its conjugate mirror already expanded, so the
// loops below never special-case the upper triangle.
struct FullEntry {
  int row = 0;
  int col = 0;
  Complex value;
};

// The nonzero entries of one constraint matrix within one block.
struct Footprint {
  int constraint = 0;
  std::vector<FullEntry> entries;
};

// The same sparse data indexed both by block (for the Schur complement
// assembly) and by constraint (for residuals and dot products).
struct ConstraintIndex {
  std::vector<std::vector<Footprint>> per_block;
  // per_constraint[k] lists (block, position in per_block[block]).
  std::vector<std::vector<std::pair<int, int>>> per_constraint;
};

ConstraintIndex index_constraints(const SdpProblem& p) {
  const int nblocks = static_cast<int>(p.block_dims.size());
  const int ncon = static_cast<int>(p.constraints.size());
  ConstraintIndex index;
  index.per_block.resize(nblocks);
  index.per_constraint.resize(ncon);
  std::vector<std::vector<FullEntry>> buckets(nblocks);
  for (int k = 0; k < ncon; ++k) {
    for (auto& bucket : buckets) bucket.clear();
    for (const SdpCoefficient& e : p.constraints[k].entries) {
      if (e.block < 0 || e.block >= nblocks)
        throw std::invalid_argument("sdp: coefficient block index out of range");
      if (e.row < 0 || e.col < e.row || e.col >= p.block_dims[e.block])
        throw std::invalid_argument("sdp: coefficient must lie on the upper triangle");
      if (e.row == e.col && std::abs(e.value.imag()) > 1e-15 * (1.0 + std::abs(e.value)))
        throw std::invalid_argument("sdp: diagonal coefficient must be real");
      buckets[e.block].push_back({e.row, e.col, e.value});
      if (e.row != e.col) buckets[e.block].push_back({e.col, e.row, std::conj(e.value)});
    }
    for (int b = 0; b < nblocks; ++b) {
      if (buckets[b].empty()) continue;
      index.per_constraint[k].push_back({b, static_cast<int>(index.per_block[b].size())});
      index.per_block[b].push_back({k, buckets[b]});
    }
  }
  return index;
}

// tr(A W) restricted to one block; W is a general dense matrix.
Complex dot_entries(const std::vector<FullEntry>& a, const ComplexMatrix& w) {
  Complex sum(0.0, 0.0);
  for (const FullEntry& e : a) sum += e.value * w(e.col, e.row);
  return sum;
}

// dst += coeff * A for the sparse A given by full entries.
void accumulate_entries(ComplexMatrix& dst, const std::vector<FullEntry>& a, double coeff) {
  for (const FullEntry& e : a) dst(e.row, e.col) += coeff * e.value;
}

// X A Sinv for sparse A: X A has one nonzero column per entry of A, so the
// product unrolls into rank-one updates, O(nnz * n^2) instead of O(n^3).
ComplexMatrix sandwich(const ComplexMatrix& x, const std::vector<FullEntry>& a,
                       const ComplexMatrix& sinv) {
  const int n = x.rows();
  ComplexMatrix w(n, n);
  for (const FullEntry& e : a) {
    const Complex* srow = sinv.data() + static_cast<size_t>(e.col) * n;
    for (int r = 0; r < n; ++r) {
      const Complex xv = e.value * x(r, e.row);
      if (xv.real() == 0.0 && xv.imag() == 0.0) continue;
      Complex* wrow = w.data() + static_cast<size_t>(r) * n;
      for (int c = 0; c < n; ++c) wrow[c] += xv * srow[c];
    }
  }
  return w;
}

// Re tr(a b); exact inner product when both arguments are hermitian.
double herm_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  Complex sum(0.0, 0.0);
  const int n = a.rows();
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) sum += a(r, c) * b(c, r);
  return sum.real();
}

// Plain dense Cholesky on a row-major real symmetric matrix; the Schur
// complement of the HKM system is real symmetric positive definite.
bool cholesky_real(std::vector<double>& a, int n) {
  for (int i = 0; i < n; ++i) {
    double* ai = a.data() + static_cast<size_t>(i) * n;
    for (int j = 0; j <= i; ++j) {
      const double* aj = a.data() + static_cast<size_t>(j) * n;
      double sum = ai[j];
      for (int k = 0; k < j; ++k) sum -= ai[k] * aj[k];
      if (j < i) {
        ai[j] = sum / aj[j];
      } else {
        if (!(sum > 0.0)) return false;
        ai[i] = std::sqrt(sum);
      }
    }
  }
  return true;
}

void cholesky_real_solve(const std::vector<double>& l, int n, std::vector<double>& rhs) {
  for (int i = 0; i < n; ++i) {
    double sum = rhs[i];
    const double* li = l.data() + static_cast<size_t>(i) * n;
    for (int k = 0; k < i; ++k) sum -= li[k] * rhs[k];
    rhs[i] = sum / li[i];
  }
  for (int i = n - 1; i >= 0; --i) {
    double sum = rhs[i];
    for (int k = i + 1; k < n; ++k) sum -= l[static_cast<size_t>(k) * n + i] * rhs[k];
    rhs[i] = sum / l[static_cast<size_t>(i) * n + i];
  }
}

// Cholesky with an escalating diagonal shift. The shift is added to `m`
// itself so the factor stays consistent with the stored iterate; near the
// numerical floor (equality constraints posed as opposing inequalities drive
// both cone variables singular together) this trades a ~1e-8 perturbation
// for several more digits of convergence. Returns false when even the
// largest shift cannot restore positive definiteness.
bool factor_jittered(ComplexMatrix& m, ComplexMatrix& l) {
  const double scale = 1.0 + m.max_abs();
  double jitter = 0.0;
  while (true) {
    try {
      l = cholesky(m);
      return true;
    } catch (const std::runtime_error&) {
      jitter = jitter == 0.0 ? 1e-14 * scale : jitter * 100.0;
      if (jitter > 1e-8 * scale) return false;
      ComplexMatrix shift = ComplexMatrix::identity(m.rows());
      shift *= Complex(jitter, 0.0);
      m += shift;
    }
  }
}

// Largest step in (0, 1] keeping p + alpha * dir positive definite, with a 2%
// margin off the exact boundary. `chol_l` is the Cholesky factor of p.
double max_step(const ComplexMatrix& chol_l, const ComplexMatrix& dir) {
  const ComplexMatrix y = solve_lower(chol_l, dir);
  const ComplexMatrix b = solve_lower(chol_l, y.adjoint());
  const std::vector<double> ev = herm_eigenvalues(b.hermitized());
  const double lmin = ev.back();
  if (lmin >= 0.0) return 1.0;
  return std::min(1.0, -0.98 / lmin);
}

}  // namespace

SdpSolution solve_sdp(const SdpProblem& problem, const SdpOptions& options) {
  const int nblocks = static_cast<int>(problem.block_dims.size());
  const int ncon = static_cast<int>(problem.constraints.size());
  if (nblocks == 0 || ncon == 0)
    throw std::invalid_argument("sdp: need at least one block and one constraint");
  if (static_cast<int>(problem.objective.size()) != nblocks)
    throw std::invalid_argument("sdp: objective must provide one matrix per block");
  int ntotal = 0;
  for (int b = 0; b < nblocks; ++b) {
    const int dim = problem.block_dims[b];
    if (dim <= 0) throw std::invalid_argument("sdp: block dimensions must be positive");
    if (problem.objective[b].rows() != dim || problem.objective[b].cols() != dim)
      throw std::invalid_argument("sdp: objective block has the wrong shape");
    ntotal += dim;
  }

  const ConstraintIndex index = index_constraints(problem);
  std::vector<double> rhs(ncon);
  for (int k = 0; k < ncon; ++k) rhs[k] = problem.constraints[k].rhs;

  // Scaled-identity start sized by the data norms, in the style of SDPT3.
  double normb = 0.0, maxb = 0.0;
  for (const double v : rhs) {
    normb += v * v;
    maxb = std::max(maxb, std::abs(v));
  }
  normb = std::sqrt(normb);
  double normc2 = 0.0;
  for (const ComplexMatrix& c : problem.objective) {
    const double f = c.frobenius_norm();
    normc2 += f * f;
  }
  const double normc = std::sqrt(normc2);
  double max_norm_a = 0.0;
  for (const SdpConstraint& con : problem.constraints) {
    double f2 = 0.0;
    for (const SdpCoefficient& e : con.entries)
      f2 += (e.row == e.col ? 1.0 : 2.0) * std::norm(e.value);
    max_norm_a = std::max(max_norm_a, std::sqrt(f2));
  }
  const double sqrtn = std::sqrt(static_cast<double>(ntotal));
  const double xi_p = std::max({10.0, sqrtn, ntotal * (1.0 + maxb) / (1.0 + max_norm_a)});
  const double xi_d = std::max({10.0, sqrtn, 1.0 + std::max(normc, max_norm_a)});

  BlockMat x(nblocks), s(nblocks);
  for (int b = 0; b < nblocks; ++b) {
    x[b] = ComplexMatrix::identity(problem.block_dims[b]);
    x[b] *= Complex(xi_p, 0.0);
    s[b] = ComplexMatrix::identity(problem.block_dims[b]);
    s[b] *= Complex(xi_d, 0.0);
  }
  std::vector<double> y(ncon, 0.0);

  SdpSolution best;
  double best_err = std::numeric_limits<double>::infinity();
  double prev_err = std::numeric_limits<double>::infinity();
  int bad_streak = 0;
  bool converged = false;
  bool diverged = false;
  std::string breakdown;

  BlockMat rd(nblocks), sinv(nblocks), ls(nblocks), lx(nblocks);
  std::vector<double> rp(ncon), schur(static_cast<size_t>(ncon) * ncon), fact, gvec(ncon), dy;

  for (int iter = 0; iter <= options.max_iter; ++iter) {
    // Merit quantities of the current iterate.
    double pobj = 0.0;
    for (int b = 0; b < nblocks; ++b) pobj += herm_inner(problem.objective[b], x[b]);
    double dobj = 0.0;
    for (int k = 0; k < ncon; ++k) dobj += rhs[k] * y[k];

    double rp_norm2 = 0.0;
    for (int k = 0; k < ncon; ++k) {
      double t = rhs[k];
      for (const auto& [b, pos] : index.per_constraint[k])
        t -= dot_entries(index.per_block[b][pos].entries, x[b]).real();
      rp[k] = t;
      rp_norm2 += t * t;
    }
    double rd_norm2 = 0.0;
    for (int b = 0; b < nblocks; ++b) rd[b] = problem.objective[b] - s[b];
    for (int k = 0; k < ncon; ++k) {
      if (y[k] == 0.0) continue;
      for (const auto& [b, pos] : index.per_constraint[k])
        accumulate_entries(rd[b], index.per_block[b][pos].entries, -y[k]);
    }
    for (int b = 0; b < nblocks; ++b) {
      const double f = rd[b].frobenius_norm();
      rd_norm2 += f * f;
    }

    double mu = 0.0;
    for (int b = 0; b < nblocks; ++b) mu += herm_inner(x[b], s[b]);
    mu /= ntotal;

    const double gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj));
    const double pres = std::sqrt(rp_norm2) / (1.0 + normb);
    const double dres = std::sqrt(rd_norm2) / (1.0 + normc);
    const double err = std::max({gap, pres, dres});

    if (err < best_err) {
      best_err = err;
      best.primal_objective = pobj;
      best.dual_objective = dobj;
      best.gap = gap;
      best.primal_residual = pres;
      best.dual_residual = dres;
      best.iterations = iter;
      best.x = x;
      best.s = s;
      best.y = y;
    }
    if (gap <= options.tol && pres <= options.tol && dres <= options.tol) {
      converged = true;
      break;
    }
    if (iter == options.max_iter) break;
    if (err > prev_err) {
      if (++bad_streak >= 30) {
        diverged = true;
        break;
      }
    } else {
      bad_streak = 0;
    }
    prev_err = err;

    // No progress for a stretch of iterations means the method is walking in
    // place at its numerical floor; stop and keep the best iterate.
    if (iter - best.iterations >= 20) {
      breakdown = "no residual progress over 20 iterations";
      break;
    }

    // Factor the iterate.
    bool factorable = true;
    for (int b = 0; b < nblocks && factorable; ++b) {
      factorable = factor_jittered(s[b], ls[b]) && factor_jittered(x[b], lx[b]);
      if (!factorable) break;
      const ComplexMatrix eye = ComplexMatrix::identity(problem.block_dims[b]);
      sinv[b] = solve_lower_adjoint(ls[b], solve_lower(ls[b], eye)).hermitized();
    }
    if (!factorable) {
      breakdown = "iterate lost positive definiteness at the numerical floor";
      break;
    }

    // Schur complement M_jk = Re tr(A_j X A_k Sinv), assembled block by block
    // over the constraints that actually touch each block.
    std::fill(schur.begin(), schur.end(), 0.0);
    for (int b = 0; b < nblocks; ++b) {
      const auto& foots = index.per_block[b];
      for (const Footprint& fk : foots) {
        const ComplexMatrix w = sandwich(x[b], fk.entries, sinv[b]);
        for (const Footprint& fj : foots) {
          if (fj.constraint > fk.constraint) break;
          schur[static_cast<size_t>(fj.constraint) * ncon + fk.constraint] +=
              dot_entries(fj.entries, w).real();
        }
      }
    }
    for (int j = 0; j < ncon; ++j)
      for (int k = j + 1; k < ncon; ++k)
        schur[static_cast<size_t>(k) * ncon + j] = schur[static_cast<size_t>(j) * ncon + k];

    double diag_scale = 0.0;
    for (int i = 0; i < ncon; ++i)
      diag_scale = std::max(diag_scale, std::abs(schur[static_cast<size_t>(i) * ncon + i]));
    bool factored = false;
    for (double jitter = 0.0;;) {
      fact = schur;
      if (jitter > 0.0)
        for (int i = 0; i < ncon; ++i) fact[static_cast<size_t>(i) * ncon + i] += jitter;
      if (cholesky_real(fact, ncon)) {
        factored = true;
        break;
      }
      jitter = jitter == 0.0 ? 1e-14 * (1.0 + diag_scale) : jitter * 100.0;
      if (jitter > 1e-2 * (1.0 + diag_scale)) break;
    }
    if (!factored) {
      breakdown = "schur complement could not be factored";
      break;
    }

    // Solve against the factor, then polish by iterative refinement on the
    // unshifted matrix; the Schur system turns ill-conditioned as paired
    // inequality blocks approach their common boundary.
    const auto solve_schur = [&](std::vector<double>& v) {
      const std::vector<double> b_copy = v;
      cholesky_real_solve(fact, ncon, v);
      for (int round = 0; round < 2; ++round) {
        std::vector<double> res = b_copy;
        double res_max = 0.0, b_max = 0.0;
        for (int i = 0; i < ncon; ++i) {
          const double* row = schur.data() + static_cast<size_t>(i) * ncon;
          double dot = 0.0;
          for (int k = 0; k < ncon; ++k) dot += row[k] * v[k];
          res[i] -= dot;
          res_max = std::max(res_max, std::abs(res[i]));
          b_max = std::max(b_max, std::abs(b_copy[i]));
        }
        if (res_max <= 1e-14 * (1.0 + b_max)) break;
        cholesky_real_solve(fact, ncon, res);
        for (int i = 0; i < ncon; ++i) v[i] += res[i];
      }
    };

    // Predictor: affine-scaling direction (sigma = 0).
    BlockMat z(nblocks);
    for (int b = 0; b < nblocks; ++b) z[b] = x[b] * rd[b] * sinv[b];
    for (int k = 0; k < ncon; ++k) {
      double t = rhs[k];
      for (const auto& [b, pos] : index.per_constraint[k])
        t += dot_entries(index.per_block[b][pos].entries, z[b]).real();
      gvec[k] = t;
    }
    dy = gvec;
    solve_schur(dy);
    BlockMat dsp = rd;
    for (int k = 0; k < ncon; ++k) {
      for (const auto& [b, pos] : index.per_constraint[k])
        accumulate_entries(dsp[b], index.per_block[b][pos].entries, -dy[k]);
    }
    BlockMat dxp(nblocks);
    for (int b = 0; b < nblocks; ++b) {
      ComplexMatrix t = x[b] + x[b] * dsp[b] * sinv[b];
      t *= Complex(-1.0, 0.0);
      dxp[b] = t.hermitized();
    }
    double ap = 1.0, ad = 1.0;
    for (int b = 0; b < nblocks; ++b) {
      ap = std::min(ap, max_step(lx[b], dxp[b]));
      ad = std::min(ad, max_step(ls[b], dsp[b]));
    }

    // Centering weight from the predictor's progress.
    double txs = 0.0, t_ds = 0.0, t_dx = 0.0, t_dd = 0.0;
    for (int b = 0; b < nblocks; ++b) {
      txs += herm_inner(x[b], s[b]);
      t_dx += herm_inner(dxp[b], s[b]);
      t_ds += herm_inner(x[b], dsp[b]);
      t_dd += herm_inner(dxp[b], dsp[b]);
    }
    const double mu_aff = (txs + ap * t_dx + ad * t_ds + ap * ad * t_dd) / ntotal;
    double sigma = mu > 0.0 ? std::pow(std::max(0.0, mu_aff) / mu, 3.0) : 0.0;
    sigma = std::clamp(sigma, 0.0, 1.0);

    // Corrector: recenter toward sigma * mu and absorb the second-order term
    // dXp dSp of the complementarity equation.
    BlockMat z2(nblocks);
    for (int b = 0; b < nblocks; ++b) z2[b] = dxp[b] * dsp[b] * sinv[b];
    for (int k = 0; k < ncon; ++k) {
      double t = gvec[k];
      for (const auto& [b, pos] : index.per_constraint[k]) {
        const auto& entries = index.per_block[b][pos].entries;
        t += dot_entries(entries, z2[b]).real();
        t -= sigma * mu * dot_entries(entries, sinv[b]).real();
      }
      gvec[k] = t;
    }
    dy = gvec;
    solve_schur(dy);
    BlockMat ds = rd;
    for (int k = 0; k < ncon; ++k) {
      for (const auto& [b, pos] : index.per_constraint[k])
        accumulate_entries(ds[b], index.per_block[b][pos].entries, -dy[k]);
    }
    BlockMat dx(nblocks);
    for (int b = 0; b < nblocks; ++b) {
      ComplexMatrix t = sinv[b];
      t *= Complex(sigma * mu, 0.0);
      t -= x[b];
      t -= z2[b];
      t -= x[b] * ds[b] * sinv[b];
      dx[b] = t.hermitized();
    }
    ap = 1.0;
    ad = 1.0;
    for (int b = 0; b < nblocks; ++b) {
      ap = std::min(ap, max_step(lx[b], dx[b]));
      ad = std::min(ad, max_step(ls[b], ds[b]));
    }
    for (int b = 0; b < nblocks; ++b) {
      dx[b] *= Complex(ap, 0.0);
      x[b] += dx[b];
      x[b] = x[b].hermitized();
      ds[b] *= Complex(ad, 0.0);
      s[b] += ds[b];
      s[b] = s[b].hermitized();
    }
    for (int k = 0; k < ncon; ++k) y[k] += ad * dy[k];
  }

  SdpSolution out = std::move(best);
  if (converged) {
    out.status = SdpStatus::kOptimal;
  } else if (diverged) {
    out.status = SdpStatus::kInfeasible;
    out.note = "residuals increased for 30 consecutive iterations; "
               "likely primal or dual infeasible";
  } else {
    out.status = SdpStatus::kMaxIterations;
    out.note = breakdown.empty() ? "iteration limit reached"
                                 : breakdown + "; returning the best iterate";
  }
  return out;
}

}  // namespace idt
