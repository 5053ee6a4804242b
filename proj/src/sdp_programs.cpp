#include "idt/sdp_programs.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <stdexcept>
#include <tuple>
#include <utility>

namespace idt {

namespace {

constexpr double kScaleImagTol = 1e-15;

void require_real_scale(Complex scale, const char* where) {
  if (std::abs(scale.imag()) > kScaleImagTol * (1.0 + std::abs(scale)))
    throw std::invalid_argument(std::string(where) + ": scale must be real here");
}

void require_hermitian_arg(const ComplexMatrix& m, const char* where) {
  if (!m.square() || !m.is_hermitian(1e-12 * (1.0 + m.max_abs())))
    throw std::invalid_argument(std::string(where) + ": matrix must be hermitian");
}

// Eigenvalue clamp onto the PSD cone.
ComplexMatrix clamp_psd(const ComplexMatrix& h) {
  const HermEig eg = herm_eig(h.hermitized());
  const int n = h.rows();
  ComplexMatrix out(n, n);
  for (int k = 0; k < n; ++k) {
    const double v = eg.values[k];
    if (v <= 0.0) continue;
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        out(r, c) += v * eg.vectors(r, k) * std::conj(eg.vectors(c, k));
  }
  return out;
}

// h^{-1/2} with eigenvalues floored away from zero.
ComplexMatrix inv_sqrt_psd(const ComplexMatrix& h, double floor_value) {
  const HermEig eg = herm_eig(h.hermitized());
  const int n = h.rows();
  ComplexMatrix out(n, n);
  for (int k = 0; k < n; ++k) {
    const double w = 1.0 / std::sqrt(std::max(eg.values[k], floor_value));
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        out(r, c) += w * eg.vectors(r, k) * std::conj(eg.vectors(c, k));
  }
  return out;
}

}  // namespace

int herm_param_count(int n) { return n * n; }

ComplexMatrix herm_from_params(int n, const double* params) {
  ComplexMatrix h(n, n);
  int idx = 0;
  for (int r = 0; r < n; ++r) {
    h(r, r) = Complex(params[idx++], 0.0);
    for (int c = r + 1; c < n; ++c) {
      const double re = params[idx++];
      const double im = params[idx++];
      h(r, c) = Complex(re, im);
      h(c, r) = Complex(re, -im);
    }
  }
  return h;
}

int LmiBuilder::add_block(int dim) {
  if (dim <= 0) throw std::invalid_argument("lmi: block dimension must be positive");
  block_dims_.push_back(dim);
  constant_.push_back(ComplexMatrix(dim, dim));
  return static_cast<int>(block_dims_.size()) - 1;
}

int LmiBuilder::add_scalar(double cost) {
  cost_.push_back(cost);
  coeffs_.emplace_back();
  return static_cast<int>(cost_.size()) - 1;
}

int LmiBuilder::add_hermitian(int n, double diag_cost) {
  if (n <= 0) throw std::invalid_argument("lmi: hermitian variable needs positive dimension");
  const int base = static_cast<int>(cost_.size());
  for (int r = 0; r < n; ++r) {
    cost_.push_back(diag_cost);
    coeffs_.emplace_back();
    for (int c = r + 1; c < n; ++c) {
      cost_.push_back(0.0);
      coeffs_.emplace_back();
      cost_.push_back(0.0);
      coeffs_.emplace_back();
    }
  }
  return base;
}

void LmiBuilder::set_constant(int block, const ComplexMatrix& f0) {
  if (block < 0 || block >= static_cast<int>(block_dims_.size()))
    throw std::invalid_argument("lmi: constant block index out of range");
  if (f0.rows() != block_dims_[block] || f0.cols() != block_dims_[block])
    throw std::invalid_argument("lmi: constant block has the wrong shape");
  require_hermitian_arg(f0, "lmi set_constant");
  constant_[block] = f0;
}

void LmiBuilder::add_entry(int var, int block, int row, int col, Complex value) {
  if (var < 0 || var >= static_cast<int>(cost_.size()))
    throw std::invalid_argument("lmi: variable index out of range");
  if (block < 0 || block >= static_cast<int>(block_dims_.size()))
    throw std::invalid_argument("lmi: block index out of range");
  if (row < 0 || col < row || col >= block_dims_[block])
    throw std::invalid_argument("lmi: entry must lie on the upper triangle of its block");
  coeffs_[var].push_back({block, row, col, value});
}

void LmiBuilder::add_identity(int var, int block, double scale) {
  for (int t = 0; t < block_dims_.at(block); ++t)
    add_entry(var, block, t, t, Complex(scale, 0.0));
}

void LmiBuilder::add_matrix(int var_base, int n, int block, int row_off, int col_off,
                            Complex scale) {
  const int dim = block_dims_.at(block);
  if (row_off < 0 || col_off < 0 || row_off + n > dim || col_off + n > dim)
    throw std::invalid_argument("lmi: matrix placement exceeds the block");
  const bool diagonal = row_off == col_off;
  if (diagonal)
    require_real_scale(scale, "lmi add_matrix");
  else if (col_off < row_off + n)
    throw std::invalid_argument("lmi: off-diagonal placement must sit above the diagonal");
  const Complex iscale = scale * Complex(0.0, 1.0);
  int idx = var_base;
  for (int r = 0; r < n; ++r) {
    // Diagonal parameter: basis element E_rr.
    add_entry(idx++, block, row_off + r, col_off + r, scale);
    for (int c = r + 1; c < n; ++c) {
      // Real part: E_rc + E_cr. In a diagonal placement the lower entry is
      // the implied mirror; off the diagonal both land above the diagonal.
      add_entry(idx, block, row_off + r, col_off + c, scale);
      if (!diagonal) add_entry(idx, block, row_off + c, col_off + r, scale);
      ++idx;
      // Imaginary part: i E_rc - i E_cr.
      add_entry(idx, block, row_off + r, col_off + c, iscale);
      if (!diagonal) add_entry(idx, block, row_off + c, col_off + r, -iscale);
      ++idx;
    }
  }
}

void LmiBuilder::add_traced_matrix(int var_base, int d1, int d2, int block, Complex scale) {
  if (block_dims_.at(block) != d2)
    throw std::invalid_argument("lmi: traced placement needs a block of the traced shape");
  require_real_scale(scale, "lmi add_traced_matrix");
  const int n = d1 * d2;
  const Complex iscale = scale * Complex(0.0, 1.0);
  int idx = var_base;
  for (int r = 0; r < n; ++r) {
    // Diagonal parameter: E_rr with r = (a, i) contributes E_ii to tr_1.
    add_entry(idx++, block, r % d2, r % d2, scale);
    for (int c = r + 1; c < n; ++c) {
      // Off-diagonal pair (r, c) = ((a, i), (b, k)) survives iff a == b, and
      // then r < c forces i < k, so entries stay on the upper triangle.
      if (r / d2 == c / d2) {
        add_entry(idx, block, r % d2, c % d2, scale);
        add_entry(idx + 1, block, r % d2, c % d2, iscale);
      }
      idx += 2;
    }
  }
}

LmiProblem LmiBuilder::build() {
  if (block_dims_.empty() || cost_.empty())
    throw std::invalid_argument("lmi: problem needs at least one block and one variable");
  LmiProblem p;
  p.block_dims = std::move(block_dims_);
  p.constant = std::move(constant_);
  p.cost = std::move(cost_);
  p.coeffs = std::move(coeffs_);
  return p;
}

SdpProblem lmi_to_standard(const LmiProblem& lmi) {
  SdpProblem p;
  p.block_dims = lmi.block_dims;
  p.objective.reserve(lmi.constant.size());
  for (const ComplexMatrix& f0 : lmi.constant) {
    ComplexMatrix c = f0;
    c *= Complex(-1.0, 0.0);
    p.objective.push_back(std::move(c));
  }
  p.constraints.resize(lmi.cost.size());
  for (size_t k = 0; k < lmi.cost.size(); ++k) {
    p.constraints[k].rhs = -lmi.cost[k];
    p.constraints[k].entries = lmi.coeffs[k];
    for (SdpCoefficient& e : p.constraints[k].entries) e.value = -e.value;
  }
  return p;
}

LmiSolution solve_lmi(const LmiProblem& lmi, const SdpOptions& options, bool realified) {
  SdpProblem standard = lmi_to_standard(lmi);
  if (realified) standard = realify_problem(standard);
  const SdpSolution sol = solve_sdp(standard, options);
  LmiSolution out;
  out.status = sol.status;
  out.y = sol.y;
  out.value = 0.0;
  for (size_t k = 0; k < lmi.cost.size(); ++k) out.value += lmi.cost[k] * sol.y[k];
  out.gap = sol.gap;
  out.primal_residual = sol.primal_residual;
  out.dual_residual = sol.dual_residual;
  out.iterations = sol.iterations;
  out.note = sol.note;
  return out;
}

SdpProblem realify_problem(const SdpProblem& problem) {
  SdpProblem r;
  r.block_dims.reserve(problem.block_dims.size());
  for (const int dim : problem.block_dims) r.block_dims.push_back(2 * dim);
  r.objective.reserve(problem.objective.size());
  for (const ComplexMatrix& c : problem.objective) {
    const int n = c.rows();
    ComplexMatrix cr(2 * n, 2 * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double re = 0.5 * c(i, j).real();
        const double im = 0.5 * c(i, j).imag();
        cr(i, j) = re;
        cr(n + i, n + j) = re;
        cr(n + i, j) = im;
        cr(i, n + j) = -im;
      }
    r.objective.push_back(std::move(cr));
  }
  r.constraints.resize(problem.constraints.size());
  for (size_t k = 0; k < problem.constraints.size(); ++k) {
    r.constraints[k].rhs = problem.constraints[k].rhs;
    // Accumulate the real embedding entrywise, then keep the upper triangle.
    std::map<std::tuple<int, int, int>, double> acc;
    for (const SdpCoefficient& e : problem.constraints[k].entries) {
      const int n = problem.block_dims[e.block];
      const auto scatter = [&acc, &e, n](int fr, int fc, Complex w) {
        acc[{e.block, fr, fc}] += 0.5 * w.real();
        acc[{e.block, n + fr, n + fc}] += 0.5 * w.real();
        acc[{e.block, n + fr, fc}] += 0.5 * w.imag();
        acc[{e.block, fr, n + fc}] -= 0.5 * w.imag();
      };
      scatter(e.row, e.col, e.value);
      if (e.row != e.col) scatter(e.col, e.row, std::conj(e.value));
    }
    for (const auto& [key, value] : acc) {
      if (value == 0.0) continue;
      const auto [block, row, col] = key;
      if (row <= col) r.constraints[k].entries.push_back({block, row, col, Complex(value, 0.0)});
    }
  }
  return r;
}

ComplexMatrix derealify_block(const ComplexMatrix& xr) {
  if (!xr.square() || xr.rows() % 2 != 0)
    throw std::invalid_argument("derealify: block must be square with even dimension");
  const int n = xr.rows() / 2;
  ComplexMatrix h(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      const double re = 0.5 * (xr(r, c).real() + xr(n + r, n + c).real());
      const double im = 0.5 * (xr(r, n + c).real() - xr(n + r, c).real());
      h(r, c) = Complex(re, -im);
    }
  return h;
}

void write_sdpa_sparse(const SdpProblem& problem, const std::string& path) {
  const SdpProblem r = realify_problem(problem);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("sdpa: cannot open " + path + " for writing");
  out << std::setprecision(17);
  out << "* realified LMI: minimize c.x subject to sum_i x_i F_i - F0 >= 0\n";
  out << "* the optimum equals minus the dual optimum of the source problem\n";
  out << r.constraints.size() << "\n";
  out << r.block_dims.size() << "\n";
  for (size_t b = 0; b < r.block_dims.size(); ++b)
    out << r.block_dims[b] << (b + 1 < r.block_dims.size() ? ' ' : '\n');
  for (size_t k = 0; k < r.constraints.size(); ++k)
    out << -r.constraints[k].rhs << (k + 1 < r.constraints.size() ? ' ' : '\n');
  // F0 = -C.
  for (size_t b = 0; b < r.objective.size(); ++b) {
    const ComplexMatrix& c = r.objective[b];
    for (int i = 0; i < c.rows(); ++i)
      for (int j = i; j < c.cols(); ++j) {
        const double v = -c(i, j).real();
        if (v == 0.0) continue;
        out << "0 " << b + 1 << ' ' << i + 1 << ' ' << j + 1 << ' ' << v << "\n";
      }
  }
  // F_k = -A_k.
  for (size_t k = 0; k < r.constraints.size(); ++k)
    for (const SdpCoefficient& e : r.constraints[k].entries) {
      const double v = -e.value.real();
      if (v == 0.0) continue;
      out << k + 1 << ' ' << e.block + 1 << ' ' << e.row + 1 << ' ' << e.col + 1 << ' ' << v
          << "\n";
    }
  if (!out) throw std::runtime_error("sdpa: write to " + path + " failed");
}

LmiSolution lambda_max_sdp(const ComplexMatrix& m, const SdpOptions& options, bool realified) {
  require_hermitian_arg(m, "lambda_max_sdp");
  LmiBuilder builder;
  const int block = builder.add_block(m.rows());
  const int t = builder.add_scalar(1.0);
  builder.add_identity(t, block, 1.0);
  builder.set_constant(block, m);
  return solve_lmi(builder.build(), options, realified);
}

LmiSolution trace_norm_sdp(const ComplexMatrix& m, const SdpOptions& options, bool realified) {
  if (!m.square()) throw std::invalid_argument("trace_norm_sdp: matrix must be square");
  const int n = m.rows();
  LmiBuilder builder;
  const int big = builder.add_block(2 * n);
  const int y0 = builder.add_hermitian(n, 0.5);
  const int y1 = builder.add_hermitian(n, 0.5);
  builder.add_matrix(y0, n, big, 0, 0, Complex(1.0, 0.0));
  builder.add_matrix(y1, n, big, n, n, Complex(1.0, 0.0));
  ComplexMatrix f0(2 * n, 2 * n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      f0(r, n + c) = -m(r, c);
      f0(n + c, r) = -std::conj(m(r, c));
    }
  builder.set_constant(big, f0);
  return solve_lmi(builder.build(), options, realified);
}

LmiSolution diamond_norm_lmi(const ComplexMatrix& choi, int dout, int din,
                             const SdpOptions& options, bool realified) {
  if (dout <= 0 || din <= 0 || choi.rows() != dout * din)
    throw std::invalid_argument("diamond_norm: Choi matrix shape does not match dimensions");
  require_hermitian_arg(choi, "diamond_norm");
  const int big_dim = dout * din;
  LmiBuilder builder;
  const int big = builder.add_block(2 * big_dim);
  const int c0 = builder.add_block(din);
  const int c1 = builder.add_block(din);
  const int p0 = builder.add_block(big_dim);
  const int p1 = builder.add_block(big_dim);
  const int l0 = builder.add_scalar(0.5);
  const int l1 = builder.add_scalar(0.5);
  const int y0 = builder.add_hermitian(big_dim);
  const int y1 = builder.add_hermitian(big_dim);
  builder.add_identity(l0, c0, 1.0);
  builder.add_identity(l1, c1, 1.0);
  builder.add_traced_matrix(y0, dout, din, c0, Complex(-1.0, 0.0));
  builder.add_traced_matrix(y1, dout, din, c1, Complex(-1.0, 0.0));
  builder.add_matrix(y0, big_dim, big, 0, 0, Complex(1.0, 0.0));
  builder.add_matrix(y1, big_dim, big, big_dim, big_dim, Complex(1.0, 0.0));
  builder.add_matrix(y0, big_dim, p0, 0, 0, Complex(1.0, 0.0));
  builder.add_matrix(y1, big_dim, p1, 0, 0, Complex(1.0, 0.0));
  ComplexMatrix f0(2 * big_dim, 2 * big_dim);
  for (int r = 0; r < big_dim; ++r)
    for (int c = 0; c < big_dim; ++c) {
      f0(r, big_dim + c) = choi(r, c);
      f0(big_dim + c, r) = std::conj(choi(r, c));
    }
  builder.set_constant(big, f0);
  return solve_lmi(builder.build(), options, realified);
}

double diamond_norm_choi(const ComplexMatrix& choi, int dout, int din,
                         const SdpOptions& options, bool realified) {
  return diamond_norm_lmi(choi, dout, din, options, realified).value;
}

double diamond_distance(const Channel& a, const Channel& b, const SdpOptions& options,
                        bool realified) {
  if (a.din != b.din || a.dout != b.dout)
    throw std::invalid_argument("diamond_distance: channels must share dimensions");
  return diamond_norm_choi(a.choi - b.choi, a.dout, a.din, options, realified);
}

TradeoffDims tradeoff_dims(int d, int m) {
  if (d <= 0 || m <= 0) throw std::invalid_argument("tradeoff_dims: dimensions must be positive");
  return {(m + 4) * d * d + 2 * (m + 2) * d, 2 + (m + 2) * d * d};
}

LmiProblem tradeoff_problem(const Povm& target, double budget) {
  target.validate();
  if (budget < 0.0) throw std::invalid_argument("tradeoff: budget must be nonnegative");
  const int d = target.dim;
  const int m = target.outcomes();
  const int jdim = d * d;

  LmiBuilder builder;
  const int big = builder.add_block(2 * jdim);
  const int c0 = builder.add_block(d);
  const int c1 = builder.add_block(d);
  const int p0 = builder.add_block(jdim);
  const int p1 = builder.add_block(jdim);
  std::vector<int> band_hi(m), band_lo(m), jpsd(m);
  for (int i = 0; i < m; ++i) band_hi[i] = builder.add_block(d);
  for (int i = 0; i < m; ++i) band_lo[i] = builder.add_block(d);
  for (int i = 0; i < m; ++i) jpsd[i] = builder.add_block(jdim);
  const int tp_lo = builder.add_block(d);
  const int tp_hi = builder.add_block(d);

  const int l0 = builder.add_scalar(0.5);
  const int l1 = builder.add_scalar(0.5);
  const int y0 = builder.add_hermitian(jdim);
  const int y1 = builder.add_hermitian(jdim);
  std::vector<int> ji(m);
  for (int i = 0; i < m; ++i) ji[i] = builder.add_hermitian(jdim);

  builder.add_identity(l0, c0, 1.0);
  builder.add_identity(l1, c1, 1.0);
  builder.add_traced_matrix(y0, d, d, c0, Complex(-1.0, 0.0));
  builder.add_traced_matrix(y1, d, d, c1, Complex(-1.0, 0.0));
  builder.add_matrix(y0, jdim, big, 0, 0, Complex(1.0, 0.0));
  builder.add_matrix(y1, jdim, big, jdim, jdim, Complex(1.0, 0.0));
  builder.add_matrix(y0, jdim, p0, 0, 0, Complex(1.0, 0.0));
  builder.add_matrix(y1, jdim, p1, 0, 0, Complex(1.0, 0.0));
  for (int i = 0; i < m; ++i) {
    builder.add_matrix(ji[i], jdim, big, 0, jdim, Complex(1.0, 0.0));
    builder.add_traced_matrix(ji[i], d, d, band_hi[i], Complex(1.0, 0.0));
    builder.add_traced_matrix(ji[i], d, d, band_lo[i], Complex(-1.0, 0.0));
    builder.add_matrix(ji[i], jdim, jpsd[i], 0, 0, Complex(1.0, 0.0));
    builder.add_traced_matrix(ji[i], d, d, tp_lo, Complex(1.0, 0.0));
    builder.add_traced_matrix(ji[i], d, d, tp_hi, Complex(-1.0, 0.0));
  }

  // Constants. The disturbance block compares against the identity channel:
  // its off-diagonal quadrant holds sum_i J_i - J_id.
  const ComplexMatrix jid = identity_channel(d).choi;
  ComplexMatrix f0big(2 * jdim, 2 * jdim);
  for (int r = 0; r < jdim; ++r)
    for (int c = 0; c < jdim; ++c) {
      f0big(r, jdim + c) = jid(r, c);
      f0big(jdim + c, r) = std::conj(jid(r, c));
    }
  builder.set_constant(big, f0big);
  const ComplexMatrix eye_d = ComplexMatrix::identity(d);
  for (int i = 0; i < m; ++i) {
    // band_hi: tr_1 J_i - E_i^T + budget >= 0; band_lo: the reversed band.
    ComplexMatrix f_hi = target.effects[i].transpose();
    ComplexMatrix shift = eye_d;
    shift *= Complex(budget, 0.0);
    f_hi -= shift;
    builder.set_constant(band_hi[i], f_hi.hermitized());
    ComplexMatrix f_lo = target.effects[i].transpose();
    f_lo *= Complex(-1.0, 0.0);
    f_lo -= shift;
    builder.set_constant(band_lo[i], f_lo.hermitized());
  }
  builder.set_constant(tp_lo, eye_d);
  ComplexMatrix neg_eye = eye_d;
  neg_eye *= Complex(-1.0, 0.0);
  builder.set_constant(tp_hi, neg_eye);
  return builder.build();
}

namespace {

// Solves the LMI after adding eps * identity to every objective block of the
// standard form. At small budgets the paired band blocks pin near-equalities
// whose multipliers blow up (the tradeoff value has a square-root kink in the
// budget), so the unregularized primal optimum is approached but never
// attained and the reported value lands noticeably short. The eps bump prices
// that escape ray and restores a strict interior on both sides; the induced
// value bias scales as sqrt(eps) and is cancelled by the caller.
LmiSolution solve_lmi_regularized(const LmiProblem& lmi, double eps,
                                  const SdpOptions& options) {
  SdpProblem standard = lmi_to_standard(lmi);
  for (ComplexMatrix& c : standard.objective) {
    ComplexMatrix bump = ComplexMatrix::identity(c.rows());
    bump *= Complex(eps, 0.0);
    c += bump;
  }
  const SdpSolution sol = solve_sdp(standard, options);
  LmiSolution out;
  out.status = sol.status;
  out.y = sol.y;
  out.gap = sol.gap;
  out.primal_residual = sol.primal_residual;
  out.dual_residual = sol.dual_residual;
  out.iterations = sol.iterations;
  out.note = sol.note;
  out.value = 0.0;
  for (size_t i = 0; i < lmi.cost.size(); ++i) out.value += lmi.cost[i] * sol.y[i];
  return out;
}

}  // namespace

namespace {

// A regularized stage is usable once it meets the solver tolerance, or once
// it stalls at its numerical floor within a small band of it; either way the
// extrapolated value is good to roughly the worse stage gap, which the
// caller reports instead of claiming the tolerance.
bool stage_usable(const LmiSolution& stage, double tol) {
  if (stage.status == SdpStatus::kOptimal) return true;
  if (stage.status != SdpStatus::kMaxIterations) return false;
  return std::max({stage.gap, stage.primal_residual, stage.dual_residual}) <= 4.0 * tol;
}

}  // namespace

TradeoffResult tradeoff_sdp(const Povm& target, double budget, const SdpOptions& options) {
  const LmiProblem lmi = tradeoff_problem(target, budget);

  // Three regularized solves with eps, 4*eps and 16*eps. The regularization
  // bias is A*sqrt(eps) + B*eps: the square-root term rules when the budget
  // makes the optimum non-attained (an escape ray the bump has to price), the
  // linear term when it is attained, and B can reach the hundreds on the
  // larger programs. (8*v - 6*v4 + v16)/3 cancels both terms, leaving an
  // O(eps^(3/2)) remainder plus a few multiples of the stage gaps.
  constexpr double kEps = 1e-8;
  const LmiSolution sol = solve_lmi_regularized(lmi, kEps, options);
  const LmiSolution mid = solve_lmi_regularized(lmi, 4.0 * kEps, options);
  const LmiSolution coarse = solve_lmi_regularized(lmi, 16.0 * kEps, options);
  const int d = target.dim;
  const int m = target.outcomes();
  const int jdim = d * d;
  const int params_per_matrix = herm_param_count(jdim);

  // Variable layout of tradeoff_problem: lambda_0, lambda_1, Y0, Y1, then
  // the J_i. Rebuild the branch Choi matrices and snap them back onto the
  // instrument set: the solver leaves eigenvalues and the trace sum a hair
  // off the cone, which strict validation would reject.
  std::vector<ComplexMatrix> branches(m);
  ComplexMatrix sum(d, d);
  for (int i = 0; i < m; ++i) {
    const int base = 2 + (2 + i) * params_per_matrix;
    branches[i] = clamp_psd(herm_from_params(jdim, sol.y.data() + base));
    sum += partial_trace(branches[i], d, d, 1);
  }
  const ComplexMatrix w = inv_sqrt_psd(sum, 1e-12);
  const ComplexMatrix corr = kron(ComplexMatrix::identity(d), w);
  TradeoffResult out;
  out.instrument.dim = d;
  out.instrument.branch_choi.reserve(m);
  for (int i = 0; i < m; ++i)
    out.instrument.branch_choi.push_back((corr * branches[i] * corr.adjoint()).hermitized());
  out.value = (8.0 * sol.value - 6.0 * mid.value + coarse.value) / 3.0;
  if (stage_usable(sol, options.tol) && stage_usable(mid, options.tol) &&
      stage_usable(coarse, options.tol)) {
    out.status = SdpStatus::kOptimal;
  } else if (sol.status != SdpStatus::kOptimal) {
    out.status = sol.status;
  } else {
    out.status = mid.status != SdpStatus::kOptimal ? mid.status : coarse.status;
  }
  out.gap = std::max({sol.gap, mid.gap, coarse.gap});
  out.iterations = sol.iterations;
  out.note = !sol.note.empty() ? sol.note : (!mid.note.empty() ? mid.note : coarse.note);
  return out;
}

}  // namespace idt
