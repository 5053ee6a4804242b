#pragma once

#include <string>
#include <utility>
#include <vector>

#include "idt/linalg.hpp"
#include "idt/quantum.hpp"
#include "idt/sdp.hpp"

namespace idt {

// Linear-matrix-inequality form:
//   minimize    cost . y
//   subject to  sum_k y_k F_k - F0 >= 0   (block diagonal).
// This is the dual of a standard-form problem (see lmi_to_standard), which is
// how solve_lmi evaluates it.
struct LmiProblem {
  std::vector<int> block_dims;
  std::vector<ComplexMatrix> constant;              // F0 blocks
  std::vector<double> cost;
  std::vector<std::vector<SdpCoefficient>> coeffs;  // F_k, sparse
};

struct LmiSolution {
  SdpStatus status = SdpStatus::kMaxIterations;
  double value = 0.0;  // cost . y at the returned point
  std::vector<double> y;
  double gap = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
  std::string note;
};

// Parameter layout for an n x n hermitian matrix variable: for each row
// r = 0..n-1, the diagonal entry (r, r), then for each c = r+1..n-1 the real
// part and the imaginary part of the entry (r, c). herm_param_count(n) = n^2.
int herm_param_count(int n);
ComplexMatrix herm_from_params(int n, const double* params);

// Incremental construction of LMI problems: declare blocks and variables,
// then place coefficients by index.
class LmiBuilder {
 public:
  int add_block(int dim);
  int add_scalar(double cost);
  // Registers the n^2 real parameters of a hermitian matrix variable and
  // returns the index of the first. `diag_cost` is attached to each diagonal
  // parameter, so the variable contributes diag_cost * tr(H) to the cost.
  int add_hermitian(int n, double diag_cost = 0.0);

  void set_constant(int block, const ComplexMatrix& f0);
  // Single coefficient on the upper triangle of a block.
  void add_entry(int var, int block, int row, int col, Complex value);
  // scale * identity on a block's diagonal.
  void add_identity(int var, int block, double scale);
  // Places scale * H for the hermitian variable rooted at var_base into the
  // square region of `block` starting at (row_off, col_off). A diagonal
  // placement (row_off == col_off) needs real scale; an off-diagonal
  // placement needs col_off >= row_off + n so the region stays above the
  // diagonal, and the conjugate mirror region is implied.
  void add_matrix(int var_base, int n, int block, int row_off, int col_off, Complex scale);
  // Places scale * tr_1(H) for the hermitian variable on C^{d1} (x) C^{d2}
  // rooted at var_base into a d2-dimensional block.
  void add_traced_matrix(int var_base, int d1, int d2, int block, Complex scale);

  LmiProblem build();

 private:
  std::vector<int> block_dims_;
  std::vector<ComplexMatrix> constant_;
  std::vector<double> cost_;
  std::vector<std::vector<SdpCoefficient>> coeffs_;
};

// Standard-form problem whose dual is the given LMI: A_k = -F_k, C = -F0,
// rhs = -cost. The LMI optimum equals minus the standard dual optimum.
SdpProblem lmi_to_standard(const LmiProblem& lmi);

// Solves the LMI through solve_sdp. With `realified` set, the standard-form
// problem is first embedded into real symmetric blocks; the variable vector
// y and the reported value are unchanged by the embedding.
LmiSolution solve_lmi(const LmiProblem& lmi, const SdpOptions& options = {},
                      bool realified = false);

// Real symmetric embedding H -> [[Re H, -Im H], [Im H, Re H]] applied to all
// blocks. Objective and coefficients are halved so objective values carry
// over exactly; rhs is untouched.
SdpProblem realify_problem(const SdpProblem& problem);
// Pulls a primal block of the embedded problem back to a hermitian matrix
// (inverse of the embedding after averaging away the off-subspace part).
ComplexMatrix derealify_block(const ComplexMatrix& xr);

// Sparse SDPA file with the realified LMI equivalent of `problem`, for
// cross-checks against third-party solvers. The written problem's optimum
// equals minus this problem's dual optimum.
void write_sdpa_sparse(const SdpProblem& problem, const std::string& path);

// Reference programs with closed-form answers, used to validate the solver.
// lambda_max: min t s.t. t 1 - m >= 0. trace_norm: min (tr Y0 + tr Y1) / 2
// s.t. [[Y0, m], [m^*, Y1]] >= 0 (m square, not necessarily hermitian).
LmiSolution lambda_max_sdp(const ComplexMatrix& m, const SdpOptions& options = {},
                           bool realified = false);
LmiSolution trace_norm_sdp(const ComplexMatrix& m, const SdpOptions& options = {},
                           bool realified = false);

// Completely bounded trace norm (diamond norm) of the hermiticity-preserving
// map with the given Choi matrix, output factor first. The _lmi variant
// returns the full solver record so callers can inspect status and gap.
LmiSolution diamond_norm_lmi(const ComplexMatrix& choi, int dout, int din,
                             const SdpOptions& options = {}, bool realified = false);
double diamond_norm_choi(const ComplexMatrix& choi, int dout, int din,
                         const SdpOptions& options = {}, bool realified = false);
double diamond_distance(const Channel& a, const Channel& b,
                        const SdpOptions& options = {}, bool realified = false);

// Side lengths of the block-diagonal semidefinite variables of the
// measurement tradeoff program on a d-dimensional system with m outcomes:
// primal (m+4) d^2 + 2 (m+2) d, dual 2 + (m+2) d^2.
struct TradeoffDims {
  int primal_dim = 0;
  int dual_dim = 0;
};
TradeoffDims tradeoff_dims(int d, int m);

// Minimal diamond-norm disturbance over all instruments whose induced POVM
// stays within operator-norm distance `budget` of every target effect:
//   minimize (lambda_0 + lambda_1) / 2   over instruments {J_i}
//   subject to the diamond-norm block [[Y0, sum_i J_i - J_id], [..., Y1]],
//   the per-effect error bands |tr_1 J_i - E_i^T| <= budget * 1, and
//   trace preservation, each inequality kept as written.
LmiProblem tradeoff_problem(const Povm& target, double budget);

struct TradeoffResult {
  double value = 0.0;
  Instrument instrument{};  // optimizer, cleaned up to validate strictly
  SdpStatus status = SdpStatus::kMaxIterations;
  double gap = 0.0;  // worse relative duality gap across the two stages
  int iterations = 0;
  std::string note;
};
// Solves two regularized copies of the tradeoff program and extrapolates the
// regularization away. Status is optimal when both stages reach the solver
// tolerance, or stall at their numerical floor within 4x of it; `gap` always
// reports what the stages actually achieved.
TradeoffResult tradeoff_sdp(const Povm& target, double budget,
                            const SdpOptions& options = {});

}  // namespace idt
