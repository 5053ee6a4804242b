#pragma once

#include <string>
#include <vector>

#include "idt/linalg.hpp"

namespace idt {

// One entry of a sparse hermitian coefficient matrix. Entries live on the
// upper triangle (row <= col); the mirrored entry at (col, row) with the
// conjugated value is implied. Diagonal entries must carry real values.
struct SdpCoefficient {
  int block = 0;
  int row = 0;
  int col = 0;
  Complex value;
};

// One linear constraint tr(A X) = rhs with sparse hermitian A.
struct SdpConstraint {
  double rhs = 0.0;
  std::vector<SdpCoefficient> entries;
};

// Standard-form semidefinite program over block-diagonal hermitian matrices:
//   minimize    tr(C X)
//   subject to  tr(A_k X) = rhs_k for all k,   X >= 0.
// The dual reads: maximize rhs . y subject to C - sum_k y_k A_k >= 0.
struct SdpProblem {
  std::vector<int> block_dims;
  std::vector<ComplexMatrix> objective;  // C, one dense matrix per block
  std::vector<SdpConstraint> constraints;
};

enum class SdpStatus { kOptimal, kMaxIterations, kInfeasible };

struct SdpOptions {
  double tol = 1e-8;  // target for the relative gap and both residuals
  int max_iter = 200;
};

struct SdpSolution {
  SdpStatus status = SdpStatus::kMaxIterations;
  double primal_objective = 0.0;  // tr(C X)
  double dual_objective = 0.0;    // rhs . y
  double gap = 0.0;               // |primal - dual| / (1 + |primal|)
  double primal_residual = 0.0;   // ||rhs - tr(A X)||_2 / (1 + ||rhs||_2)
  double dual_residual = 0.0;     // ||C - S - sum y_k A_k||_F / (1 + ||C||_F)
  int iterations = 0;
  std::vector<ComplexMatrix> x;  // primal blocks
  std::vector<ComplexMatrix> s;  // dual slack blocks
  std::vector<double> y;         // dual multipliers
  std::string note;              // set when the run ended abnormally
};

// Infeasible-start primal-dual interior-point method with the HKM search
// direction and a Mehrotra predictor-corrector step. Deterministic: fixed
// iteration order, no randomization. Equality constraints posed as pairs of
// opposing inequalities are supported; they leave the dual without a strict
// interior, which this method tolerates at some cost in final accuracy.
SdpSolution solve_sdp(const SdpProblem& problem, const SdpOptions& options = {});

}  // namespace idt
