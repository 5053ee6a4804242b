#pragma once

#include <complex>
#include <vector>

namespace idt {

using Complex = std::complex<double>;

// Dense row-major complex matrix. The library works with operators on
// spaces of dimension up to a few hundred, so everything here is plain
// O(n^3) dense arithmetic; no blocking, no expression templates.
class ComplexMatrix {
public:
  ComplexMatrix() = default;
  ComplexMatrix(int rows, int cols);

  static ComplexMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  Complex& operator()(int r, int c) { return a_[static_cast<size_t>(r) * cols_ + c]; }
  const Complex& operator()(int r, int c) const { return a_[static_cast<size_t>(r) * cols_ + c]; }

  Complex* data() { return a_.data(); }
  const Complex* data() const { return a_.data(); }

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(Complex s);

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  ComplexMatrix conjugate() const;

  Complex trace() const;
  double max_abs() const;        // largest |entry|
  double frobenius_norm() const;

  // Largest |M(i,j) - conj(M(j,i))| over all entries.
  double hermiticity_defect() const;
  bool is_hermitian(double tol) const { return hermiticity_defect() <= tol; }

  // Averages M with its adjoint. Cheap way to strip numerical skew from
  // matrices that are hermitian by construction.
  ComplexMatrix hermitized() const;

private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Complex> a_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex s, ComplexMatrix a);

// Kronecker product, row-major index convention (i1, i2) -> i1 * rows(b) + i2.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Partial trace of an operator on C^{d1} (x) C^{d2}. `which` selects the
// factor that gets traced out: 1 for the first, 2 for the second.
ComplexMatrix partial_trace(const ComplexMatrix& m, int d1, int d2, int which);

// Eigendecomposition of a hermitian matrix, eigenvalues sorted descending,
// eigenvectors as the columns of `vectors` in matching order.
struct HermEig {
  std::vector<double> values;
  ComplexMatrix vectors;
};

// Cyclic Jacobi diagonalization. Deterministic (no pivot randomization) and
// accurate to ~1e-14 * ||m|| at the dimensions used here. Throws
// std::invalid_argument if `m` is not square or fails the hermiticity check
// max|m_ij - conj(m_ji)| <= 1e-12 * (1 + max|m_ij|).
HermEig herm_eig(const ComplexMatrix& m);

// Eigenvalues only, same algorithm without accumulating vectors.
std::vector<double> herm_eigenvalues(const ComplexMatrix& m);

double trace_norm(const ComplexMatrix& m);    // sum of singular values
double spectral_norm(const ComplexMatrix& m); // largest singular value

// Hermitian PSD square root. Eigenvalues in [-tol, 0) with
// tol = 1e-10 * max(1, largest eigenvalue magnitude) are clamped to zero;
// anything below -tol throws std::invalid_argument.
ComplexMatrix mat_sqrt_psd(const ComplexMatrix& m);

// Cholesky factor L (lower triangular, L L^* = m) of a hermitian positive
// definite matrix. Throws std::runtime_error when a pivot drops below zero.
ComplexMatrix cholesky(const ComplexMatrix& m);

// Solves L x = b (forward) and L^* x = b (backward) for lower triangular L.
ComplexMatrix solve_lower(const ComplexMatrix& l, const ComplexMatrix& b);
ComplexMatrix solve_lower_adjoint(const ComplexMatrix& l, const ComplexMatrix& b);

// Inverse of a hermitian positive definite matrix via its Cholesky factor.
ComplexMatrix psd_inverse(const ComplexMatrix& m);

}  // namespace idt
