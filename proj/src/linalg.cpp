#include "idt/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace idt {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

ComplexMatrix::ComplexMatrix(int rows, int cols)
    : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, Complex(0.0, 0.0)) {
  require(rows >= 0 && cols >= 0, "ComplexMatrix: negative dimension");
}

ComplexMatrix ComplexMatrix::identity(int n) {
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  require(rows_ == o.rows_ && cols_ == o.cols_, "matrix +=: shape mismatch");
  for (size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  require(rows_ == o.rows_ && cols_ == o.cols_, "matrix -=: shape mismatch");
  for (size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
  for (auto& v : a_) v *= s;
  return *this;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix m(cols_, rows_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) m(c, r) = std::conj((*this)(r, c));
  return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix m(cols_, rows_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) m(c, r) = (*this)(r, c);
  return m;
}

ComplexMatrix ComplexMatrix::conjugate() const {
  ComplexMatrix m(rows_, cols_);
  for (size_t i = 0; i < a_.size(); ++i) m.a_[i] = std::conj(a_[i]);
  return m;
}

Complex ComplexMatrix::trace() const {
  require(square(), "trace: matrix not square");
  Complex t = 0.0;
  for (int i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& v : a_) m = std::max(m, std::abs(v));
  return m;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& v : a_) s += std::norm(v);
  return std::sqrt(s);
}

double ComplexMatrix::hermiticity_defect() const {
  if (!square()) return std::numeric_limits<double>::infinity();
  double m = 0.0;
  for (int r = 0; r < rows_; ++r)
    for (int c = r; c < cols_; ++c)
      m = std::max(m, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
  return m;
}

ComplexMatrix ComplexMatrix::hermitized() const {
  require(square(), "hermitized: matrix not square");
  ComplexMatrix m(rows_, cols_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c)
      m(r, c) = 0.5 * ((*this)(r, c) + std::conj((*this)(c, r)));
  return m;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  require(a.cols() == b.rows(), "matrix *: inner dimension mismatch");
  ComplexMatrix m(a.rows(), b.cols());
  const int n = a.rows(), k = a.cols(), p = b.cols();
  for (int i = 0; i < n; ++i) {
    for (int l = 0; l < k; ++l) {
      const Complex ail = a(i, l);
      if (ail == Complex(0.0, 0.0)) continue;
      const Complex* brow = b.data() + static_cast<size_t>(l) * p;
      Complex* mrow = m.data() + static_cast<size_t>(i) * p;
      for (int j = 0; j < p; ++j) mrow[j] += ail * brow[j];
    }
  }
  return m;
}

ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix m(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      if (aij == Complex(0.0, 0.0)) continue;
      for (int k = 0; k < b.rows(); ++k)
        for (int l = 0; l < b.cols(); ++l)
          m(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return m;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, int d1, int d2, int which) {
  require(d1 > 0 && d2 > 0, "partial_trace: dimensions must be positive");
  require(m.rows() == d1 * d2 && m.cols() == d1 * d2,
          "partial_trace: matrix shape does not match d1 * d2");
  require(which == 1 || which == 2, "partial_trace: `which` must be 1 or 2");
  if (which == 1) {
    ComplexMatrix r(d2, d2);
    for (int j = 0; j < d2; ++j)
      for (int jp = 0; jp < d2; ++jp) {
        Complex s = 0.0;
        for (int i = 0; i < d1; ++i) s += m(i * d2 + j, i * d2 + jp);
        r(j, jp) = s;
      }
    return r;
  }
  ComplexMatrix r(d1, d1);
  for (int i = 0; i < d1; ++i)
    for (int ip = 0; ip < d1; ++ip) {
      Complex s = 0.0;
      for (int j = 0; j < d2; ++j) s += m(i * d2 + j, ip * d2 + j);
      r(i, ip) = s;
    }
  return r;
}

namespace {

double offdiag_norm(const ComplexMatrix& a) {
  const int n = a.rows();
  double off = 0.0;
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q) off += 2.0 * std::norm(a(p, q));
  return std::sqrt(off);
}

// One cyclic Jacobi pass over the strict upper triangle. `vectors` may be
// null when only eigenvalues are wanted.
void jacobi_sweep(ComplexMatrix& a, ComplexMatrix* vectors) {
  const int n = a.rows();
  for (int p = 0; p < n; ++p) {
    for (int q = p + 1; q < n; ++q) {
      const Complex apq = a(p, q);
      const double g = std::abs(apq);
      if (g == 0.0) continue;
      // Factor the phase out of the pivot so the 2x2 problem is real, then
      // apply the classic stable rotation choice (smaller root of
      // t^2 + 2 t theta - 1 = 0).
      const Complex ph = apq / g;
      const double app = a(p, p).real();
      const double aqq = a(q, q).real();
      const double theta = (aqq - app) / (2.0 * g);
      double t;
      if (std::abs(theta) > 1e150) {
        t = 1.0 / (2.0 * theta);
      } else {
        t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
      }
      const double c = 1.0 / std::sqrt(t * t + 1.0);
      const double s = t * c;

      // Unitary G: G(p,p) = c*ph, G(p,q) = s*ph, G(q,p) = -s, G(q,q) = c,
      // identity elsewhere; update a <- G^* a G and vectors <- vectors G.
      a(p, p) = app - t * g;
      a(q, q) = aqq + t * g;
      a(p, q) = 0.0;
      a(q, p) = 0.0;
      for (int r = 0; r < n; ++r) {
        if (r == p || r == q) continue;
        const Complex arp = a(r, p);
        const Complex arq = a(r, q);
        a(r, p) = c * ph * arp - s * arq;
        a(r, q) = s * ph * arp + c * arq;
        a(p, r) = std::conj(a(r, p));
        a(q, r) = std::conj(a(r, q));
      }
      if (vectors) {
        ComplexMatrix& v = *vectors;
        for (int r = 0; r < n; ++r) {
          const Complex vrp = v(r, p);
          const Complex vrq = v(r, q);
          v(r, p) = c * ph * vrp - s * vrq;
          v(r, q) = s * ph * vrp + c * vrq;
        }
      }
    }
  }
}

HermEig jacobi_diagonalize(const ComplexMatrix& m, bool want_vectors) {
  require(m.square(), "herm_eig: matrix not square");
  const double tol = 1e-12 * (1.0 + m.max_abs());
  if (m.hermiticity_defect() > tol) {
    throw std::invalid_argument(
        "herm_eig: input not hermitian, defect " + std::to_string(m.hermiticity_defect()) +
        " exceeds " + std::to_string(tol));
  }

  const int n = m.rows();
  ComplexMatrix a = m.hermitized();
  ComplexMatrix v;
  if (want_vectors) v = ComplexMatrix::identity(n);

  const double scale = std::max(1.0, a.frobenius_norm());
  const int max_sweeps = 64;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (offdiag_norm(a) <= 1e-15 * scale) break;
    jacobi_sweep(a, want_vectors ? &v : nullptr);
  }

  HermEig out;
  out.values.resize(n);
  for (int i = 0; i < n; ++i) out.values[i] = a(i, i).real();

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return out.values[x] > out.values[y]; });

  std::vector<double> sorted(n);
  for (int i = 0; i < n; ++i) sorted[i] = out.values[order[i]];
  out.values = std::move(sorted);

  if (want_vectors) {
    out.vectors = ComplexMatrix(n, n);
    for (int c = 0; c < n; ++c)
      for (int r = 0; r < n; ++r) out.vectors(r, c) = v(r, order[c]);
  }
  return out;
}

}  // namespace

HermEig herm_eig(const ComplexMatrix& m) { return jacobi_diagonalize(m, true); }

std::vector<double> herm_eigenvalues(const ComplexMatrix& m) {
  return jacobi_diagonalize(m, false).values;
}

double trace_norm(const ComplexMatrix& m) {
  // Singular values via the eigenvalues of m^* m; avoids a dedicated SVD.
  const ComplexMatrix gram = (m.adjoint() * m).hermitized();
  double s = 0.0;
  for (double ev : herm_eigenvalues(gram)) s += std::sqrt(std::max(0.0, ev));
  return s;
}

double spectral_norm(const ComplexMatrix& m) {
  const ComplexMatrix gram = (m.adjoint() * m).hermitized();
  const std::vector<double> ev = herm_eigenvalues(gram);
  return ev.empty() ? 0.0 : std::sqrt(std::max(0.0, ev.front()));
}

ComplexMatrix mat_sqrt_psd(const ComplexMatrix& m) {
  HermEig eig = herm_eig(m);
  const int n = m.rows();
  const double top = eig.values.empty() ? 0.0 : std::abs(eig.values.front());
  const double tol = 1e-10 * std::max(1.0, top);
  ComplexMatrix r(n, n);
  for (int k = 0; k < n; ++k) {
    double ev = eig.values[k];
    if (ev < -tol) {
      throw std::invalid_argument("mat_sqrt_psd: eigenvalue " + std::to_string(ev) +
                                  " below PSD tolerance " + std::to_string(-tol));
    }
    ev = std::sqrt(std::max(0.0, ev));
    for (int i = 0; i < n; ++i) {
      const Complex vi = ev * eig.vectors(i, k);
      for (int j = 0; j < n; ++j) r(i, j) += vi * std::conj(eig.vectors(j, k));
    }
  }
  return r.hermitized();
}

ComplexMatrix cholesky(const ComplexMatrix& m) {
  require(m.square(), "cholesky: matrix not square");
  const int n = m.rows();
  ComplexMatrix l(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      Complex s = m(i, j);
      const Complex* li = l.data() + static_cast<size_t>(i) * n;
      const Complex* lj = l.data() + static_cast<size_t>(j) * n;
      for (int k = 0; k < j; ++k) s -= li[k] * std::conj(lj[k]);
      if (i == j) {
        const double diag = s.real();
        if (diag <= 0.0) throw std::runtime_error("cholesky: matrix not positive definite");
        l(i, i) = std::sqrt(diag);
      } else {
        l(i, j) = s / l(j, j);
      }
    }
  }
  return l;
}

ComplexMatrix solve_lower(const ComplexMatrix& l, const ComplexMatrix& b) {
  require(l.square() && l.rows() == b.rows(), "solve_lower: shape mismatch");
  const int n = l.rows(), m = b.cols();
  ComplexMatrix x = b;
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < i; ++k) {
      const Complex lik = l(i, k);
      if (lik == Complex(0.0, 0.0)) continue;
      for (int c = 0; c < m; ++c) x(i, c) -= lik * x(k, c);
    }
    const Complex d = l(i, i);
    for (int c = 0; c < m; ++c) x(i, c) /= d;
  }
  return x;
}

ComplexMatrix solve_lower_adjoint(const ComplexMatrix& l, const ComplexMatrix& b) {
  require(l.square() && l.rows() == b.rows(), "solve_lower_adjoint: shape mismatch");
  const int n = l.rows(), m = b.cols();
  ComplexMatrix x = b;
  for (int i = n - 1; i >= 0; --i) {
    for (int k = i + 1; k < n; ++k) {
      const Complex lki = std::conj(l(k, i));
      if (lki == Complex(0.0, 0.0)) continue;
      for (int c = 0; c < m; ++c) x(i, c) -= lki * x(k, c);
    }
    const Complex d = std::conj(l(i, i));
    for (int c = 0; c < m; ++c) x(i, c) /= d;
  }
  return x;
}

ComplexMatrix psd_inverse(const ComplexMatrix& m) {
  const ComplexMatrix l = cholesky(m);
  const ComplexMatrix y = solve_lower(l, ComplexMatrix::identity(m.rows()));
  return solve_lower_adjoint(l, y).hermitized();
}

}  // namespace idt
