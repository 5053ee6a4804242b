#include "idt/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace idt {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

void require_hermitian(const ComplexMatrix& m, const std::string& what) {
  const double tol = 1e-12 * (1.0 + m.max_abs());
  if (!m.square() || m.hermiticity_defect() > tol) {
    throw std::invalid_argument(what + ": not hermitian (defect " +
                                std::to_string(m.hermiticity_defect()) + ")");
  }
}

double min_eigenvalue(const ComplexMatrix& m) {
  const std::vector<double> ev = herm_eigenvalues(m);
  return ev.empty() ? 0.0 : ev.back();
}

// Row-major vectorization of a dout x din matrix; index (a, i) -> a * din + i.
ComplexMatrix flatten(const ComplexMatrix& k) {
  ComplexMatrix v(k.rows() * k.cols(), 1);
  for (int a = 0; a < k.rows(); ++a)
    for (int i = 0; i < k.cols(); ++i) v(a * k.cols() + i, 0) = k(a, i);
  return v;
}

void add_outer_product(ComplexMatrix& target, const ComplexMatrix& v) {
  const int n = v.rows();
  for (int r = 0; r < n; ++r) {
    const Complex vr = v(r, 0);
    if (vr == Complex(0.0, 0.0)) continue;
    for (int c = 0; c < n; ++c) target(r, c) += vr * std::conj(v(c, 0));
  }
}

}  // namespace

void DensityMatrix::validate() const {
  require(dim >= 1, "density matrix: dim must be >= 1");
  require(rho.rows() == dim && rho.cols() == dim, "density matrix: shape does not match dim");
  require_hermitian(rho, "density matrix");
  const double tr = rho.trace().real();
  if (std::abs(tr - 1.0) > kTraceTol) {
    throw std::invalid_argument("density matrix: trace " + std::to_string(tr) +
                                " deviates from 1 beyond 1e-10");
  }
  const double mn = min_eigenvalue(rho);
  if (mn < -kPsdTolState) {
    throw std::invalid_argument("density matrix: eigenvalue " + std::to_string(mn) +
                                " below -1e-10");
  }
}

void Povm::validate() const {
  require(dim >= 1, "povm: dim must be >= 1");
  require(!effects.empty(), "povm: needs at least one effect");
  ComplexMatrix sum(dim, dim);
  for (size_t i = 0; i < effects.size(); ++i) {
    const ComplexMatrix& e = effects[i];
    require(e.rows() == dim && e.cols() == dim,
            "povm: effect " + std::to_string(i) + " has wrong shape");
    require_hermitian(e, "povm effect " + std::to_string(i));
    const double mn = min_eigenvalue(e);
    if (mn < -kPsdTolState) {
      throw std::invalid_argument("povm: effect " + std::to_string(i) + " eigenvalue " +
                                  std::to_string(mn) + " below -1e-10");
    }
    sum += e;
  }
  sum -= ComplexMatrix::identity(dim);
  const double dev = spectral_norm(sum);
  if (dev > kSumTol) {
    throw std::invalid_argument("povm: effects sum deviates from identity by " +
                                std::to_string(dev) + " (allowed 1e-9)");
  }
}

void Channel::validate() const {
  require(din >= 1 && dout >= 1, "channel: dimensions must be >= 1");
  require(choi.rows() == dout * din && choi.cols() == dout * din,
          "channel: Choi shape does not match dout * din");
  require_hermitian(choi, "channel Choi matrix");
  const double mn = min_eigenvalue(choi);
  if (mn < -kPsdTolChoi) {
    throw std::invalid_argument("channel: Choi eigenvalue " + std::to_string(mn) +
                                " below -1e-9 (not CP)");
  }
  const ComplexMatrix marg = partial_trace(choi, dout, din, 1) - ComplexMatrix::identity(din);
  const double dev = spectral_norm(marg);
  if (dev > kSumTol) {
    throw std::invalid_argument("channel: ||tr_1 J - 1|| = " + std::to_string(dev) +
                                " exceeds 1e-9 (not TP)");
  }
}

void Instrument::validate() const {
  require(dim >= 1, "instrument: dim must be >= 1");
  require(!branch_choi.empty(), "instrument: needs at least one branch");
  ComplexMatrix total(dim * dim, dim * dim);
  for (size_t i = 0; i < branch_choi.size(); ++i) {
    const ComplexMatrix& j = branch_choi[i];
    require(j.rows() == dim * dim && j.cols() == dim * dim,
            "instrument: branch " + std::to_string(i) + " Choi has wrong shape");
    require_hermitian(j, "instrument branch " + std::to_string(i));
    const double mn = min_eigenvalue(j);
    if (mn < -kPsdTolChoi) {
      throw std::invalid_argument("instrument: branch " + std::to_string(i) + " eigenvalue " +
                                  std::to_string(mn) + " below -1e-9 (not CP)");
    }
    total += j;
  }
  const ComplexMatrix marg = partial_trace(total, dim, dim, 1) - ComplexMatrix::identity(dim);
  const double dev = spectral_norm(marg);
  if (dev > kSumTol) {
    throw std::invalid_argument("instrument: branch sum violates trace preservation by " +
                                std::to_string(dev) + " (allowed 1e-9)");
  }
}

ComplexMatrix choi_from_kraus(const std::vector<ComplexMatrix>& kraus) {
  require(!kraus.empty(), "choi_from_kraus: empty Kraus list");
  const int dout = kraus.front().rows();
  const int din = kraus.front().cols();
  ComplexMatrix j(dout * din, dout * din);
  for (const ComplexMatrix& k : kraus) {
    require(k.rows() == dout && k.cols() == din, "choi_from_kraus: inconsistent Kraus shapes");
    add_outer_product(j, flatten(k));
  }
  return j;
}

Channel channel_from_kraus(const std::vector<ComplexMatrix>& kraus) {
  Channel t;
  t.dout = kraus.front().rows();
  t.din = kraus.front().cols();
  t.choi = choi_from_kraus(kraus);
  return t;
}

Channel identity_channel(int d) {
  Channel t;
  t.din = t.dout = d;
  t.choi = ComplexMatrix(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) t.choi(i * d + i, j * d + j) = 1.0;
  return t;
}

Channel depolarizing_channel(int d) {
  Channel t;
  t.din = t.dout = d;
  t.choi = ComplexMatrix(d * d, d * d);
  for (int a = 0; a < d; ++a)
    for (int i = 0; i < d; ++i) t.choi(a * d + i, a * d + i) = 1.0 / d;
  return t;
}

Channel dephasing_channel(int d) {
  std::vector<ComplexMatrix> kraus;
  for (int i = 0; i < d; ++i) {
    ComplexMatrix k(d, d);
    k(i, i) = 1.0;
    kraus.push_back(k);
  }
  return channel_from_kraus(kraus);
}

ComplexMatrix apply_channel(const Channel& t, const ComplexMatrix& x) {
  require(x.rows() == t.din && x.cols() == t.din, "apply_channel: input shape mismatch");
  ComplexMatrix out(t.dout, t.dout);
  for (int a = 0; a < t.dout; ++a)
    for (int b = 0; b < t.dout; ++b) {
      Complex s = 0.0;
      for (int j = 0; j < t.din; ++j)
        for (int k = 0; k < t.din; ++k) s += t.choi(a * t.din + j, b * t.din + k) * x(j, k);
      out(a, b) = s;
    }
  return out;
}

Channel channel_compose(const Channel& t, const Channel& s) {
  require(t.din == s.dout, "channel_compose: inner dimension mismatch");
  Channel c;
  c.din = s.din;
  c.dout = t.dout;
  c.choi = ComplexMatrix(t.dout * s.din, t.dout * s.din);
  // Apply t to the output-factor blocks of J(s).
  ComplexMatrix block(s.dout, s.dout);
  for (int k = 0; k < s.din; ++k)
    for (int l = 0; l < s.din; ++l) {
      for (int a = 0; a < s.dout; ++a)
        for (int b = 0; b < s.dout; ++b) block(a, b) = s.choi(a * s.din + k, b * s.din + l);
      const ComplexMatrix mapped = apply_channel(t, block);
      for (int x = 0; x < t.dout; ++x)
        for (int y = 0; y < t.dout; ++y) c.choi(x * s.din + k, y * s.din + l) = mapped(x, y);
    }
  return c;
}

Channel conjugate_channel(const Channel& t, const ComplexMatrix& u) {
  require(t.din == t.dout, "conjugate_channel: channel must be square");
  require(u.rows() == t.din && u.cols() == t.din, "conjugate_channel: unitary shape mismatch");
  // Kraus conjugation K -> U K U^* turns the Choi into
  // (U (x) conj(U)) J (U (x) conj(U))^*.
  const ComplexMatrix w = kron(u, u.conjugate());
  Channel c = t;
  c.choi = (w * t.choi * w.adjoint()).hermitized();
  return c;
}

Povm instrument_povm(const Instrument& inst) {
  Povm e;
  e.dim = inst.dim;
  for (const ComplexMatrix& j : inst.branch_choi)
    e.effects.push_back(partial_trace(j, inst.dim, inst.dim, 1).transpose().hermitized());
  return e;
}

Channel instrument_channel(const Instrument& inst) {
  Channel t;
  t.din = t.dout = inst.dim;
  t.choi = ComplexMatrix(inst.dim * inst.dim, inst.dim * inst.dim);
  for (const ComplexMatrix& j : inst.branch_choi) t.choi += j;
  return t;
}

Instrument lueders_instrument(const Povm& e) {
  Instrument inst;
  inst.dim = e.dim;
  for (const ComplexMatrix& effect : e.effects)
    inst.branch_choi.push_back(choi_from_kraus({mat_sqrt_psd(effect)}));
  return inst;
}

double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
  require(a.dim == b.dim, "fidelity: dimension mismatch");
  const double f = trace_norm(mat_sqrt_psd(a.rho) * mat_sqrt_psd(b.rho));
  return std::clamp(f, 0.0, 1.0);
}

ComplexMatrix random_unitary(int d, Rng& rng) {
  require(d >= 1, "random_unitary: d must be >= 1");
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix g(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) g(r, c) = Complex(gauss(rng), gauss(rng));

  // Modified Gram-Schmidt with one reorthogonalization pass. QR of a complex
  // Ginibre matrix with positive diagonal R gives a Haar unitary.
  ComplexMatrix q = g;
  for (int c = 0; c < d; ++c) {
    for (int pass = 0; pass < 2; ++pass) {
      for (int p = 0; p < c; ++p) {
        Complex dot = 0.0;
        for (int r = 0; r < d; ++r) dot += std::conj(q(r, p)) * q(r, c);
        for (int r = 0; r < d; ++r) q(r, c) -= dot * q(r, p);
      }
    }
    double nrm = 0.0;
    for (int r = 0; r < d; ++r) nrm += std::norm(q(r, c));
    nrm = std::sqrt(nrm);
    for (int r = 0; r < d; ++r) q(r, c) /= nrm;
  }
  return q;
}

ComplexMatrix random_pure(int d, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix v(d, 1);
  double nrm = 0.0;
  do {
    nrm = 0.0;
    for (int r = 0; r < d; ++r) {
      v(r, 0) = Complex(gauss(rng), gauss(rng));
      nrm += std::norm(v(r, 0));
    }
    nrm = std::sqrt(nrm);
  } while (nrm == 0.0);
  for (int r = 0; r < d; ++r) v(r, 0) /= nrm;
  return v;
}

DensityMatrix random_density(int d, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix g(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) g(r, c) = Complex(gauss(rng), gauss(rng));
  ComplexMatrix rho = (g * g.adjoint()).hermitized();
  rho *= 1.0 / rho.trace().real();
  DensityMatrix out;
  out.dim = d;
  out.rho = rho.hermitized();
  return out;
}

Instrument random_instrument(int d, int m, Rng& rng) {
  require(d >= 1 && m >= 1, "random_instrument: dimensions must be >= 1");
  // First d columns of a Haar unitary on C^d (x) C^m form a Haar isometry;
  // branch i keeps the rows that pair with measurement outcome i.
  const ComplexMatrix u = random_unitary(d * m, rng);
  Instrument inst;
  inst.dim = d;
  for (int i = 0; i < m; ++i) {
    ComplexMatrix k(d, d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) k(a, b) = u(a * m + i, b);
    inst.branch_choi.push_back(choi_from_kraus({k}));
  }
  return inst;
}

Povm random_povm(int d, int m, Rng& rng) { return instrument_povm(random_instrument(d, m, rng)); }

}  // namespace idt
