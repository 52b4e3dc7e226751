#include "paulisim/dense.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

namespace psim {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix operator*(const Matrix& x, const Matrix& y) {
  if (x.cols != y.rows) throw value_error("matrix product: shape mismatch");
  Matrix r(x.rows, y.cols);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t k = 0; k < x.cols; ++k) {
      const cplx xik = x(i, k);
      if (xik == cplx(0.0)) continue;
      for (std::size_t j = 0; j < y.cols; ++j) r(i, j) += xik * y(k, j);
    }
  return r;
}

Matrix operator+(const Matrix& x, const Matrix& y) {
  if (x.rows != y.rows || x.cols != y.cols) throw value_error("matrix sum: shape mismatch");
  Matrix r(x.rows, x.cols);
  for (std::size_t i = 0; i < x.a.size(); ++i) r.a[i] = x.a[i] + y.a[i];
  return r;
}

Matrix operator-(const Matrix& x, const Matrix& y) {
  if (x.rows != y.rows || x.cols != y.cols) throw value_error("matrix difference: shape mismatch");
  Matrix r(x.rows, x.cols);
  for (std::size_t i = 0; i < x.a.size(); ++i) r.a[i] = x.a[i] - y.a[i];
  return r;
}

Matrix operator*(cplx s, const Matrix& x) {
  Matrix r(x.rows, x.cols);
  for (std::size_t i = 0; i < x.a.size(); ++i) r.a[i] = s * x.a[i];
  return r;
}

Matrix dagger(const Matrix& x) {
  Matrix r(x.cols, x.rows);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t j = 0; j < x.cols; ++j) r(j, i) = std::conj(x(i, j));
  return r;
}

Matrix kron(const Matrix& x, const Matrix& y) {
  Matrix r(x.rows * y.rows, x.cols * y.cols);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t j = 0; j < x.cols; ++j) {
      const cplx xij = x(i, j);
      if (xij == cplx(0.0)) continue;
      for (std::size_t k = 0; k < y.rows; ++k)
        for (std::size_t l = 0; l < y.cols; ++l) r(i * y.rows + k, j * y.cols + l) = xij * y(k, l);
    }
  return r;
}

cplx trace(const Matrix& x) {
  if (x.rows != x.cols) throw value_error("trace: matrix not square");
  cplx t = 0.0;
  for (std::size_t i = 0; i < x.rows; ++i) t += x(i, i);
  return t;
}

double frobenius_norm(const Matrix& x) {
  double s = 0.0;
  for (const cplx& v : x.a) s += std::norm(v);
  return std::sqrt(s);
}

Matrix pauli_matrix(const PauliWord& w) {
  const std::size_t d = std::size_t(1) << w.n_qubits;
  Matrix m(d, d);
  // P|c> = i^{#Y} (-1)^{popcount(c & z)} |c ^ x>
  int ys = 0;
  for (uint32_t q = 0; q < w.n_qubits; ++q)
    if (w.letter(q) == 'Y') ++ys;
  static const cplx kPhases[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const cplx base = kPhases[(w.phase_pow + ys) % 4];
  for (uint64_t c = 0; c < d; ++c) {
    const double sign = (std::popcount(c & w.z_bits) & 1) ? -1.0 : 1.0;
    m(c ^ w.x_bits, c) = base * sign;
  }
  return m;
}

double StateVector::norm() const {
  double s = 0.0;
  for (const cplx& v : amps) s += std::norm(v);
  return std::sqrt(s);
}

StateVector basis_state(uint32_t n_qubits, uint64_t index) {
  StateVector v(n_qubits);
  if (index >= v.dim()) throw value_error("basis_state: index out of range");
  v.amps[index] = 1.0;
  return v;
}

StateVector basis_state(const std::string& bits) {
  if (bits.empty() || bits.size() > 30) throw value_error("basis_state: bad bitstring length");
  uint64_t idx = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw value_error("basis_state: bitstring must be 0/1");
    idx = (idx << 1) | uint64_t(c - '0');
  }
  return basis_state(uint32_t(bits.size()), idx);
}

cplx inner(const StateVector& x, const StateVector& y) {
  if (x.n_qubits != y.n_qubits) throw value_error("inner: qubit count mismatch");
  cplx s = 0.0;
  for (std::size_t i = 0; i < x.dim(); ++i) s += std::conj(x.amps[i]) * y.amps[i];
  return s;
}

double overlap(const StateVector& x, const StateVector& y) { return std::norm(inner(x, y)); }

StateVector apply(const Matrix& u, const StateVector& v) {
  if (u.rows != v.dim() || u.cols != v.dim()) throw value_error("apply: shape mismatch");
  StateVector r(v.n_qubits);
  for (std::size_t i = 0; i < u.rows; ++i) {
    cplx s = 0.0;
    for (std::size_t j = 0; j < u.cols; ++j) s += u(i, j) * v.amps[j];
    r.amps[i] = s;
  }
  return r;
}

void DensityMatrix::validate() const {
  if (m.rows != dim() || m.cols != dim()) throw value_error("density matrix: bad shape");
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = i; j < m.cols; ++j)
      if (std::abs(m(i, j) - std::conj(m(j, i))) > 1e-10)
        throw numerical_error("density matrix: not Hermitian");
  if (std::abs(trace(m) - cplx(1.0)) > 1e-10) throw numerical_error("density matrix: trace != 1");
  const EigResult eig = hermitian_eig(m);
  for (double v : eig.values)
    if (v < -1e-9) throw numerical_error("density matrix: negative eigenvalue");
}

DensityMatrix projector(const StateVector& v) {
  DensityMatrix rho(v.n_qubits);
  for (std::size_t i = 0; i < v.dim(); ++i)
    for (std::size_t j = 0; j < v.dim(); ++j) rho.m(i, j) = v.amps[i] * std::conj(v.amps[j]);
  return rho;
}

double fidelity_with_pure(const DensityMatrix& rho, const StateVector& x) {
  if (rho.n_qubits != x.n_qubits) throw value_error("fidelity: qubit count mismatch");
  cplx s = 0.0;
  for (std::size_t i = 0; i < rho.dim(); ++i)
    for (std::size_t j = 0; j < rho.dim(); ++j) s += std::conj(x.amps[i]) * rho.m(i, j) * x.amps[j];
  return s.real();
}

double trace_distance(const DensityMatrix& x, const DensityMatrix& y) {
  const EigResult eig = hermitian_eig(x.m - y.m);
  double s = 0.0;
  for (double v : eig.values) s += std::abs(v);
  return 0.5 * s;
}

EigResult hermitian_eig(const Matrix& m) {
  if (m.rows != m.cols) throw value_error("hermitian_eig: matrix not square");
  if (m.rows > 128) throw value_error("hermitian_eig: dimension above 128");
  const std::size_t n = m.rows;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      if (std::abs(m(i, j) - std::conj(m(j, i))) > 1e-8)
        throw value_error("hermitian_eig: input not Hermitian");

  // work on the Hermitized average so roundoff asymmetry cannot bias the sweep
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
  Matrix v = Matrix::identity(n);

  const double tol = 1e-12;
  for (int sweep = 0; sweep < 100 && n > 1; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::abs(a(p, q)));
    if (off < tol) break;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const cplx phase = apq / mag;  // e^{i beta}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (app - aqq) / (2.0 * mag);  // cot(2 theta)
        double t;
        if (std::abs(tau) > 1e12) {
          t = 1.0 / (2.0 * tau);
        } else {
          const double sgn = tau >= 0.0 ? 1.0 : -1.0;
          t = sgn / (std::abs(tau) + std::sqrt(tau * tau + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // columns: A <- A J with J[p][p]=c, J[p][q]=-s e^{i b}, J[q][p]=s e^{-i b}, J[q][q]=c
        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp + s * std::conj(phase) * akq;
          a(k, q) = -s * phase * akp + c * akq;
          const cplx vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp + s * std::conj(phase) * vkq;
          v(k, q) = -s * phase * vkp + c * vkq;
        }
        // rows: A <- J^dag A
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk + s * phase * aqk;
          a(q, k) = -s * std::conj(phase) * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
  }
  double off = 0.0;
  for (std::size_t p = 0; p + 1 < n; ++p)
    for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::abs(a(p, q)));
  if (off > 1e-8) throw numerical_error("hermitian_eig: Jacobi sweep did not converge");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t(0));
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return a(x, x).real() > a(y, y).real(); });
  EigResult r;
  r.values.resize(n);
  r.vectors = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    r.values[j] = a(order[j], order[j]).real();
    for (std::size_t i = 0; i < n; ++i) r.vectors(i, j) = v(i, order[j]);
  }
  return r;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<uint32_t>& keep) {
  if (keep.empty()) throw value_error("partial_trace: keep set empty");
  std::vector<uint32_t> ks = keep;
  std::sort(ks.begin(), ks.end());
  if (std::adjacent_find(ks.begin(), ks.end()) != ks.end())
    throw value_error("partial_trace: duplicate qubit in keep set");
  for (uint32_t q : ks)
    if (q >= rho.n_qubits) throw value_error("partial_trace: qubit out of range");

  const uint32_t n = rho.n_qubits;
  const uint32_t k = uint32_t(ks.size());
  std::vector<uint32_t> traced;
  for (uint32_t q = 0; q < n; ++q)
    if (!std::binary_search(ks.begin(), ks.end(), q)) traced.push_back(q);

  const auto mask = [n](uint32_t q) { return uint64_t(1) << (n - 1 - q); };
  const auto omask = [k](uint32_t r) { return uint64_t(1) << (k - 1 - r); };

  DensityMatrix out(k);
  const uint64_t od = uint64_t(1) << k;
  const uint64_t td = uint64_t(1) << traced.size();
  for (uint64_t oi = 0; oi < od; ++oi)
    for (uint64_t oj = 0; oj < od; ++oj) {
      cplx s = 0.0;
      for (uint64_t t = 0; t < td; ++t) {
        uint64_t fi = 0, fj = 0;
        for (uint32_t r = 0; r < k; ++r) {
          if (oi & omask(r)) fi |= mask(ks[r]);
          if (oj & omask(r)) fj |= mask(ks[r]);
        }
        for (std::size_t r = 0; r < traced.size(); ++r)
          if (t & (uint64_t(1) << r)) {
            fi |= mask(traced[r]);
            fj |= mask(traced[r]);
          }
        s += rho.m(fi, fj);
      }
      out.m(oi, oj) = s;
    }
  return out;
}

}  // namespace psim
