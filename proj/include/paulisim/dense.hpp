#pragma once
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "paulisim/errors.hpp"
#include "paulisim/pauli.hpp"

namespace psim {

// dense row-major complex matrix; dimensions stay small (<= 256)
struct Matrix {
  std::size_t rows = 0, cols = 0;
  std::vector<cplx> a;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}

  cplx& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  static Matrix identity(std::size_t n);
};

Matrix operator*(const Matrix& x, const Matrix& y);
Matrix operator+(const Matrix& x, const Matrix& y);
Matrix operator-(const Matrix& x, const Matrix& y);
Matrix operator*(cplx s, const Matrix& x);
Matrix dagger(const Matrix& x);
Matrix kron(const Matrix& x, const Matrix& y);
cplx trace(const Matrix& x);
double frobenius_norm(const Matrix& x);

// dense operator of a Pauli word, phase included
Matrix pauli_matrix(const PauliWord& w);

// Basis-state indices are big-endian: qubit 0 is the most significant bit,
// so "1100" on 4 qubits is index 12.
struct StateVector {
  uint32_t n_qubits = 0;
  std::vector<cplx> amps;

  StateVector() = default;
  explicit StateVector(uint32_t n) : n_qubits(n), amps(std::size_t(1) << n) {}
  std::size_t dim() const { return amps.size(); }
  double norm() const;
};

StateVector basis_state(uint32_t n_qubits, uint64_t index);
StateVector basis_state(const std::string& bits);
cplx inner(const StateVector& x, const StateVector& y);
// |<x|y>|^2
double overlap(const StateVector& x, const StateVector& y);
StateVector apply(const Matrix& u, const StateVector& v);

struct DensityMatrix {
  uint32_t n_qubits = 0;
  Matrix m;

  DensityMatrix() = default;
  explicit DensityMatrix(uint32_t n) : n_qubits(n), m(std::size_t(1) << n, std::size_t(1) << n) {}
  std::size_t dim() const { return m.rows; }
  // Hermitian within 1e-10, trace 1 within 1e-10, eigenvalues >= -1e-9
  void validate() const;
};

DensityMatrix projector(const StateVector& v);
// <x| rho |x>
double fidelity_with_pure(const DensityMatrix& rho, const StateVector& x);
double trace_distance(const DensityMatrix& x, const DensityMatrix& y);

struct EigResult {
  std::vector<double> values;  // descending
  Matrix vectors;              // columns, same order
};

// cyclic complex Jacobi; input Hermitian within 1e-8
EigResult hermitian_eig(const Matrix& m);

// marginal on `keep` (ascending qubit indices), qubit order preserved
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<uint32_t>& keep);

}  // namespace psim
