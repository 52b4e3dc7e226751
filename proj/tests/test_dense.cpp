#include <cmath>

#include "doctest.h"
#include "paulisim/dense.hpp"
#include "paulisim/errors.hpp"
#include "paulisim/pauli.hpp"
#include "paulisim/rng.hpp"
#include "test_util.hpp"

using namespace psim;
using test::max_abs_diff;
using test::random_word;

namespace {

Matrix random_hermitian(Rng& rng, std::size_t d) {
  Matrix m(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    m(i, i) = rng.uniform(-1, 1);
    for (std::size_t j = i + 1; j < d; ++j) {
      m(i, j) = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
      m(j, i) = std::conj(m(i, j));
    }
  }
  return m;
}

}  // namespace

TEST_CASE("matrix algebra basics") {
  Matrix id = Matrix::identity(3);
  CHECK(trace(id) == cplx(3, 0));
  Rng rng(1);
  Matrix a = random_hermitian(rng, 3), b = random_hermitian(rng, 3);
  CHECK(max_abs_diff(dagger(a * b), dagger(b) * dagger(a)) < 1e-14);
  CHECK(max_abs_diff(a * id, a) == 0.0);
  CHECK(std::abs(trace(a + b) - (trace(a) + trace(b))) < 1e-14);
  CHECK(frobenius_norm(a - a) == 0.0);
}

TEST_CASE("kron dimensions and pauli_matrix consistency") {
  Matrix x = pauli_matrix(parse_word("X", 1));
  Matrix z = pauli_matrix(parse_word("Z", 1));
  Matrix xz = kron(x, z);
  CHECK(xz.rows == 4);
  CHECK(max_abs_diff(xz, pauli_matrix(parse_word("XZ", 2))) == 0.0);
  // qubit 0 is the left (most significant) Kronecker factor
  Matrix zx = pauli_matrix(parse_word("ZX", 2));
  CHECK(max_abs_diff(zx, kron(z, x)) == 0.0);
  CHECK(max_abs_diff(zx, xz) > 0.5);
}

TEST_CASE("basis_state conventions") {
  StateVector v = basis_state("1100");
  CHECK(v.n_qubits == 4);
  CHECK(v.amps[12] == cplx(1, 0));
  CHECK(v.norm() == doctest::Approx(1.0));
  StateVector w = basis_state(4, 12);
  for (std::size_t i = 0; i < v.dim(); ++i) CHECK(v.amps[i] == w.amps[i]);
  StateVector one = basis_state("10");
  CHECK(one.amps[2] == cplx(1, 0));
  CHECK_THROWS_AS(basis_state("10a1"), value_error);
  CHECK_THROWS_AS(basis_state(2, 4), value_error);
}

TEST_CASE("inner, overlap, apply") {
  StateVector z0 = basis_state("0"), z1 = basis_state("1");
  CHECK(inner(z0, z1) == cplx(0, 0));
  CHECK(overlap(z0, z0) == doctest::Approx(1.0));
  Matrix h(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  h(0, 0) = s; h(0, 1) = s; h(1, 0) = s; h(1, 1) = -s;
  StateVector plus = apply(h, z0);
  CHECK(std::abs(plus.amps[0] - cplx(s, 0)) < 1e-15);
  CHECK(std::abs(plus.amps[1] - cplx(s, 0)) < 1e-15);
  CHECK(overlap(plus, z0) == doctest::Approx(0.5));
}

TEST_CASE("projector and fidelity_with_pure") {
  StateVector v = basis_state("01");
  DensityMatrix rho = projector(v);
  CHECK(std::abs(trace(rho.m) - cplx(1, 0)) < 1e-15);
  CHECK(fidelity_with_pure(rho, v) == doctest::Approx(1.0));
  // mixed case: fidelity is <psi|rho|psi>
  DensityMatrix mix(1);
  mix.m(0, 0) = 0.7;
  mix.m(1, 1) = 0.3;
  CHECK(fidelity_with_pure(mix, basis_state("0")) == doctest::Approx(0.7));
}

TEST_CASE("density matrix validate") {
  DensityMatrix rho(1);
  rho.m(0, 0) = 0.5;
  rho.m(1, 1) = 0.5;
  CHECK_NOTHROW(rho.validate());
  rho.m(1, 1) = 0.6;  // trace 1.1
  CHECK_THROWS_AS(rho.validate(), numerical_error);
  DensityMatrix nh(1);
  nh.m(0, 0) = 1.0;
  nh.m(0, 1) = cplx(0, 0.5);
  nh.m(1, 0) = cplx(0, 0.5);  // not Hermitian: should be conj
  CHECK_THROWS_AS(nh.validate(), numerical_error);
  DensityMatrix neg(1);  // trace 1, Hermitian, but indefinite
  neg.m(0, 0) = 1.5;
  neg.m(1, 1) = -0.5;
  CHECK_THROWS_AS(neg.validate(), numerical_error);
}

TEST_CASE("trace distance endpoints") {
  DensityMatrix a = projector(basis_state("0"));
  DensityMatrix b = projector(basis_state("1"));
  CHECK(trace_distance(a, a) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(trace_distance(a, b) == doctest::Approx(1.0));
  DensityMatrix mixed(1);
  mixed.m(0, 0) = 0.5;
  mixed.m(1, 1) = 0.5;
  CHECK(trace_distance(a, mixed) == doctest::Approx(0.5));
}

TEST_CASE("partial trace of product and entangled states") {
  // |10>: keeping qubit 0 gives |1><1|, keeping qubit 1 gives |0><0|
  DensityMatrix rho = projector(basis_state("10"));
  DensityMatrix q0 = partial_trace(rho, {0});
  CHECK(std::abs(q0.m(1, 1) - cplx(1, 0)) < 1e-15);
  DensityMatrix q1 = partial_trace(rho, {1});
  CHECK(std::abs(q1.m(0, 0) - cplx(1, 0)) < 1e-15);

  // Bell state: each marginal is maximally mixed
  StateVector bell(2);
  bell.amps[0] = 1.0 / std::sqrt(2.0);
  bell.amps[3] = 1.0 / std::sqrt(2.0);
  DensityMatrix rb = projector(bell);
  for (uint32_t q : {0u, 1u}) {
    DensityMatrix red = partial_trace(rb, {q});
    CHECK(std::abs(red.m(0, 0) - cplx(0.5, 0)) < 1e-12);
    CHECK(std::abs(red.m(1, 1) - cplx(0.5, 0)) < 1e-12);
    CHECK(std::abs(red.m(0, 1)) < 1e-12);
  }

  // keep set equal to all qubits is the identity operation
  DensityMatrix same = partial_trace(rb, {0, 1});
  CHECK(max_abs_diff(same.m, rb.m) == 0.0);

  CHECK_THROWS_AS(partial_trace(rb, {}), value_error);
  CHECK_THROWS_AS(partial_trace(rb, {0, 0}), value_error);
  CHECK_THROWS_AS(partial_trace(rb, {2}), value_error);
}

TEST_CASE("eigensolver on known spectra") {
  {
    Matrix x = pauli_matrix(parse_word("X", 1));
    EigResult e = hermitian_eig(x);
    REQUIRE(e.values.size() == 2);
    CHECK(e.values[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(e.values[1] == doctest::Approx(-1.0).epsilon(1e-12));
  }
  {
    Matrix d(2, 2);
    d(0, 0) = 0.1;
    d(1, 1) = 0.9;
    EigResult e = hermitian_eig(d);
    CHECK(e.values[0] == doctest::Approx(0.9));  // descending order
    CHECK(e.values[1] == doctest::Approx(0.1));
    CHECK(std::abs(e.vectors(1, 0)) == doctest::Approx(1.0));  // dominant vector is |1>
  }
}

TEST_CASE("eigensolver reconstructs random Hermitian matrices") {
  Rng rng(77);
  for (std::size_t d : {2ul, 5ul, 16ul}) {
    Matrix m = random_hermitian(rng, d);
    EigResult e = hermitian_eig(m);
    // V Lambda V^dag == M and V^dag V == I
    Matrix lam(d, d);
    for (std::size_t i = 0; i < d; ++i) lam(i, i) = e.values[i];
    CHECK(max_abs_diff(e.vectors * lam * dagger(e.vectors), m) < 1e-10);
    CHECK(max_abs_diff(dagger(e.vectors) * e.vectors, Matrix::identity(d)) < 1e-10);
    for (std::size_t i = 1; i < d; ++i) CHECK(e.values[i - 1] >= e.values[i]);
  }
}

TEST_CASE("eigensolver input guards") {
  Matrix rect(2, 3);
  CHECK_THROWS_AS(hermitian_eig(rect), value_error);
  Matrix big(129, 129);
  CHECK_THROWS_AS(hermitian_eig(big), value_error);
  Matrix nonherm(2, 2);
  nonherm(0, 1) = cplx(1, 0);
  nonherm(1, 0) = cplx(0.5, 0);
  CHECK_THROWS_AS(hermitian_eig(nonherm), value_error);
}
