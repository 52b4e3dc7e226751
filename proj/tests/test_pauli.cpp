#include <sstream>

#include "doctest.h"
#include "paulisim/errors.hpp"
#include "paulisim/pauli.hpp"
#include "test_util.hpp"

using namespace psim;
using test::max_abs_diff;
using test::random_word;
using test::rotation_matrix;
using test::sum_matrix;

TEST_CASE("letter accessors and symplectic layout") {
  PauliWord w = parse_word("IXYZ", 4);
  CHECK(w.letter(0) == 'I');
  CHECK(w.letter(1) == 'X');
  CHECK(w.letter(2) == 'Y');
  CHECK(w.letter(3) == 'Z');
  // qubit 0 is the most significant bit
  CHECK(w.qubit_mask(0) == 0b1000);
  CHECK(w.qubit_mask(3) == 0b0001);
  CHECK(w.x_bits == 0b0110);
  CHECK(w.z_bits == 0b0011);
  CHECK(w.weight() == 3);
  CHECK(w.str() == "IXYZ");
  CHECK(PauliWord::identity(4).is_identity());

  PauliWord e = PauliWord::identity(4);
  e.set_letter(2, 'Y');
  CHECK(e.letter(2) == 'Y');
  e.set_letter(2, 'I');
  CHECK(e.is_identity());
}

TEST_CASE("parse dense and sparse forms agree") {
  CHECK(parse_word("YXXX", 4) == parse_word("Y0 X1 X2 X3", 4));
  CHECK(parse_word("IIZI", 4) == parse_word("Z2", 4));
  CHECK(parse_word("IIII", 4) == PauliWord::identity(4));
  // sparse tokens in any order
  CHECK(parse_word("X3 Y0", 4) == parse_word("YIIX", 4));
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse_word("XX", 4), value_error);       // dense length mismatch
  CHECK_THROWS_AS(parse_word("ABCD", 4), value_error);     // unknown letter
  CHECK_THROWS_AS(parse_word("Q0", 4), value_error);       // unknown sparse letter
  CHECK_THROWS_AS(parse_word("X9", 4), value_error);       // index out of range
  CHECK_THROWS_AS(parse_word("X0 Y0", 4), value_error);    // duplicate qubit
  CHECK_THROWS_AS(parse_word("X", 2), value_error);        // bare letter, wrong length
}

TEST_CASE("single-qubit products carry exact phases") {
  const PauliWord X = parse_word("X", 1), Y = parse_word("Y", 1), Z = parse_word("Z", 1);
  PauliWord xz = multiply(X, Z);  // XZ = -iY
  CHECK(xz.letter(0) == 'Y');
  CHECK(xz.phase_pow == 3);
  PauliWord zx = multiply(Z, X);  // ZX = +iY
  CHECK(zx.letter(0) == 'Y');
  CHECK(zx.phase_pow == 1);
  PauliWord xy = multiply(X, Y);  // XY = +iZ
  CHECK(xy.letter(0) == 'Z');
  CHECK(xy.phase_pow == 1);
  PauliWord yy = multiply(Y, Y);
  CHECK(yy.is_identity());
  CHECK(yy.phase_pow == 0);
}

TEST_CASE("multi-qubit product with phase") {
  // (Y0 Z1 X2 X3 X5) * (Y3 X5) = i * (Y0 Z1 X2 Z3): X*Y=iZ on qubit 3, X*X=I on 5
  PauliWord a = parse_word("Y0 Z1 X2 X3 X5", 6);
  PauliWord b = parse_word("Y3 X5", 6);
  PauliWord c = multiply(a, b);
  CHECK(c.str() == "YZXZII");
  CHECK(c.phase_pow == 1);
  CHECK(max_abs_diff(pauli_matrix(c), pauli_matrix(a) * pauli_matrix(b)) == 0.0);
}

TEST_CASE("multiply matches the dense Kronecker oracle") {
  Rng rng(42);
  for (int it = 0; it < 60; ++it) {
    const uint32_t n = 1 + uint32_t(rng.below(4));
    PauliWord a = random_word(rng, n), b = random_word(rng, n);
    a.phase_pow = uint8_t(rng.below(4));
    b.phase_pow = uint8_t(rng.below(4));
    CHECK(max_abs_diff(pauli_matrix(multiply(a, b)), pauli_matrix(a) * pauli_matrix(b)) == 0.0);
  }
}

TEST_CASE("commutes matches the dense commutator") {
  Rng rng(7);
  int anti = 0;
  for (int it = 0; it < 80; ++it) {
    const uint32_t n = 1 + uint32_t(rng.below(3));
    PauliWord a = random_word(rng, n), b = random_word(rng, n);
    Matrix comm = pauli_matrix(a) * pauli_matrix(b) - pauli_matrix(b) * pauli_matrix(a);
    const bool dense_commutes = frobenius_norm(comm) < 1e-12;
    CHECK(commutes(a, b) == dense_commutes);
    if (!dense_commutes) ++anti;
  }
  CHECK(anti > 10);  // the sample actually exercises both branches
}

TEST_CASE("pauli_matrix phase convention i^{#Y}") {
  // Y = i XZ, so the matrix of the letters X,Z with one Y factor must match
  Matrix y = pauli_matrix(parse_word("Y", 1));
  CHECK(y(0, 1) == cplx(0, -1));
  CHECK(y(1, 0) == cplx(0, 1));
  PauliWord w = parse_word("Y", 1);
  w.phase_pow = 2;  // -Y
  Matrix my = pauli_matrix(w);
  CHECK(my(0, 1) == cplx(0, 1));
}

TEST_CASE("PauliSum add and simplify") {
  PauliSum s(2);
  s.add(0.5, parse_word("XZ", 2));
  s.add(0.25, parse_word("XZ", 2));
  s.add(1.0, parse_word("ZI", 2));
  s.add(-1.0, parse_word("ZI", 2));
  CHECK(s.size() == 4);
  s.simplify();
  CHECK(s.size() == 1);
  CHECK(s.terms[0].word.str() == "XZ");
  CHECK(s.terms[0].coeff == cplx(0.75, 0.0));
}

TEST_CASE("simplify folds word phases into coefficients") {
  PauliWord w = parse_word("Y", 1);
  w.phase_pow = 3;  // -iY
  PauliSum s(1);
  s.add(cplx(0, 1), w);  // i * (-i Y) = Y
  s.simplify();
  REQUIRE(s.size() == 1);
  CHECK(s.terms[0].coeff == cplx(1.0, 0.0));
  CHECK(s.terms[0].word.phase_pow == 0);
}

TEST_CASE("pauli sum text round-trip") {
  PauliSum s(3);
  s.add(-1.25, parse_word("ZZI", 3));
  s.add(cplx(0.5, -0.75), parse_word("XYZ", 3));
  std::istringstream in(format_pauli_sum(s));
  PauliSum r = parse_pauli_sum(in);
  REQUIRE(r.size() == s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(r.terms[i].word == s.terms[i].word);
    CHECK(r.terms[i].coeff == s.terms[i].coeff);
  }
}

TEST_CASE("pauli sum parse errors carry line context") {
  {
    std::istringstream in("qubits: 2\n0.5 XYZ\n");
    CHECK_THROWS_AS(parse_pauli_sum(in), value_error);
  }
  {
    std::istringstream in("0.5 XY\n");  // missing header
    CHECK_THROWS_AS(parse_pauli_sum(in), value_error);
  }
  {
    std::istringstream in("qubits: 2\nnotanumber XY\n");
    CHECK_THROWS_AS(parse_pauli_sum(in), value_error);
  }
}

TEST_CASE("conjugation by rotation: commuting pass-through, anticommuting rotation") {
  // P=Y, H=Z, theta=pi: e^{+i pi/2 Y} Z e^{-i pi/2 Y} = -Z
  PauliSum h(1);
  h.add(1.0, parse_word("Z", 1));
  PauliSum out = conjugate_by_rotation(h, PauliRotation(M_PI, parse_word("Y", 1)), +1);
  out.simplify();
  REQUIRE(out.size() == 1);
  CHECK(out.terms[0].word.str() == "Z");
  CHECK(std::abs(out.terms[0].coeff - cplx(-1.0, 0.0)) < 1e-15);

  // P=Z, H=X, theta=pi/2: cos X + i sin (ZX) = i(iY) = -Y
  PauliSum hx(1);
  hx.add(1.0, parse_word("X", 1));
  PauliSum outx = conjugate_by_rotation(hx, PauliRotation(M_PI / 2, parse_word("Z", 1)), +1);
  outx.simplify();
  REQUIRE(outx.size() == 1);
  CHECK(outx.terms[0].word.str() == "Y");
  CHECK(std::abs(outx.terms[0].coeff - cplx(-1.0, 0.0)) < 1e-15);

  // commuting term untouched
  PauliSum hz(2);
  hz.add(0.7, parse_word("ZZ", 2));
  PauliSum outz = conjugate_by_rotation(hz, PauliRotation(0.4, parse_word("ZI", 2)), +1);
  outz.simplify();
  REQUIRE(outz.size() == 1);
  CHECK(outz.terms[0].word.str() == "ZZ");
  CHECK(std::abs(outz.terms[0].coeff - cplx(0.7, 0.0)) < 1e-15);
}

TEST_CASE("conjugation matches dense similarity transform both directions") {
  Rng rng(99);
  for (int it = 0; it < 20; ++it) {
    const uint32_t n = 2;
    PauliSum h(n);
    for (int t = 0; t < 4; ++t) h.add(rng.uniform(-1, 1), random_word(rng, n));
    PauliRotation r(rng.uniform(-3, 3), random_word(rng, n, false));
    for (int sign : {+1, -1}) {
      PauliSum out = conjugate_by_rotation(h, r, sign);
      Matrix u = rotation_matrix(r);  // e^{-i theta/2 P}
      // sign=+1 conjugates by U^dag on the left: U^dag H U has H evolve "forward"
      Matrix expect = sign > 0 ? dagger(u) * sum_matrix(h) * u : u * sum_matrix(h) * dagger(u);
      CHECK(max_abs_diff(sum_matrix(out), expect) < 1e-12);
    }
  }
}

TEST_CASE("dress_hamiltonian equals dense conjugation by the full product") {
  Rng rng(1234);
  for (int it = 0; it < 10; ++it) {
    const uint32_t n = 4;
    PauliSum h(n);
    for (int t = 0; t < 6; ++t) h.add(rng.uniform(-1, 1), random_word(rng, n));
    std::vector<PauliRotation> d;
    const int len = 1 + int(rng.below(4));
    for (int k = 0; k < len; ++k)
      d.emplace_back(rng.uniform(-2, 2), random_word(rng, n, false));
    PauliSum dressed = dress_hamiltonian(h, d);
    // D = d0 * d1 * ... with the left factor applied last to kets
    Matrix dm = Matrix::identity(std::size_t(1) << n);
    for (const auto& r : d) dm = dm * rotation_matrix(r);
    Matrix expect = dagger(dm) * sum_matrix(h) * dm;
    CHECK(max_abs_diff(sum_matrix(dressed), expect) < 1e-10);
  }
}

TEST_CASE("dressing by a rotation and its inverse is the identity map") {
  Rng rng(5);
  PauliSum h(3);
  for (int t = 0; t < 5; ++t) h.add(rng.uniform(-1, 1), random_word(rng, 3));
  PauliRotation r(0.813, parse_word("XXY", 3));
  PauliSum dressed = dress_hamiltonian(h, {r, r.inverse()});
  PauliSum base = h;
  base.simplify();
  dressed.simplify();
  CHECK(max_abs_diff(sum_matrix(dressed), sum_matrix(base)) < 1e-12);
}

TEST_CASE("anticommuting generators double the term count") {
  // H = Z anticommutes with the rotation word X: one rotation splits it in two
  PauliSum h(1);
  h.add(1.0, parse_word("Z", 1));
  PauliSum dressed = dress_hamiltonian(h, {PauliRotation(0.3, parse_word("X", 1))});
  dressed.simplify();
  CHECK(dressed.size() == 2);
}
