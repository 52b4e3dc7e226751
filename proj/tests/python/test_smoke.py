"""Smoke tests for the Python bindings.

These exercise one round trip through each area of the module surface; the
exhaustive checks live in the C++ test suite.
"""

import math

import pytest

import paulisim as ps


def test_pauli_product_phase():
    n = 1
    x = ps.parse_word("X", n)
    z = ps.parse_word("Z", n)
    xz = ps.multiply(x, z)
    assert str(xz) == "Y"
    assert xz.phase_pow == 3  # X.Z = -i Y
    assert not ps.commutes(x, z)
    assert ps.commutes(x, x)


def test_word_parsing_and_errors():
    w = ps.parse_word("Y0 X1 X2 X3", 4)
    assert str(w) == "YXXX"
    assert w.weight == 4
    with pytest.raises(ValueError):
        ps.parse_word("XQ", 2)


def test_circuit_run_and_purity():
    c = ps.Circuit(2)
    c.append(ps.Gate.h(0))
    c.append(ps.Gate.cnot(0, 1))
    psi = ps.run_circuit_pure(c)
    assert abs(ps.overlap(psi, ps.basis_state("00")) - 0.5) < 1e-12

    rho = ps.run_circuit(c, ps.NoiseSpec(ps.NoiseModel.NONE, 0.0))
    assert abs(ps.purity(rho) - 1.0) < 1e-12
    # Bell state: 2 bits of Kumar QMI, maximally mixed marginal
    assert abs(ps.multipartite_qmi(rho, ps.QmiForm.KUMAR) - 2.0) < 1e-9
    red = ps.partial_trace(rho, [0])
    assert abs(ps.von_neumann_entropy(red) - 1.0) < 1e-9


def test_t_state_magic():
    c = ps.Circuit(1)
    c.append(ps.Gate.h(0))
    c.append(ps.Gate.rz(0, math.pi / 4))
    rho = ps.run_circuit(c, ps.NoiseSpec())
    m2 = ps.stabilizer_renyi_2(rho)
    assert abs(m2 - math.log2(4.0 / 3.0)) < 1e-9


def test_noise_decreases_purity():
    c = ps.Circuit(2)
    c.append(ps.Gate.pauli_exp(0.3, ps.parse_word("XY", 2)))
    rho = ps.run_circuit(c, ps.NoiseSpec(ps.NoiseModel.GLOBAL_DEPOL_PER_EXP, 0.05))
    assert ps.purity(rho) < 1.0
    with pytest.raises(ValueError):
        ps.run_circuit(c, ps.NoiseSpec(ps.NoiseModel.GLOBAL_DEPOL_PER_EXP, 1.5))


def test_dressing_identity():
    h = ps.PauliSum(4)
    h.add(0.5, ps.parse_word("ZIII", 4))
    h.add(-0.25, ps.parse_word("YYXX", 4))
    rot = ps.PauliRotation(0.42, ps.parse_word("YXXX", 4))
    dressed = ps.dress_hamiltonian(h, [rot, rot.inverse()])
    dressed.simplify()
    h.simplify()
    # D = R R^{-1} = 1, so the dressed sum equals the original term by term
    assert len(dressed) == len(h)
    for got, want in zip(dressed.terms, h.terms):
        assert str(got.word) == str(want.word)
        assert abs(got.coeff - want.coeff) < 1e-12


def test_shadow_estimate_exact():
    rho = ps.projector(ps.basis_state("10"))
    shadows = ps.sample_shadows_all_bases(rho, 40, seed=7)
    zz = ps.PauliSum(2)
    zz.add(1.0, ps.parse_word("ZZ", 2))
    # <ZZ> on |10> is -1, and Z-basis records reproduce it exactly
    est = ps.estimate_observable(shadows, zz, 5)
    assert abs(est - (-1.0)) < 1e-12
    assert shadows.accepted_count() == len(shadows)


def test_bootstrap_and_pearson():
    r = ps.pearson([1.0, 2.0, 3.0], [1.0, 3.0, 2.0])
    assert abs(r - 0.5) < 1e-12
    b = ps.bootstrap(lambda xs: sum(xs) / len(xs), [2.0, 2.0, 2.0], 50, seed=3)
    assert b.mean == 2.0 and b.stddev == 0.0


def test_run_study_reproducible():
    cfg = {
        "study": "primitive",
        "angle_grid": "0:1.5707963267948966:5",
        "noise_model": "none",
        "p": 0.0,
    }
    a = ps.run_study(cfg)
    b = ps.run_study(cfg)
    assert a["study"] == "primitive"
    assert len(a["metrics"]["theta"]) == 5
    assert a["metrics"] == b["metrics"]
    # Clifford endpoints of the noiseless sweep carry no magic
    se = a["metrics"]["ideal_se_m2"]
    assert abs(se[0]) < 1e-9 and abs(se[-1]) < 1e-9
