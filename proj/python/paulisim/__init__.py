"""Pauli-product circuit simulator.

Python bindings for the C++ core: Pauli algebra in symplectic form, dense
state/density-matrix evolution with depolarizing noise models, magic and
entanglement metrics, classical shadows with postselection, and the named
study drivers behind the ``psim`` CLI.

Quick start::

    import paulisim as ps

    w = ps.parse_word("YXXX", 4)
    c = ps.Circuit(4)
    c.append(ps.Gate.pauli_exp(0.7, w))
    rho = ps.run_circuit(c, ps.NoiseSpec(ps.NoiseModel.GLOBAL_DEPOL_PER_EXP, 0.01))
    print(ps.purity(rho), ps.stabilizer_renyi_2(rho))
"""

from ._core import (  # noqa: F401
    BootstrapResult,
    Circuit,
    DensityMatrix,
    ExpMode,
    Gate,
    MeasurementRecord,
    NoiseModel,
    NoiseSpec,
    PauliRotation,
    PauliSum,
    PauliTerm,
    PauliWord,
    PurificationResult,
    QmiForm,
    ShadowSet,
    StateVector,
    all_basis_strings,
    basis_state,
    bootstrap,
    coherent_mismatch,
    commutes,
    compile_pauli_exp,
    conjugate_by_rotation,
    dress_hamiltonian,
    estimate_observable,
    expectation,
    fidelity_with_pure,
    format_circuit,
    format_pauli_sum,
    hermitian_eig_of_density,
    inner,
    multipartite_qmi,
    multiply,
    noise_model_name,
    overlap,
    parse_circuit_file,
    parse_noise_model,
    parse_pauli_sum_file,
    parse_word,
    partial_trace,
    pauli_expectation,
    pauli_matrix_list,
    pearson,
    per_record_estimates,
    projector,
    purify,
    purity,
    read_shadow_set_file,
    run_circuit,
    run_circuit_pure,
    run_study,
    sample_shadows,
    sample_shadows_all_bases,
    sample_with_postselection,
    shadow_state,
    snapshot,
    stabilizer_renyi_2,
    trace_distance,
    von_neumann_entropy,
    write_shadow_set_file,
)

__version__ = "1.0.0"
