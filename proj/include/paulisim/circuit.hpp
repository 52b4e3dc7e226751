#pragma once
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "paulisim/dense.hpp"
#include "paulisim/pauli.hpp"

namespace psim {

enum class GateKind { H, RX, RZ, X, CNOT, PAULI_EXP };

struct Gate {
  GateKind kind = GateKind::H;
  uint32_t q0 = 0;     // single-qubit target, or control for CNOT
  uint32_t q1 = 0;     // CNOT target
  double angle = 0.0;  // RX/RZ angle, PAULI_EXP theta
  PauliWord word;      // PAULI_EXP only

  static Gate h(uint32_t q);
  static Gate rx(uint32_t q, double angle);
  static Gate rz(uint32_t q, double angle);
  static Gate x(uint32_t q);
  static Gate cnot(uint32_t control, uint32_t target);
  // e^{-i(theta/2) P}; identity words are rejected
  static Gate pauli_exp(double theta, const PauliWord& w);

  std::vector<uint32_t> acting_qubits() const;
};

struct Circuit {
  uint32_t n_qubits = 0;
  std::vector<Gate> gates;

  Circuit() = default;
  explicit Circuit(uint32_t n) : n_qubits(n) {}
  // throws value_error if a gate touches a qubit outside [0, n_qubits)
  void append(const Gate& g);
};

enum class NoiseModel {
  NONE,
  GLOBAL_DEPOL_PER_EXP,   // (1-q) rho + q I/2^n after every PAULI_EXP
  LOCAL_DEPOL_PER_GATE,   // per-qubit channel on acting qubits after every basis gate
  LOCAL_DEPOL_PER_EXP,    // per-qubit channel on all qubits after every PAULI_EXP
};

struct NoiseSpec {
  NoiseModel model = NoiseModel::NONE;
  double p = 0.0;
};

NoiseModel parse_noise_model(const std::string& name);
std::string noise_model_name(NoiseModel m);

enum class ExpMode { EXACT, COMPILED };

// basis changes (X -> H, Y -> RX(pi/2)), CNOT ladder across active qubits,
// RZ(theta) on the last active qubit, then the mirror image
std::vector<Gate> compile_pauli_exp(const Gate& g);

Matrix gate_matrix(const Gate& g, uint32_t n_qubits);

void apply_gate(StateVector& v, const Gate& g);        // PAULI_EXP applied exactly
void apply_gate(DensityMatrix& rho, const Gate& g);    // PAULI_EXP applied exactly

// (1-p) rho + p I/2^n
void depolarize_global(DensityMatrix& rho, double p);
// per listed qubit: (1-p) rho + (p/3)(X rho X + Y rho Y + Z rho Z)
void depolarize_local(DensityMatrix& rho, double p, const std::vector<uint32_t>& qubits);

// noiseless statevector run (PAULI_EXP exact); starts from |initial_basis>
StateVector run_circuit_pure(const Circuit& c, uint64_t initial_basis = 0);

// LOCAL_DEPOL_PER_GATE always expands PAULI_EXP gates; the other models honor
// `mode` (EXACT by default) and attach noise per the model comments above.
// State preparation in |initial_basis> is noiseless.
DensityMatrix run_circuit(const Circuit& c, const NoiseSpec& noise, ExpMode mode = ExpMode::EXACT,
                          uint64_t initial_basis = 0);

// Text format: "qubits: n" header, then one gate per line:
//   h 0 | x 2 | rx 0 1.5708 | rz 3 0.401 | cnot 0 1 | exp 0.486 Y0 Z1 X2 X3 X5
// '#' starts a comment.
Circuit parse_circuit(std::istream& in);
Circuit parse_circuit_file(const std::string& path);
std::string format_circuit(const Circuit& c);

}  // namespace psim
