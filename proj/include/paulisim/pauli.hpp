#pragma once
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "paulisim/errors.hpp"

namespace psim {

using cplx = std::complex<double>;

// n-qubit Pauli word in symplectic form with a tracked global phase i^phase_pow.
// Bit (n_qubits-1-q) of x_bits/z_bits carries qubit q, so masks line up with
// big-endian basis-state indices (qubit 0 is the most significant bit).
struct PauliWord {
  uint32_t n_qubits = 0;
  uint64_t x_bits = 0;
  uint64_t z_bits = 0;
  uint8_t phase_pow = 0;

  static PauliWord identity(uint32_t n);

  uint64_t qubit_mask(uint32_t q) const { return 1ull << (n_qubits - 1 - q); }
  char letter(uint32_t q) const;
  void set_letter(uint32_t q, char l);
  bool is_identity() const { return x_bits == 0 && z_bits == 0; }
  uint32_t weight() const;
  std::string str() const;

  bool operator==(const PauliWord&) const = default;
};

PauliWord multiply(const PauliWord& a, const PauliWord& b);
bool commutes(const PauliWord& a, const PauliWord& b);

// Accepts dense form ("YXXX", length == n_qubits) or sparse indexed form
// ("Y0 Z1 X2 X3 X5"); sparse indices must be unique and < n_qubits.
PauliWord parse_word(const std::string& text, uint32_t n_qubits);

// coefficient * word; any phase on the word is folded into the coefficient so
// stored words always have phase_pow == 0.
struct PauliTerm {
  cplx coeff;
  PauliWord word;
  PauliTerm(cplx c, PauliWord w);
};

struct PauliSum {
  uint32_t n_qubits = 0;
  std::vector<PauliTerm> terms;

  PauliSum() = default;
  explicit PauliSum(uint32_t n) : n_qubits(n) {}

  void add(cplx c, const PauliWord& w);
  // merges duplicate words (canonical order) and drops |coeff| < tol
  void simplify(double tol = 1e-12);
  std::size_t size() const { return terms.size(); }
};

// theta in e^{-i(theta/2) P}; identity words are rejected.
struct PauliRotation {
  double angle;
  PauliWord word;
  PauliRotation(double theta, PauliWord w);
  PauliRotation inverse() const { return PauliRotation(-angle, word); }
};

// sign=+1: e^{+i(theta/2)P} H e^{-i(theta/2)P}; sign=-1 the inverse direction.
// Commuting terms pass through; anticommuting terms map to
// cos(theta) Q + sign * i sin(theta) (P*Q).
PauliSum conjugate_by_rotation(const PauliSum& h, const PauliRotation& r, int sign);

// H* = D^dag H D for D = d_sequence[0] * d_sequence[1] * ... (left factor
// applied last to kets). Residual imaginary parts below 1e-9 are zeroed;
// larger ones raise numerical_error.
PauliSum dress_hamiltonian(const PauliSum& h, const std::vector<PauliRotation>& d_sequence);

// Text format: header "qubits: n", then one term per line
// "<real> [<imag>] <word>"; '#' starts a comment.
PauliSum parse_pauli_sum(std::istream& in);
PauliSum parse_pauli_sum_file(const std::string& path);
std::string format_pauli_sum(const PauliSum& s);

} // namespace psim
