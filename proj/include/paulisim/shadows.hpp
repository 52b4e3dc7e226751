#pragma once
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "paulisim/circuit.hpp"
#include "paulisim/dense.hpp"
#include "paulisim/pauli.hpp"

namespace psim {

struct MeasurementRecord {
  std::string basis;         // per-qubit letter in {X, Y, Z}
  std::string outcome_bits;  // n-bit string, qubit 0 first
  std::optional<int> ancilla_bit;
  bool accepted = true;
};

struct ShadowSet {
  uint32_t n_qubits = 0;
  uint64_t seed = 0;
  int shots_per_basis = 0;
  std::vector<MeasurementRecord> records;

  std::size_t accepted_count() const;
  // rejected / total
  double rejected_ratio() const;
};

// lexicographic X<Y<Z strings; n <= 4 (3^n enumeration)
std::vector<std::string> all_basis_strings(uint32_t n);

// n_bases uniformly random basis strings, shots_per_basis diagonal samples each
// after rotating rho into the basis; per-basis streams derive from (seed, index)
ShadowSet sample_shadows(const DensityMatrix& rho, int n_bases, int shots_per_basis,
                         uint64_t seed);
// every basis string once (n <= 4), shots_per_basis samples each
ShadowSet sample_shadows_all_bases(const DensityMatrix& rho, int shots_per_basis, uint64_t seed);

// Simulates the circuit with a fresh ancilla receiving CNOTs from each parity
// qubit before measurement; a record is accepted iff the ancilla matches the
// parity of the noiseless state (which must be definite). n_bases == 0
// enumerates all 3^n bases (n <= 4).
ShadowSet sample_with_postselection(const Circuit& circuit,
                                    const std::vector<uint32_t>& parity_qubits,
                                    const NoiseSpec& noise, ExpMode mode, int n_bases,
                                    int shots_per_basis, uint64_t seed,
                                    uint64_t initial_basis = 0);

// tensor product of (3 U^dag |b><b| U - I); unit trace exactly
DensityMatrix snapshot(const MeasurementRecord& r);

// raw average of accepted snapshots (Hermitian, unit trace, possibly indefinite)
Matrix snapshot_mean(const ShadowSet& s);

// snapshot mean projected to a valid state: eigenvalue clip at 0 + renormalize
DensityMatrix shadow_state(const ShadowSet& s);

// median over k_groups chunk means of the fast single-shot rule: a word scores
// 3^{|support|} * prod (-1)^{bit} when every support letter matches the basis,
// else 0
double estimate_observable(const ShadowSet& s, const PauliSum& obs, int k_groups);

// single-shot estimates per accepted record, in record order (bootstrap input)
std::vector<double> per_record_estimates(const ShadowSet& s, const PauliSum& obs);

// line format: three header lines (qubits/seed/shots_per_basis), then
// "basis outcome ancilla accepted" per record with '-' for a missing ancilla
std::string format_shadow_set(const ShadowSet& s);
ShadowSet parse_shadow_set(std::istream& in);
ShadowSet read_shadow_set_file(const std::string& path);
void write_shadow_set_file(const ShadowSet& s, const std::string& path);

}  // namespace psim
