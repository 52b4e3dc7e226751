#pragma once
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "paulisim/dense.hpp"
#include "paulisim/pauli.hpp"

namespace psim {

struct MetricReport {
  double purity = 0.0;
  double se_m2 = 0.0;  // bits
  double qmi = 0.0;    // bits
  std::optional<double> overlap_with_target;
  std::optional<double> coherent_mismatch;
  std::optional<double> energy;  // Hartree when a Hamiltonian is supplied

  // purity in (0, 1+1e-9]; se_m2 >= -1e-9; qmi >= -1e-9; optionals in [0, 1]
  void validate() const;
};

struct PurificationResult {
  int order = 1;
  DensityMatrix purified_state;
  double residual_purity_gap = 0.0;
};

enum class QmiForm { KUMAR, WATANABE };

QmiForm parse_qmi_form(const std::string& name);
std::string qmi_form_name(QmiForm f);

double purity(const DensityMatrix& rho);

// tr(P rho) via the index-pairing walk; never materializes the dense operator
double pauli_expectation(const DensityMatrix& rho, const PauliWord& w);
double expectation(const DensityMatrix& rho, const PauliSum& obs);

// -log2(sum_P tr(P rho)^4 / 2^n) minus (when subtract_entropy) the Von Neumann
// entropy in bits; enumerates all 4^n words, so n <= 7
double stabilizer_renyi_2(const DensityMatrix& rho, bool subtract_entropy = true);

// bits; eigenvalues in [-1e-9, 1e-12] treated as 0, more negative ones raise
double von_neumann_entropy(const DensityMatrix& rho);

// KUMAR (default): sum_i S(all qubits but i) - (n-1) S(rho)
// WATANABE: sum_i S(qubit i) - S(rho)
double multipartite_qmi(const DensityMatrix& rho, QmiForm form = QmiForm::KUMAR);

// rho^M / tr(rho^M)
PurificationResult purify(const DensityMatrix& rho, int order);

// 1 - <ideal| purify(noisy, M).state |ideal>, clamped to [0, 1]
double coherent_mismatch(const StateVector& ideal, const DensityMatrix& noisy, int order = 5);

// sample Pearson r; lengths must match and be >= 3
double pearson(const std::vector<double>& xs, const std::vector<double>& ys);

struct BootstrapResult {
  double mean = 0.0;
  double stddev = 0.0;
};

// resamples the dataset with replacement at original size; deterministic in seed
BootstrapResult bootstrap(const std::function<double(const std::vector<double>&)>& stat,
                          const std::vector<double>& data, int resamples, uint64_t seed);

}  // namespace psim
