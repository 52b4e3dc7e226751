#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "paulisim/circuit.hpp"
#include "paulisim/dense.hpp"
#include "paulisim/metrics.hpp"
#include "paulisim/pauli.hpp"

namespace psim {

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_row(std::vector<double> row);
  std::size_t col_index(const std::string& name) const;
  std::vector<double> column(const std::string& name) const;
};

// comma-separated, '.' decimal, header row, LF endings, %.12g values
std::string format_csv(const Table& t);

struct RunRecord {
  std::string study;
  uint64_t seed = 0;
  nlohmann::json config;  // fully resolved snapshot
  Table metrics;
  std::vector<std::pair<std::string, Table>> curves;
  nlohmann::json stats;
  std::vector<std::pair<std::string, std::string>> extra_files;  // name -> content
};

// writes resolved-config.json, run.json, metrics.csv, curves/*.csv and any
// extra files under out_dir; creates directories as needed
void write_run(const RunRecord& r, const std::string& out_dir);

// ---------------------------------------------------------------- primitive

struct PrimitiveConfig {
  std::vector<double> angles;  // within [0, pi/2]
  double p = 0.002;
  NoiseModel model = NoiseModel::LOCAL_DEPOL_PER_GATE;
  std::vector<double> noise_levels = {0.0005, 0.002, 0.008, 0.032};
  int mismatch_order = 5;
  QmiForm qmi_form = QmiForm::KUMAR;
};

// theta sweep of the YXXX rotation on |1100>, compiled form
RunRecord primitive_sweep(const PrimitiveConfig& cfg);

// ------------------------------------------------------------------ random

struct RandomCircuitSample {
  int n_paulis = 0;
  std::vector<PauliRotation> rotations;
  std::string reference_prep;  // per-qubit 'X' or 'H'
  uint64_t seed = 0;
};

// N uniform on {2..30}; each rotation on a uniform support of size 2 or 4 with
// uniform non-identity letters; theta uniform [0, 2pi)
RandomCircuitSample sample_random_circuit(uint32_t n_qubits, uint64_t seed);

struct RandomConfig {
  int count = 1000;  // >= 100
  std::vector<double> noise_levels = {0.002, 0.004, 0.008, 0.016};
  uint64_t seed = 1;
  int n_subsets = 5;
  int subset_size = 0;  // 0 -> count / n_subsets
  double stratify_level = 0.002;
  int mismatch_order = 5;
  QmiForm qmi_form = QmiForm::KUMAR;
};

RunRecord random_circuit_study(const RandomConfig& cfg);

struct StratifiedSubset {
  std::vector<std::size_t> indices;
  std::vector<double> qmi_edges;
  std::vector<double> se_edges;
};

// 10x10 joint equal-width grid over observed ranges; seeded per-cell shuffle,
// round-robin draws without replacement, consecutive disjoint subsets
std::vector<StratifiedSubset> stratified_subsets(const std::vector<double>& qmi,
                                                 const std::vector<double>& se, int subset_size,
                                                 int n_subsets, uint64_t seed, int bin_count = 10);

// -------------------------------------------------------------------- path

struct PathConfig {
  std::vector<std::vector<PauliRotation>> paths;
  std::string reference_bits;
  double noise_per_g = 0.0005;
  // one of NONE, GLOBAL_DEPOL_PER_EXP, LOCAL_DEPOL_PER_EXP (noise after each
  // exponential; exponentials applied exactly)
  NoiseModel model = NoiseModel::LOCAL_DEPOL_PER_EXP;
  std::optional<StateVector> target;
  std::optional<PauliSum> hamiltonian;
  int mismatch_order = 5;
  QmiForm qmi_form = QmiForm::KUMAR;
};

RunRecord path_study(const PathConfig& cfg);

// ---------------------------------------------------------------- dressing

struct DressingConfig {
  std::vector<PauliSum> hamiltonians;  // one per point
  std::vector<std::string> h_labels;
  std::vector<double> point_angles;  // optimal angle per point
  double fixed_angle = 0.401;
  PauliWord ansatz_word;  // rotation generator shared by all points
  std::string reference_bits = "1100";
  NoiseSpec noise{NoiseModel::LOCAL_DEPOL_PER_GATE, 0.008};
  int shots_per_basis = 1000;
  int k_groups = 5;
  int bootstrap_resamples = 250;
  uint64_t seed = 1;
};

// one noisy fixed-circuit shadow set, reused to evaluate every point's dressed
// Hamiltonian H* = D^dag H D with D = rot(delta_i) rot(-fixed_angle)
RunRecord dressing_study(const DressingConfig& cfg);

// ----------------------------------------------------------------- be-path

struct BePathConfig {
  double p = 0.008;
  NoiseModel model = NoiseModel::LOCAL_DEPOL_PER_GATE;
  int shots_per_basis = 1000;
  uint64_t seed = 1;
  int mismatch_order = 5;
  QmiForm qmi_form = QmiForm::KUMAR;
};

// the three fixed sequences (N=1,2,3) on |1111>, deepest ideal state as target
std::vector<std::vector<PauliRotation>> be_circuits();
RunRecord be_path_experiment(const BePathConfig& cfg);

// ------------------------------------------------------------ shadows demo

struct ShadowsDemoConfig {
  double theta = 0.401;
  double p = 0.002;
  NoiseModel model = NoiseModel::GLOBAL_DEPOL_PER_EXP;
  int shots_per_basis = 200;
  int n_bases = 0;  // 0 -> all 3^n
  int k_groups = 5;
  uint64_t seed = 1;
};

RunRecord shadows_demo(const ShadowsDemoConfig& cfg);

// ------------------------------------------------------------------- stats

// symmetric Pearson matrix over named metric columns; first output column is
// the row's field index
Table correlation_matrix(const Table& t, const std::vector<std::string>& fields);

}  // namespace psim
