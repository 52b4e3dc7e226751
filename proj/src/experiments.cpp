#include "paulisim/experiments.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <utility>

#include "paulisim/errors.hpp"
#include "paulisim/rng.hpp"
#include "paulisim/shadows.hpp"

namespace psim {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr uint64_t kStratStream = 1000000007ull;  // disjoint from per-sample child indices

std::string fmt12(double v) {
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

uint64_t bits_to_index(const std::string& bits) {
  if (bits.empty() || bits.size() > 16)
    throw value_error("reference bit string must have 1..16 characters");
  uint64_t idx = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw value_error("reference bit string may only contain '0'/'1'");
    idx = (idx << 1) | uint64_t(c - '0');
  }
  return idx;
}

std::vector<uint32_t> all_qubits(uint32_t n) {
  std::vector<uint32_t> q(n);
  std::iota(q.begin(), q.end(), 0u);
  return q;
}

void check_prob(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) throw value_error(std::string(what) + " must lie in [0, 1]");
}

nlohmann::json safe_corr(const std::vector<double>& a, const std::vector<double>& b) {
  try {
    return pearson(a, b);
  } catch (const std::exception&) {
    return nullptr;
  }
}

double corr_or_nan(const std::vector<double>& a, const std::vector<double>& b) {
  try {
    return pearson(a, b);
  } catch (const std::exception&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
}

}  // namespace

// ------------------------------------------------------------------- table

void Table::add_row(std::vector<double> row) {
  if (row.size() != columns.size()) throw value_error("row width does not match column count");
  rows.push_back(std::move(row));
}

std::size_t Table::col_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw value_error("unknown column: " + name);
}

std::vector<double> Table::column(const std::string& name) const {
  const std::size_t i = col_index(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[i]);
  return out;
}

std::string format_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    const std::string& c = t.columns[i];
    if (c.find(',') != std::string::npos || c.find('\n') != std::string::npos)
      throw value_error("column name may not contain ',' or newline: " + c);
    if (i) out += ',';
    out += c;
  }
  out += '\n';
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) out += ',';
      out += fmt12(r[i]);
    }
    out += '\n';
  }
  return out;
}

void write_run(const RunRecord& r, const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw io_error("cannot create output directory " + out_dir + ": " + ec.message());

  auto write_file = [](const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw io_error("cannot open " + p.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw io_error("write failed for " + p.string());
  };

  write_file(fs::path(out_dir) / "resolved-config.json", r.config.dump(2) + "\n");

  nlohmann::json run;
  run["study"] = r.study;
  run["seed"] = r.seed;
  run["config"] = r.config;
  run["stats"] = r.stats;
  run["metrics_columns"] = r.metrics.columns;
  run["metrics_rows"] = r.metrics.rows.size();
  nlohmann::json curve_names = nlohmann::json::array();
  for (const auto& [name, tbl] : r.curves) curve_names.push_back(name);
  run["curves"] = curve_names;
  write_file(fs::path(out_dir) / "run.json", run.dump(2) + "\n");

  write_file(fs::path(out_dir) / "metrics.csv", format_csv(r.metrics));

  if (!r.curves.empty()) {
    fs::create_directories(fs::path(out_dir) / "curves", ec);
    if (ec) throw io_error("cannot create curves directory: " + ec.message());
    for (const auto& [name, tbl] : r.curves)
      write_file(fs::path(out_dir) / "curves" / (name + ".csv"), format_csv(tbl));
  }
  for (const auto& [name, content] : r.extra_files) write_file(fs::path(out_dir) / name, content);
}

// --------------------------------------------------------------- primitive

RunRecord primitive_sweep(const PrimitiveConfig& cfg) {
  if (cfg.angles.empty()) throw value_error("primitive study needs at least one angle");
  for (double th : cfg.angles)
    if (!(th >= -1e-12 && th <= kPi / 2 + 1e-12))
      throw value_error("primitive angles must lie in [0, pi/2]");
  check_prob(cfg.p, "noise probability");
  if (cfg.noise_levels.empty()) throw value_error("noise_levels must be nonempty");
  for (double lv : cfg.noise_levels) check_prob(lv, "noise level");
  if (cfg.mismatch_order < 1) throw value_error("mismatch_order must be >= 1");

  const PauliWord word = parse_word("YXXX", 4);
  const uint64_t ref = 0b1100;

  RunRecord rec;
  rec.study = "primitive";
  rec.seed = 0;
  rec.metrics.columns = {"theta",       "ideal_se_m2", "ideal_qmi",         "noisy_purity",
                         "noisy_se_m2", "noisy_qmi",   "coherent_mismatch", "overlap"};

  std::vector<Circuit> circuits;
  std::vector<StateVector> ideals;
  std::vector<double> se_ideal_col, qmi_ideal_col;
  for (double theta : cfg.angles) {
    Circuit c(4);
    c.append(Gate::pauli_exp(theta, word));
    StateVector psi = run_circuit_pure(c, ref);
    DensityMatrix ideal_dm = projector(psi);
    DensityMatrix rho = run_circuit(c, NoiseSpec{cfg.model, cfg.p}, ExpMode::COMPILED, ref);

    const double se_i = stabilizer_renyi_2(ideal_dm);
    const double qmi_i = multipartite_qmi(ideal_dm, cfg.qmi_form);
    const double pur = purity(rho);
    const double se_n = stabilizer_renyi_2(rho, false);
    const double qmi_n = multipartite_qmi(rho, cfg.qmi_form);
    const double cm = coherent_mismatch(psi, rho, cfg.mismatch_order);
    const double ov = fidelity_with_pure(rho, psi);
    rec.metrics.add_row({theta, se_i, qmi_i, pur, se_n, qmi_n, cm, ov});

    circuits.push_back(std::move(c));
    ideals.push_back(std::move(psi));
    se_ideal_col.push_back(se_i);
    qmi_ideal_col.push_back(qmi_i);
  }

  nlohmann::json level_stats = nlohmann::json::array();
  nlohmann::json crossover = nullptr;
  for (double lv : cfg.noise_levels) {
    std::vector<double> cs;
    cs.reserve(cfg.angles.size());
    for (std::size_t i = 0; i < cfg.angles.size(); ++i) {
      DensityMatrix rho = run_circuit(circuits[i], NoiseSpec{cfg.model, lv}, ExpMode::COMPILED, ref);
      cs.push_back(coherent_mismatch(ideals[i], rho, cfg.mismatch_order));
    }
    const double cmax = *std::max_element(cs.begin(), cs.end());
    Table curve;
    curve.columns = {"theta", "coherent_mismatch", "normalized_mismatch"};
    for (std::size_t i = 0; i < cfg.angles.size(); ++i)
      curve.add_row({cfg.angles[i], cs[i], cmax > 0 ? cs[i] / cmax : 0.0});
    rec.curves.emplace_back("mismatch_p" + fmt_short(lv), std::move(curve));

    nlohmann::json st;
    st["p"] = lv;
    st["corr_mismatch_se_ideal"] = safe_corr(cs, se_ideal_col);
    st["corr_mismatch_qmi_ideal"] = safe_corr(cs, qmi_ideal_col);
    if (crossover.is_null() && st["corr_mismatch_se_ideal"].is_number() &&
        st["corr_mismatch_qmi_ideal"].is_number() &&
        st["corr_mismatch_qmi_ideal"].get<double>() > st["corr_mismatch_se_ideal"].get<double>())
      crossover = lv;
    level_stats.push_back(std::move(st));
  }

  rec.stats["model"] = noise_model_name(cfg.model);
  rec.stats["p"] = cfg.p;
  rec.stats["qmi_form"] = qmi_form_name(cfg.qmi_form);
  rec.stats["level_stats"] = level_stats;
  rec.stats["crossover_level"] = crossover;
  rec.stats["mismatch_normalization"] = "max-over-theta";

  rec.config["study"] = "primitive";
  rec.config["seed"] = rec.seed;
  rec.config["angles"] = cfg.angles;
  rec.config["p"] = cfg.p;
  rec.config["noise_model"] = noise_model_name(cfg.model);
  rec.config["noise_levels"] = cfg.noise_levels;
  rec.config["mismatch_order"] = cfg.mismatch_order;
  rec.config["qmi_form"] = qmi_form_name(cfg.qmi_form);
  return rec;
}

// ------------------------------------------------------------------ random

RandomCircuitSample sample_random_circuit(uint32_t n_qubits, uint64_t seed) {
  if (n_qubits != 4) throw value_error("random circuit sampling is defined for 4 qubits");
  static const std::array<std::pair<uint32_t, uint32_t>, 6> kPairs = {
      {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

  RandomCircuitSample s;
  s.seed = seed;
  Rng rng(seed);
  s.n_paulis = int(rng.between(2, 30));
  for (int j = 0; j < s.n_paulis; ++j) {
    std::vector<uint32_t> support;
    if (rng.uniform() < 0.5) {
      const auto& pr = kPairs[rng.below(6)];
      support = {pr.first, pr.second};
    } else {
      support = {0, 1, 2, 3};
    }
    PauliWord w = PauliWord::identity(4);
    for (uint32_t q : support) w.set_letter(q, "XYZ"[rng.below(3)]);
    s.rotations.emplace_back(rng.uniform(0.0, 2.0 * kPi), w);
  }
  for (int q = 0; q < 4; ++q) s.reference_prep += (rng.uniform() < 0.5 ? 'X' : 'H');
  return s;
}

RunRecord random_circuit_study(const RandomConfig& cfg) {
  if (cfg.count < 100) throw value_error("random study needs count >= 100");
  if (cfg.noise_levels.empty()) throw value_error("noise_levels must be nonempty");
  for (double lv : cfg.noise_levels) check_prob(lv, "noise level");
  if (cfg.n_subsets < 1) throw value_error("n_subsets must be >= 1");
  const int subset_size = cfg.subset_size > 0 ? cfg.subset_size : cfg.count / cfg.n_subsets;
  if (subset_size < 3) throw value_error("subset_size must be >= 3 for correlations");
  if (std::size_t(subset_size) * std::size_t(cfg.n_subsets) > std::size_t(cfg.count))
    throw value_error("stratified subsets exceed the sample count");
  if (cfg.mismatch_order < 1) throw value_error("mismatch_order must be >= 1");
  std::size_t strat_level_idx = cfg.noise_levels.size();
  for (std::size_t l = 0; l < cfg.noise_levels.size(); ++l)
    if (cfg.noise_levels[l] == cfg.stratify_level) strat_level_idx = l;
  if (strat_level_idx == cfg.noise_levels.size())
    throw value_error("stratify_level must be one of noise_levels");

  RunRecord rec;
  rec.study = "random";
  rec.seed = cfg.seed;
  rec.metrics.columns = {"sample",       "p",           "n_paulis",  "ideal_se_m2",
                         "ideal_qmi",    "noisy_purity", "noisy_se_m2", "noisy_qmi",
                         "coherent_mismatch", "abs_dse", "abs_dqmi"};

  struct PerLevel {
    std::vector<double> c, dse, dqmi, pur, se_i, qmi_i;
  };
  std::vector<PerLevel> per(cfg.noise_levels.size());
  int corner_count = 0;

  for (int i = 0; i < cfg.count; ++i) {
    const RandomCircuitSample smp = sample_random_circuit(4, child_seed(cfg.seed, uint64_t(i)));
    Circuit c(4);
    for (uint32_t q = 0; q < 4; ++q)
      c.append(smp.reference_prep[q] == 'X' ? Gate::x(q) : Gate::h(q));
    for (const PauliRotation& rot : smp.rotations) c.append(Gate::pauli_exp(rot.angle, rot.word));

    const StateVector psi = run_circuit_pure(c);
    const DensityMatrix ideal_dm = projector(psi);
    const double se_i = stabilizer_renyi_2(ideal_dm);
    const double qmi_i = multipartite_qmi(ideal_dm, cfg.qmi_form);
    if (qmi_i < 0.5 && se_i > 1.5) ++corner_count;

    for (std::size_t l = 0; l < cfg.noise_levels.size(); ++l) {
      const double lv = cfg.noise_levels[l];
      DensityMatrix rho = run_circuit(c, NoiseSpec{NoiseModel::GLOBAL_DEPOL_PER_EXP, lv});
      const double pur = purity(rho);
      const double se_n = stabilizer_renyi_2(rho, false);
      const double qmi_n = multipartite_qmi(rho, cfg.qmi_form);
      const double cm = coherent_mismatch(psi, rho, cfg.mismatch_order);
      const double dse = std::abs(se_n - se_i);
      const double dqmi = std::abs(qmi_n - qmi_i);
      rec.metrics.add_row(
          {double(i), lv, double(smp.n_paulis), se_i, qmi_i, pur, se_n, qmi_n, cm, dse, dqmi});
      per[l].c.push_back(cm);
      per[l].dse.push_back(dse);
      per[l].dqmi.push_back(dqmi);
      per[l].pur.push_back(pur);
      per[l].se_i.push_back(se_i);
      per[l].qmi_i.push_back(qmi_i);
    }
  }

  nlohmann::json level_stats = nlohmann::json::array();
  Table corr_curve;
  corr_curve.columns = {"p",           "corr_c_abs_dse",  "corr_c_abs_dqmi",
                        "corr_c_purity", "corr_c_se_ideal", "corr_c_qmi_ideal"};
  for (std::size_t l = 0; l < cfg.noise_levels.size(); ++l) {
    const PerLevel& pl = per[l];
    nlohmann::json st;
    st["p"] = cfg.noise_levels[l];
    st["corr_c_abs_dse"] = safe_corr(pl.c, pl.dse);
    st["corr_c_abs_dqmi"] = safe_corr(pl.c, pl.dqmi);
    st["corr_c_purity"] = safe_corr(pl.c, pl.pur);
    st["corr_c_se_ideal"] = safe_corr(pl.c, pl.se_i);
    st["corr_c_qmi_ideal"] = safe_corr(pl.c, pl.qmi_i);
    level_stats.push_back(st);
    corr_curve.add_row({cfg.noise_levels[l], corr_or_nan(pl.c, pl.dse), corr_or_nan(pl.c, pl.dqmi),
                        corr_or_nan(pl.c, pl.pur), corr_or_nan(pl.c, pl.se_i),
                        corr_or_nan(pl.c, pl.qmi_i)});
  }
  rec.curves.emplace_back("corr_vs_level", std::move(corr_curve));

  // stratified cross-validation at one level
  const PerLevel& sl = per[strat_level_idx];
  const auto subs = stratified_subsets(sl.qmi_i, sl.se_i, subset_size, cfg.n_subsets,
                                       child_seed(cfg.seed, kStratStream));
  std::vector<double> sub_corr_dse, sub_corr_pur;
  for (const auto& sub : subs) {
    std::vector<double> c, dse, pur;
    for (std::size_t idx : sub.indices) {
      c.push_back(sl.c[idx]);
      dse.push_back(sl.dse[idx]);
      pur.push_back(sl.pur[idx]);
    }
    sub_corr_dse.push_back(corr_or_nan(c, dse));
    sub_corr_pur.push_back(corr_or_nan(c, pur));
  }
  nlohmann::json strat;
  strat["p"] = cfg.stratify_level;
  strat["subset_size"] = subset_size;
  strat["n_subsets"] = cfg.n_subsets;
  strat["corr_c_abs_dse"] = sub_corr_dse;
  strat["corr_c_purity"] = sub_corr_pur;
  strat["mean_corr_c_abs_dse"] = mean_of(sub_corr_dse);
  strat["mean_corr_c_purity"] = mean_of(sub_corr_pur);
  strat["qmi_edges"] = subs.front().qmi_edges;
  strat["se_edges"] = subs.front().se_edges;

  // full correlation matrix at the stratification level
  Table level_table;
  level_table.columns = {"coherent_mismatch", "abs_dse", "abs_dqmi",
                         "noisy_purity",      "ideal_se_m2", "ideal_qmi"};
  for (std::size_t r = 0; r < sl.c.size(); ++r)
    level_table.add_row({sl.c[r], sl.dse[r], sl.dqmi[r], sl.pur[r], sl.se_i[r], sl.qmi_i[r]});
  rec.curves.emplace_back("correlation_matrix",
                          correlation_matrix(level_table, level_table.columns));
  rec.stats["correlation_matrix_fields"] = level_table.columns;

  rec.stats["count"] = cfg.count;
  rec.stats["corner_count"] = corner_count;
  rec.stats["level_stats"] = level_stats;
  rec.stats["stratified"] = strat;
  rec.stats["qmi_form"] = qmi_form_name(cfg.qmi_form);
  rec.stats["noise_model"] = noise_model_name(NoiseModel::GLOBAL_DEPOL_PER_EXP);

  rec.config["study"] = "random";
  rec.config["count"] = cfg.count;
  rec.config["seed"] = cfg.seed;
  rec.config["noise_levels"] = cfg.noise_levels;
  rec.config["noise_model"] = noise_model_name(NoiseModel::GLOBAL_DEPOL_PER_EXP);
  rec.config["n_subsets"] = cfg.n_subsets;
  rec.config["subset_size"] = subset_size;
  rec.config["stratify_level"] = cfg.stratify_level;
  rec.config["mismatch_order"] = cfg.mismatch_order;
  rec.config["qmi_form"] = qmi_form_name(cfg.qmi_form);
  return rec;
}

std::vector<StratifiedSubset> stratified_subsets(const std::vector<double>& qmi,
                                                 const std::vector<double>& se, int subset_size,
                                                 int n_subsets, uint64_t seed, int bin_count) {
  if (qmi.size() != se.size()) throw value_error("qmi/se column length mismatch");
  if (subset_size < 1 || n_subsets < 1 || bin_count < 1)
    throw value_error("subset_size, n_subsets and bin_count must be positive");
  const std::size_t need = std::size_t(subset_size) * std::size_t(n_subsets);
  if (qmi.size() < need) throw value_error("not enough rows for the requested stratified subsets");

  auto edges_of = [bin_count](const std::vector<double>& v) {
    const double lo = *std::min_element(v.begin(), v.end());
    const double hi = *std::max_element(v.begin(), v.end());
    std::vector<double> e(std::size_t(bin_count) + 1);
    for (int k = 0; k <= bin_count; ++k) e[k] = lo + (hi - lo) * double(k) / double(bin_count);
    e.back() = hi;
    return e;
  };
  const auto qe = edges_of(qmi);
  const auto ee = edges_of(se);
  auto bin_of = [bin_count](double v, double lo, double hi) {
    if (!(hi > lo)) return 0;
    const int b = int(std::floor((v - lo) / (hi - lo) * double(bin_count)));
    return std::clamp(b, 0, bin_count - 1);
  };

  std::vector<std::vector<std::size_t>> cells(std::size_t(bin_count) * std::size_t(bin_count));
  for (std::size_t i = 0; i < qmi.size(); ++i) {
    const int bq = bin_of(qmi[i], qe.front(), qe.back());
    const int bs = bin_of(se[i], ee.front(), ee.back());
    cells[std::size_t(bq) * std::size_t(bin_count) + std::size_t(bs)].push_back(i);
  }
  for (std::size_t cidx = 0; cidx < cells.size(); ++cidx)
    if (cells[cidx].size() > 1) {
      Rng rng(child_seed(seed, cidx));
      rng.shuffle(cells[cidx]);
    }

  std::vector<std::size_t> drawn;
  drawn.reserve(need);
  std::vector<std::size_t> cursor(cells.size(), 0);
  while (drawn.size() < need) {
    bool any = false;
    for (std::size_t cidx = 0; cidx < cells.size() && drawn.size() < need; ++cidx)
      if (cursor[cidx] < cells[cidx].size()) {
        drawn.push_back(cells[cidx][cursor[cidx]++]);
        any = true;
      }
    if (!any) throw numerical_error("stratified draw exhausted before filling subsets");
  }

  std::vector<StratifiedSubset> out;
  out.resize(std::size_t(n_subsets));
  for (int k = 0; k < n_subsets; ++k) {
    auto first = drawn.begin() + std::ptrdiff_t(k) * subset_size;
    out[k].indices.assign(first, first + subset_size);
    out[k].qmi_edges = qe;
    out[k].se_edges = ee;
  }
  return out;
}

// -------------------------------------------------------------------- path

RunRecord path_study(const PathConfig& cfg) {
  if (cfg.paths.empty()) throw value_error("path study needs at least one path");
  const uint64_t ref = bits_to_index(cfg.reference_bits);
  const uint32_t n = uint32_t(cfg.reference_bits.size());
  if (n > 7) throw value_error("path study supports at most 7 qubits");
  for (const auto& path : cfg.paths) {
    if (path.empty()) throw value_error("every path needs at least one rotation");
    for (const PauliRotation& rot : path)
      if (rot.word.n_qubits != n)
        throw value_error("path rotation width does not match the reference register");
  }
  check_prob(cfg.noise_per_g, "noise_per_g");
  if (cfg.model != NoiseModel::NONE && cfg.model != NoiseModel::GLOBAL_DEPOL_PER_EXP &&
      cfg.model != NoiseModel::LOCAL_DEPOL_PER_EXP)
    throw value_error(
        "path study applies exponentials exactly; model must be none, "
        "global_depol_per_exp or local_depol_per_exp");
  if (cfg.target && cfg.target->n_qubits != n)
    throw value_error("target width does not match the reference register");
  if (cfg.hamiltonian && cfg.hamiltonian->n_qubits != n)
    throw value_error("hamiltonian width does not match the reference register");
  if (cfg.mismatch_order < 1) throw value_error("mismatch_order must be >= 1");

  std::vector<std::string> cols = {"path",        "step",      "theta",
                                   "ideal_se_m2", "ideal_qmi", "noisy_purity",
                                   "noisy_se_m2", "noisy_qmi", "coherent_mismatch"};
  if (cfg.target)
    cols.insert(cols.end(),
                {"ideal_target_overlap", "noisy_target_overlap", "purified_target_overlap"});
  if (cfg.hamiltonian) cols.insert(cols.end(), {"ideal_energy", "noisy_energy", "energy_abs_error"});

  RunRecord rec;
  rec.study = "path";
  rec.seed = 0;
  rec.metrics.columns = cols;

  const std::vector<uint32_t> aq = all_qubits(n);
  std::vector<StateVector> ideal_finals;
  std::vector<double> final_mismatch;

  for (std::size_t pidx = 0; pidx < cfg.paths.size(); ++pidx) {
    StateVector psi = basis_state(n, ref);
    DensityMatrix rho = projector(psi);
    Table curve;
    curve.columns.assign(cols.begin() + 1, cols.end());

    double last_cm = 0.0;
    int step = 0;
    for (const PauliRotation& rot : cfg.paths[pidx]) {
      ++step;
      const Gate g = Gate::pauli_exp(rot.angle, rot.word);
      apply_gate(psi, g);
      apply_gate(rho, g);
      if (cfg.model == NoiseModel::GLOBAL_DEPOL_PER_EXP)
        depolarize_global(rho, cfg.noise_per_g);
      else if (cfg.model == NoiseModel::LOCAL_DEPOL_PER_EXP)
        depolarize_local(rho, cfg.noise_per_g, aq);

      const DensityMatrix ideal_dm = projector(psi);
      last_cm = coherent_mismatch(psi, rho, cfg.mismatch_order);
      std::vector<double> row = {double(pidx),
                                 double(step),
                                 rot.angle,
                                 stabilizer_renyi_2(ideal_dm),
                                 multipartite_qmi(ideal_dm, cfg.qmi_form),
                                 purity(rho),
                                 stabilizer_renyi_2(rho, false),
                                 multipartite_qmi(rho, cfg.qmi_form),
                                 last_cm};
      if (cfg.target) {
        row.push_back(overlap(psi, *cfg.target));
        row.push_back(fidelity_with_pure(rho, *cfg.target));
        row.push_back(
            fidelity_with_pure(purify(rho, cfg.mismatch_order).purified_state, *cfg.target));
      }
      if (cfg.hamiltonian) {
        const double ei = expectation(ideal_dm, *cfg.hamiltonian);
        const double en = expectation(rho, *cfg.hamiltonian);
        row.push_back(ei);
        row.push_back(en);
        row.push_back(std::abs(en - ei));
      }
      rec.metrics.add_row(row);
      curve.add_row(std::vector<double>(row.begin() + 1, row.end()));
    }
    rec.curves.emplace_back("path" + std::to_string(pidx), std::move(curve));
    ideal_finals.push_back(std::move(psi));
    final_mismatch.push_back(last_cm);
  }

  nlohmann::json olap = nlohmann::json::array();
  double min_off = 1.0, max_off = 0.0;
  for (std::size_t a = 0; a < ideal_finals.size(); ++a) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t b = 0; b < ideal_finals.size(); ++b) {
      const double v = overlap(ideal_finals[a], ideal_finals[b]);
      row.push_back(v);
      if (a != b) {
        min_off = std::min(min_off, v);
        max_off = std::max(max_off, v);
      }
    }
    olap.push_back(row);
  }
  rec.stats["final_mismatch"] = final_mismatch;
  rec.stats["pairwise_ideal_overlap"] = olap;
  if (ideal_finals.size() > 1) {
    rec.stats["min_pairwise_ideal_overlap"] = min_off;
    rec.stats["max_pairwise_ideal_overlap"] = max_off;
  }
  if (cfg.hamiltonian) rec.stats["chemical_accuracy_hartree"] = 0.00159;
  rec.stats["qmi_form"] = qmi_form_name(cfg.qmi_form);

  nlohmann::json jpaths = nlohmann::json::array();
  for (const auto& path : cfg.paths) {
    nlohmann::json jp = nlohmann::json::array();
    for (const PauliRotation& rot : path)
      jp.push_back({{"theta", rot.angle}, {"word", rot.word.str()}});
    jpaths.push_back(jp);
  }
  rec.config["study"] = "path";
  rec.config["paths"] = jpaths;
  rec.config["reference"] = cfg.reference_bits;
  rec.config["noise_per_g"] = cfg.noise_per_g;
  rec.config["noise_model"] = noise_model_name(cfg.model);
  rec.config["mismatch_order"] = cfg.mismatch_order;
  rec.config["qmi_form"] = qmi_form_name(cfg.qmi_form);
  rec.config["has_target"] = bool(cfg.target);
  rec.config["has_hamiltonian"] = bool(cfg.hamiltonian);
  return rec;
}

// ---------------------------------------------------------------- dressing

RunRecord dressing_study(const DressingConfig& cfg) {
  if (cfg.hamiltonians.empty()) throw value_error("dressing study needs at least one point");
  if (cfg.point_angles.size() != cfg.hamiltonians.size())
    throw value_error("point_angles and hamiltonians must have matching sizes");
  if (!cfg.h_labels.empty() && cfg.h_labels.size() != cfg.hamiltonians.size())
    throw value_error("h_labels must be empty or match hamiltonians");
  const uint32_t n = cfg.ansatz_word.n_qubits;
  if (n == 0 || cfg.ansatz_word.is_identity())
    throw value_error("ansatz word must be a non-identity Pauli word");
  if (n > 4) throw value_error("dressing study enumerates all bases; at most 4 qubits");
  if (cfg.reference_bits.size() != n)
    throw value_error("reference width does not match the ansatz word");
  for (const PauliSum& h : cfg.hamiltonians)
    if (h.n_qubits != n) throw value_error("hamiltonian width does not match the ansatz word");
  check_prob(cfg.noise.p, "noise probability");
  if (cfg.shots_per_basis < 1) throw value_error("shots_per_basis must be >= 1");
  if (cfg.k_groups < 1) throw value_error("k_groups must be >= 1");
  if (cfg.bootstrap_resamples < 2) throw value_error("bootstrap_resamples must be >= 2");

  const uint64_t ref = bits_to_index(cfg.reference_bits);
  Circuit fixed(n);
  fixed.append(Gate::pauli_exp(cfg.fixed_angle, cfg.ansatz_word));
  const StateVector psi_fixed = run_circuit_pure(fixed, ref);
  const DensityMatrix fixed_ideal_dm = projector(psi_fixed);
  const DensityMatrix rho_fixed = run_circuit(fixed, cfg.noise, ExpMode::COMPILED, ref);
  const ShadowSet shadows = sample_with_postselection(fixed, all_qubits(n), cfg.noise,
                                                      ExpMode::COMPILED, 0, cfg.shots_per_basis,
                                                      cfg.seed, ref);

  RunRecord rec;
  rec.study = "dressing";
  rec.seed = cfg.seed;
  rec.metrics.columns = {"point",
                         "delta",
                         "terms_before",
                         "terms_after",
                         "ideal_energy",
                         "dressed_ideal_energy",
                         "identity_abs_error",
                         "noisy_dense_energy",
                         "shadow_energy",
                         "shadow_abs_error",
                         "bootstrap_mean",
                         "bootstrap_stderr"};

  Table energy_curve;
  energy_curve.columns = {"delta", "ideal_energy", "noisy_dense_energy", "shadow_energy",
                          "bootstrap_stderr"};

  std::set<std::pair<uint64_t, uint64_t>> union_words;
  std::size_t total_before = 0;
  const auto mean_stat = [](const std::vector<double>& v) { return mean_of(v); };

  for (std::size_t i = 0; i < cfg.hamiltonians.size(); ++i) {
    const PauliSum& h = cfg.hamiltonians[i];
    const double delta = cfg.point_angles[i];
    const std::vector<PauliRotation> d_list = {PauliRotation(delta, cfg.ansatz_word),
                                               PauliRotation(-cfg.fixed_angle, cfg.ansatz_word)};
    const PauliSum hstar = dress_hamiltonian(h, d_list);

    Circuit orig(n);
    orig.append(Gate::pauli_exp(delta, cfg.ansatz_word));
    const StateVector psi_orig = run_circuit_pure(orig, ref);
    const double e_orig = expectation(projector(psi_orig), h);
    const double e_dressed = expectation(fixed_ideal_dm, hstar);
    const double e_noisy = expectation(rho_fixed, hstar);
    const double e_shadow = estimate_observable(shadows, hstar, cfg.k_groups);
    const std::vector<double> ests = per_record_estimates(shadows, hstar);
    const BootstrapResult boot =
        bootstrap(mean_stat, ests, cfg.bootstrap_resamples, child_seed(cfg.seed, 1000 + i));

    for (const PauliTerm& t : hstar.terms) union_words.insert({t.word.x_bits, t.word.z_bits});
    total_before += h.size();

    rec.metrics.add_row({double(i), delta, double(h.size()), double(hstar.size()), e_orig,
                         e_dressed, std::abs(e_orig - e_dressed), e_noisy, e_shadow,
                         std::abs(e_shadow - e_noisy), boot.mean, boot.stddev});
    energy_curve.add_row({delta, e_orig, e_noisy, e_shadow, boot.stddev});
  }
  rec.curves.emplace_back("energy", std::move(energy_curve));

  rec.stats["points"] = cfg.hamiltonians.size();
  rec.stats["total_terms_before"] = total_before;
  rec.stats["dressed_union_terms"] = union_words.size();
  rec.stats["postselect_rejected_ratio"] = shadows.rejected_ratio();
  rec.stats["accepted_records"] = shadows.accepted_count();
  rec.stats["chemical_accuracy_hartree"] = 0.00159;
  if (!cfg.h_labels.empty()) rec.stats["labels"] = cfg.h_labels;

  rec.config["study"] = "dressing";
  rec.config["seed"] = cfg.seed;
  rec.config["fixed_angle"] = cfg.fixed_angle;
  rec.config["ansatz_word"] = cfg.ansatz_word.str();
  rec.config["reference"] = cfg.reference_bits;
  rec.config["noise_model"] = noise_model_name(cfg.noise.model);
  rec.config["p"] = cfg.noise.p;
  rec.config["shots_per_basis"] = cfg.shots_per_basis;
  rec.config["k_groups"] = cfg.k_groups;
  rec.config["bootstrap_resamples"] = cfg.bootstrap_resamples;
  rec.config["point_angles"] = cfg.point_angles;
  if (!cfg.h_labels.empty()) rec.config["h_labels"] = cfg.h_labels;
  return rec;
}

// ----------------------------------------------------------------- be-path

std::vector<std::vector<PauliRotation>> be_circuits() {
  const PauliWord yx = parse_word("YXII", 4);
  const PauliWord yxxx = parse_word("YXXX", 4);
  const PauliWord yzxz = parse_word("YZXZ", 4);
  const PauliWord xyxx = parse_word("XYXX", 4);
  return {
      {PauliRotation(0.401, yx)},
      {PauliRotation(0.334, yxxx), PauliRotation(0.334, yzxz)},
      {PauliRotation(0.200, yzxz), PauliRotation(0.400, xyxx), PauliRotation(0.200, yzxz)},
  };
}

RunRecord be_path_experiment(const BePathConfig& cfg) {
  check_prob(cfg.p, "noise probability");
  if (cfg.shots_per_basis < 1) throw value_error("shots_per_basis must be >= 1");
  if (cfg.mismatch_order < 1) throw value_error("mismatch_order must be >= 1");

  const auto seqs = be_circuits();
  const uint64_t ref = 0b1111;
  std::vector<Circuit> circuits;
  for (const auto& seq : seqs) {
    Circuit c(4);
    for (const PauliRotation& rot : seq) c.append(Gate::pauli_exp(rot.angle, rot.word));
    circuits.push_back(std::move(c));
  }
  const StateVector target = run_circuit_pure(circuits.back(), ref);
  const NoiseSpec noise{cfg.model, cfg.p};
  const std::vector<uint32_t> aq = {0, 1, 2, 3};

  RunRecord rec;
  rec.study = "be-path";
  rec.seed = cfg.seed;
  rec.metrics.columns = {"n_exp",
                         "ideal_target_overlap",
                         "raw_overlap",
                         "purified_overlap",
                         "noisy_se_m2",
                         "noisy_qmi",
                         "coherent_mismatch",
                         "reject_exact",
                         "reject_sampled",
                         "shadow_raw_overlap",
                         "shadow_purified_overlap",
                         "shadow_purity"};

  for (std::size_t k = 0; k < circuits.size(); ++k) {
    const Circuit& c = circuits[k];
    const StateVector psi = run_circuit_pure(c, ref);
    const DensityMatrix rho = run_circuit(c, noise, ExpMode::COMPILED, ref);

    const double ideal_ov = overlap(psi, target);
    const double raw = fidelity_with_pure(rho, target);
    const double pur_ov =
        fidelity_with_pure(purify(rho, cfg.mismatch_order).purified_state, target);
    const double se_n = stabilizer_renyi_2(rho, false);
    const double qmi_n = multipartite_qmi(rho, cfg.qmi_form);
    const double cm = coherent_mismatch(psi, rho, cfg.mismatch_order);

    double p_even = 0.0;
    for (uint64_t d = 0; d < rho.dim(); ++d)
      if (std::popcount(d) % 2 == 0) p_even += rho.m(d, d).real();
    const double reject_exact = 1.0 - p_even;

    const ShadowSet sh = sample_with_postselection(c, aq, noise, ExpMode::COMPILED, 0,
                                                   cfg.shots_per_basis, child_seed(cfg.seed, k),
                                                   ref);
    const DensityMatrix sh_dm = shadow_state(sh);
    const double sh_raw = fidelity_with_pure(sh_dm, target);
    const double sh_pur =
        fidelity_with_pure(purify(sh_dm, cfg.mismatch_order).purified_state, target);

    rec.metrics.add_row({double(k + 1), ideal_ov, raw, pur_ov, se_n, qmi_n, cm, reject_exact,
                         sh.rejected_ratio(), sh_raw, sh_pur, purity(sh_dm)});
  }

  auto increasing = [&](const char* col) {
    const auto v = rec.metrics.column(col);
    for (std::size_t i = 1; i < v.size(); ++i)
      if (v[i] <= v[i - 1]) return false;
    return true;
  };
  auto decreasing = [&](const char* col) {
    const auto v = rec.metrics.column(col);
    for (std::size_t i = 1; i < v.size(); ++i)
      if (v[i] >= v[i - 1]) return false;
    return true;
  };
  rec.stats["raw_overlap_decreasing"] = decreasing("raw_overlap");
  rec.stats["purified_overlap_increasing"] = increasing("purified_overlap");
  rec.stats["reject_exact_increasing"] = increasing("reject_exact");
  rec.stats["qmi_form"] = qmi_form_name(cfg.qmi_form);

  rec.config["study"] = "be-path";
  rec.config["seed"] = cfg.seed;
  rec.config["p"] = cfg.p;
  rec.config["noise_model"] = noise_model_name(cfg.model);
  rec.config["shots_per_basis"] = cfg.shots_per_basis;
  rec.config["mismatch_order"] = cfg.mismatch_order;
  rec.config["qmi_form"] = qmi_form_name(cfg.qmi_form);
  return rec;
}

// ------------------------------------------------------------ shadows demo

RunRecord shadows_demo(const ShadowsDemoConfig& cfg) {
  check_prob(cfg.p, "noise probability");
  if (!(std::isfinite(cfg.theta))) throw value_error("theta must be finite");
  if (cfg.shots_per_basis < 1) throw value_error("shots_per_basis must be >= 1");
  if (cfg.n_bases < 0) throw value_error("n_bases must be >= 0");
  if (cfg.k_groups < 1) throw value_error("k_groups must be >= 1");

  const PauliWord word = parse_word("YXXX", 4);
  const uint64_t ref = 0b1100;
  Circuit c(4);
  c.append(Gate::pauli_exp(cfg.theta, word));
  const NoiseSpec noise{cfg.model, cfg.p};
  const StateVector psi = run_circuit_pure(c, ref);
  const DensityMatrix rho = run_circuit(c, noise, ExpMode::COMPILED, ref);
  const ShadowSet sh = sample_with_postselection(c, {0, 1, 2, 3}, noise, ExpMode::COMPILED,
                                                 cfg.n_bases, cfg.shots_per_basis, cfg.seed, ref);

  std::vector<std::pair<std::string, PauliSum>> observables;
  {
    PauliSum zz(4);
    zz.add(1.0, parse_word("ZZII", 4));
    PauliSum gen(4);
    gen.add(1.0, word);
    PauliSum zpar(4);
    zpar.add(1.0, parse_word("ZZZZ", 4));
    observables = {{"Z0 Z1", zz}, {"Y0 X1 X2 X3", gen}, {"Z0 Z1 Z2 Z3", zpar}};
  }

  RunRecord rec;
  rec.study = "shadows-demo";
  rec.seed = cfg.seed;
  rec.metrics.columns = {"obs_index", "shadow_estimate", "dense_value", "abs_error"};
  nlohmann::json names = nlohmann::json::array();
  for (std::size_t i = 0; i < observables.size(); ++i) {
    const double est = estimate_observable(sh, observables[i].second, cfg.k_groups);
    const double dv = expectation(rho, observables[i].second);
    rec.metrics.add_row({double(i), est, dv, std::abs(est - dv)});
    names.push_back(observables[i].first);
  }

  const DensityMatrix sh_dm = shadow_state(sh);
  rec.stats["observables"] = names;
  rec.stats["rejected_ratio"] = sh.rejected_ratio();
  rec.stats["accepted_records"] = sh.accepted_count();
  rec.stats["shadow_purity"] = purity(sh_dm);
  rec.stats["dense_purity"] = purity(rho);
  rec.stats["trace_distance"] = trace_distance(sh_dm, rho);
  rec.stats["shadow_target_overlap"] = fidelity_with_pure(sh_dm, psi);
  rec.stats["dense_target_overlap"] = fidelity_with_pure(rho, psi);

  rec.extra_files.emplace_back("shadows.txt", format_shadow_set(sh));

  rec.config["study"] = "shadows-demo";
  rec.config["seed"] = cfg.seed;
  rec.config["theta"] = cfg.theta;
  rec.config["p"] = cfg.p;
  rec.config["noise_model"] = noise_model_name(cfg.model);
  rec.config["shots_per_basis"] = cfg.shots_per_basis;
  rec.config["n_bases"] = cfg.n_bases;
  rec.config["k_groups"] = cfg.k_groups;
  return rec;
}

// ------------------------------------------------------------------- stats

Table correlation_matrix(const Table& t, const std::vector<std::string>& fields) {
  if (fields.size() < 2) throw value_error("correlation matrix needs at least two fields");
  std::vector<std::vector<double>> cols;
  cols.reserve(fields.size());
  for (const std::string& f : fields) cols.push_back(t.column(f));

  Table out;
  out.columns = {"field_index"};
  for (const std::string& f : fields) out.columns.push_back(f);
  for (std::size_t i = 0; i < cols.size(); ++i) {
    std::vector<double> row = {double(i)};
    for (std::size_t j = 0; j < cols.size(); ++j)
      row.push_back(i == j ? 1.0 : pearson(cols[i], cols[j]));
    out.add_row(std::move(row));
  }
  return out;
}

}  // namespace psim
