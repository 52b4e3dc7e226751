// Acceptance gate: one pass/fail line per criterion; exit code = failure count.
// argv[1] (optional) points at the shipped config/data directory.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "paulisim/circuit.hpp"
#include "paulisim/dense.hpp"
#include "paulisim/errors.hpp"
#include "paulisim/experiments.hpp"
#include "paulisim/metrics.hpp"
#include "paulisim/pauli.hpp"
#include "paulisim/rng.hpp"
#include "paulisim/shadows.hpp"
#include "paulisim/study_runner.hpp"

using namespace psim;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

std::string g_data_dir = "data";

StateVector random_state(Rng& rng, uint32_t n) {
  StateVector v(n);
  for (auto& a : v.amps) a = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
  const double nrm = v.norm();
  for (auto& a : v.amps) a /= nrm;
  return v;
}

Matrix sum_matrix(const PauliSum& s) {
  const std::size_t d = std::size_t(1) << s.n_qubits;
  Matrix m(d, d);
  for (const auto& t : s.terms) m = m + t.coeff * pauli_matrix(t.word);
  return m;
}

std::string fmt(double v) {
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string fmt6(double v) {
  if (v == 0.0) v = 0.0;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

uint64_t fnv1a(const std::string& bytes) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw io_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------- criterion 1
Outcome criterion1() {
  nlohmann::json cfg = {{"study", "primitive"}, {"p", 0.0}, {"noise_model", "none"}};
  RunRecord rec = run_study_config(cfg, g_data_dir);
  const auto theta = rec.metrics.column("theta");
  const auto se = rec.metrics.column("ideal_se_m2");
  const auto qmi = rec.metrics.column("ideal_qmi");
  bool ok = std::abs(se.front()) < 1e-8 && std::abs(se.back()) < 1e-8;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < se.size(); ++i)
    if (se[i] > se[arg]) arg = i;
  // the grid holds pi/4 exactly at its midpoint; allow one step either way
  const std::size_t mid = (se.size() - 1) / 2;
  ok = ok && (arg + 1 >= mid && arg <= mid + 1);
  bool monotone = true;
  for (std::size_t i = 1; i < qmi.size(); ++i) monotone = monotone && qmi[i] >= qmi[i - 1] - 1e-8;
  ok = ok && monotone;
  return {ok, "se(0)=" + fmt(se.front()) + " se(pi/2)=" + fmt(se.back()) + " argmax=" +
                 std::to_string(arg) + "/" + std::to_string(se.size() - 1) +
                 " theta*=" + fmt(theta[arg]) + (monotone ? " qmi monotone" : " QMI NOT monotone")};
}

// ---------------------------------------------------------------- criterion 2
Outcome criterion2() {
  nlohmann::json cfg = {{"study", "primitive"}, {"p", 0.002}};
  RunRecord rec = run_study_config(cfg, g_data_dir);
  const auto theta = rec.metrics.column("theta");
  const auto pur = rec.metrics.column("noisy_purity");
  const auto se_i = rec.metrics.column("ideal_se_m2");
  const auto se_n = rec.metrics.column("noisy_se_m2");
  const auto qmi_i = rec.metrics.column("ideal_qmi");
  const auto qmi_n = rec.metrics.column("noisy_qmi");
  double min_pur = 1.0, worst_se = 1.0, worst_qmi = 1.0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    min_pur = std::min(min_pur, pur[i]);
    worst_se = std::min(worst_se, se_n[i] - se_i[i]);
    if (theta[i] >= 0.3) worst_qmi = std::min(worst_qmi, qmi_i[i] - qmi_n[i]);
  }
  const bool ok = min_pur >= 0.8 && worst_se >= 0.0 && worst_qmi >= 0.0;
  return {ok, "min purity=" + fmt(min_pur) + " min(se_n-se_i)=" + fmt(worst_se) +
                 " min(qmi_i-qmi_n|theta>=0.3)=" + fmt(worst_qmi)};
}

// ---------------------------------------------------------------- criterion 3
Outcome criterion3() {
  Circuit t(1);
  t.append(Gate::h(0));
  t.append(Gate::rz(0, M_PI / 4));
  const double m2_t = stabilizer_renyi_2(projector(run_circuit_pure(t)));
  const double target = std::log2(4.0 / 3.0);
  bool ok = std::abs(m2_t - target) < 1e-9;

  double worst = 0.0;
  Rng rng(20260822);
  for (int it = 0; it < 100; ++it) {
    Circuit c(4);
    for (int g = 0; g < 40; ++g) {
      const int pick = int(rng.below(3));
      const uint32_t q = uint32_t(rng.below(4));
      if (pick == 0) c.append(Gate::h(q));
      if (pick == 1) c.append(Gate::rz(q, M_PI / 2));
      if (pick == 2) {
        const uint32_t tq = uint32_t(rng.below(4));
        if (tq != q) c.append(Gate::cnot(q, tq));
      }
    }
    const double m2 = std::abs(stabilizer_renyi_2(projector(run_circuit_pure(c))));
    worst = std::max(worst, m2);
  }
  ok = ok && worst < 1e-8;
  return {ok, "|M2(T|+>)-log2(4/3)|=" + fmt(std::abs(m2_t - target)) +
                 " max|M2(Clifford)| over 100 circuits=" + fmt(worst)};
}

// ---------------------------------------------------------------- criterion 4
Outcome criterion4() {
  StateVector bell(2);
  bell.amps[0] = bell.amps[3] = 1.0 / std::sqrt(2.0);
  StateVector ghz4(4);
  ghz4.amps.front() = ghz4.amps.back() = 1.0 / std::sqrt(2.0);
  const double q_bell = multipartite_qmi(projector(bell));
  const double q_ghz = multipartite_qmi(projector(ghz4));
  const double q_prod = multipartite_qmi(projector(basis_state("0101")));
  const bool ok =
      std::abs(q_bell - 2.0) < 1e-8 && std::abs(q_ghz - 4.0) < 1e-8 && std::abs(q_prod) < 1e-8;
  return {ok, "bell=" + fmt(q_bell) + " ghz4=" + fmt(q_ghz) + " product=" + fmt(q_prod)};
}

// ---------------------------------------------------------------- criterion 5
Outcome criterion5() {
  Rng rng(501);
  double worst_c = 0.0;
  for (uint32_t n = 1; n <= 4; ++n) {
    for (double p : {0.1, 0.25, 0.5}) {
      for (int rep = 0; rep < 5; ++rep) {
        StateVector ideal = random_state(rng, n);
        DensityMatrix rho = projector(ideal);
        depolarize_global(rho, p);
        worst_c = std::max(worst_c, coherent_mismatch(ideal, rho, 16));
      }
    }
  }
  bool ok = worst_c < 1e-6;

  bool monotone = true;
  for (int it = 0; it < 100; ++it) {
    const uint32_t n = 1 + uint32_t(rng.below(3));
    StateVector ideal = random_state(rng, n);
    DensityMatrix rho = projector(ideal);
    DensityMatrix pert = projector(random_state(rng, n));
    const double w = 0.4 * rng.uniform();
    rho.m = cplx(1 - w, 0) * rho.m + cplx(w, 0) * pert.m;
    double last = 2.0;
    for (int order : {1, 2, 4, 8, 16}) {
      const double c = coherent_mismatch(ideal, rho, order);
      monotone = monotone && c <= last + 1e-9;
      last = c;
    }
  }
  ok = ok && monotone;
  return {ok, "max c over depolarized grid=" + fmt(worst_c) +
                 (monotone ? ", purification monotone on 100 mixed states"
                           : ", monotonicity VIOLATED")};
}

// ---------------------------------------------------------------- criterion 6
Outcome criterion6() {
  RunRecord rec = run_study_config(load_config_file(g_data_dir + "/random.json"), g_data_dir);
  const int corner = rec.stats.at("corner_count").get<int>();
  const auto& strat = rec.stats.at("stratified");
  const double m_dse = strat.at("mean_corr_c_abs_dse").get<double>();
  const double m_pur = strat.at("mean_corr_c_purity").get<double>();
  const auto& levels = rec.stats.at("level_stats");
  const auto& top = levels.back();
  const double c_dse = top.at("corr_c_abs_dse").get<double>();
  const double c_dqmi = top.at("corr_c_abs_dqmi").get<double>();
  const double c_ideal = top.at("corr_c_se_ideal").get<double>();
  const bool ok = corner == 0 && m_dse > 0.5 && m_pur < -0.5 && c_dse > c_ideal &&
                  c_dqmi > c_ideal;
  return {ok, "corner=" + std::to_string(corner) + " strat corr(c,|dSE|)=" + fmt(m_dse) +
                 " corr(c,purity)=" + fmt(m_pur) + " top level: " + fmt(c_dse) + "/" +
                 fmt(c_dqmi) + " vs ideal " + fmt(c_ideal)};
}

// ---------------------------------------------------------------- criterion 7
Outcome criterion7() {
  RunRecord rec = run_study_config(load_config_file(g_data_dir + "/h3_paths.json"), g_data_dir);
  const auto fin = rec.stats.at("final_mismatch");
  const double c0 = fin.at(0).get<double>(), c2 = fin.at(2).get<double>();
  bool ok = c0 >= c2;
  const auto& ov = rec.stats.at("pairwise_ideal_overlap");
  double min_ov = 1.0, max_ov = 0.0;
  for (std::size_t i = 0; i < ov.size(); ++i)
    for (std::size_t j = i + 1; j < ov.size(); ++j) {
      const double v = ov.at(i).at(j).get<double>();
      min_ov = std::min(min_ov, v);
      max_ov = std::max(max_ov, v);
    }
  ok = ok && min_ov > 0.99 && max_ov < 1.0 - 1e-6;
  return {ok, "c0=" + fmt(c0) + " c2=" + fmt(c2) + " pairwise overlap in [" + fmt6(min_ov) +
                 ", " + fmt6(max_ov) + "]"};
}

// ---------------------------------------------------------------- criterion 8
Outcome criterion8() {
  Rng rng(808);
  const PauliWord ansatz = parse_word("YXXX", 4);
  const uint64_t ref = 0b1100;
  const double fixed = 0.401;
  double worst_e = 0.0, worst_m = 0.0;
  for (int it = 0; it < 20; ++it) {
    PauliSum h(4);
    const int terms = 3 + int(rng.below(10));
    for (int t = 0; t < terms; ++t) {
      PauliWord w = PauliWord::identity(4);
      for (uint32_t q = 0; q < 4; ++q) w.set_letter(q, "IXYZ"[rng.below(4)]);
      h.add(rng.uniform(-1, 1), w);
    }
    const double delta = rng.uniform(-1.2, 1.2);
    const std::vector<PauliRotation> d = {PauliRotation(delta, ansatz),
                                          PauliRotation(-fixed, ansatz)};
    PauliSum hstar = dress_hamiltonian(h, d);

    Circuit orig(4), fix(4);
    orig.append(Gate::pauli_exp(delta, ansatz));
    fix.append(Gate::pauli_exp(fixed, ansatz));
    const double e_orig =
        expectation(run_circuit(orig, {NoiseModel::NONE, 0.0}, ExpMode::EXACT, ref), h);
    const double e_fix =
        expectation(run_circuit(fix, {NoiseModel::NONE, 0.0}, ExpMode::EXACT, ref), hstar);
    worst_e = std::max(worst_e, std::abs(e_orig - e_fix));

    // symbolic dressing against the dense conjugation oracle
    Matrix dm = Matrix::identity(16);
    for (const auto& r : d) {
      PauliWord w = r.word;
      w.phase_pow = 0;
      const double half = r.angle / 2.0;
      Matrix u = cplx(std::cos(half), 0) * Matrix::identity(16) +
                 cplx(0, -std::sin(half)) * pauli_matrix(w);
      dm = dm * u;
    }
    Matrix expect = dagger(dm) * sum_matrix(h) * dm;
    Matrix got = sum_matrix(hstar);
    for (std::size_t i = 0; i < 16; ++i)
      for (std::size_t j = 0; j < 16; ++j)
        worst_m = std::max(worst_m, std::abs(got(i, j) - expect(i, j)));
  }
  const bool ok = worst_e < 1e-10 && worst_m < 1e-10;
  return {ok, "max energy gap=" + fmt(worst_e) + " max dense-conjugation gap=" + fmt(worst_m) +
                 " over 20 random Hamiltonians"};
}

// ---------------------------------------------------------------- criterion 9
Outcome criterion9() {
  // (a) snapshot-mean convergence slope on a fixed 2-qubit state
  Circuit c2q(2);
  c2q.append(Gate::pauli_exp(0.7, parse_word("YX", 2)));
  DensityMatrix rho2 = run_circuit(c2q, {NoiseModel::NONE, 0.0});
  std::vector<double> log_n, log_d;
  for (int n : {100, 1000, 10000, 100000}) {
    ShadowSet s = sample_shadows(rho2, n, 1, 900 + n);
    DensityMatrix est(2);
    est.m = snapshot_mean(s);
    log_n.push_back(std::log(double(n)));
    log_d.push_back(std::log(trace_distance(est, rho2)));
  }
  const double n_pts = double(log_n.size());
  const double mx = std::accumulate(log_n.begin(), log_n.end(), 0.0) / n_pts;
  const double my = std::accumulate(log_d.begin(), log_d.end(), 0.0) / n_pts;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < log_n.size(); ++i) {
    num += (log_n[i] - mx) * (log_d[i] - my);
    den += (log_n[i] - mx) * (log_n[i] - mx);
  }
  const double slope = num / den;
  bool ok = slope >= -0.6 && slope <= -0.4;

  // (b) 81x1000 observable estimates vs the dense value, within 5 stderr
  Circuit prim(4);
  prim.append(Gate::pauli_exp(0.401, parse_word("YXXX", 4)));
  DensityMatrix rho4 =
      run_circuit(prim, {NoiseModel::GLOBAL_DEPOL_PER_EXP, 0.002}, ExpMode::EXACT, 0b1100);
  ShadowSet shots = sample_shadows_all_bases(rho4, 1000, 909);
  PauliSum h = parse_pauli_sum_file(g_data_dir + "/h2_points/point_00.txt");
  PauliSum h19 = dress_hamiltonian(h, {PauliRotation(-0.553199, parse_word("YXXX", 4)),
                                       PauliRotation(-0.401, parse_word("YXXX", 4))});
  const double dense = expectation(rho4, h19);
  const double est = estimate_observable(shots, h19, 5);
  const std::vector<double> per = per_record_estimates(shots, h19);
  double pm = std::accumulate(per.begin(), per.end(), 0.0) / double(per.size());
  double var = 0.0;
  for (double v : per) var += (v - pm) * (v - pm);
  const double stderr_mean = std::sqrt(var / double(per.size() - 1) / double(per.size()));
  ok = ok && std::abs(est - dense) <= 5.0 * stderr_mean;

  // (c) postselected rejection ratio: zero without noise, strictly increasing with p
  std::vector<double> ratios;
  for (double p : {0.0, 0.001, 0.004, 0.016, 0.05}) {
    const NoiseSpec noise{p > 0 ? NoiseModel::GLOBAL_DEPOL_PER_EXP : NoiseModel::NONE, p};
    ShadowSet s =
        sample_with_postselection(prim, {0, 1, 2, 3}, noise, ExpMode::EXACT, 0, 200, 911, 0b1100);
    ratios.push_back(s.rejected_ratio());
  }
  bool increasing = ratios.front() == 0.0;
  for (std::size_t i = 1; i < ratios.size(); ++i)
    increasing = increasing && ratios[i] > ratios[i - 1];
  ok = ok && increasing;
  return {ok, "slope=" + fmt(slope) + " |est-dense|=" + fmt(std::abs(est - dense)) + " (5se=" +
                 fmt(5 * stderr_mean) + ") reject ratios " + fmt(ratios.front()) + ".." +
                 fmt(ratios.back()) + (increasing ? " strictly increasing" : " NOT increasing")};
}

// --------------------------------------------------------------- criterion 10
Outcome criterion10() {
  const fs::path base = fs::temp_directory_path() / "psim_acceptance_repro";
  fs::remove_all(base);
  const std::vector<nlohmann::json> configs = {
      {{"study", "primitive"}, {"angle_grid", "0:1.5707963267948966:9"}, {"p", 0.002}},
      {{"study", "random"}, {"count", 100}, {"subset_size", 20}, {"seed", 1}},
      [] {
        nlohmann::json j = {{"study", "shadows-demo"}};
        j["shots_per_basis"] = 50;
        return j;
      }(),
      {{"study", "be-path"}, {"shots_per_basis", 100}, {"seed", 5}},
  };
  nlohmann::json path_cfg = load_config_file(g_data_dir + "/h3_paths.json");
  nlohmann::json dress_cfg = load_config_file(g_data_dir + "/dressing.json");
  dress_cfg["shots_per_basis"] = 100;
  dress_cfg["bootstrap_resamples"] = 50;
  std::vector<nlohmann::json> all = configs;
  all.push_back(path_cfg);
  all.push_back(dress_cfg);

  bool ok = true;
  std::string detail;
  for (std::size_t i = 0; i < all.size(); ++i) {
    RunRecord a = run_study_config(all[i], g_data_dir);
    RunRecord b = run_study_config(all[i], g_data_dir);
    const fs::path da = base / (std::to_string(i) + "a"), db = base / (std::to_string(i) + "b");
    write_run(a, da.string());
    write_run(b, db.string());
    const std::string ba = slurp(da / "metrics.csv"), bb = slurp(db / "metrics.csv");
    const bool same = fnv1a(ba) == fnv1a(bb) && ba == bb;
    ok = ok && same;
    if (!detail.empty()) detail += " ";
    detail += a.study + (same ? "=ok" : "=MISMATCH");
  }
  fs::remove_all(base);
  return {ok, detail};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_data_dir = argv[1];
  using Fn = std::function<Outcome()>;
  const std::vector<std::pair<std::string, Fn>> criteria = {
      {"noiseless primitive sweep endpoints, peak and QMI monotonicity", criterion1},
      {"noisy primitive panel at p=0.002", criterion2},
      {"stabilizer Renyi entropy: T-state value and Clifford nulls", criterion3},
      {"QMI on Bell, GHZ and product states", criterion4},
      {"purification: depolarized mismatch and order monotonicity", criterion5},
      {"random-circuit study correlations at count=1000", criterion6},
      {"operator-ordering path study", criterion7},
      {"dressing identity, symbolic vs dense", criterion8},
      {"shadows: convergence slope, estimates, postselection", criterion9},
      {"byte-identical reruns for every study", criterion10},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    if (!out.ok) ++failures;
    std::printf("[%s] criterion %zu: %s — %s\n", out.ok ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), out.detail.c_str());
    std::fflush(stdout);
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures;
}
