#include "paulisim/metrics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "paulisim/rng.hpp"

namespace psim {

void MetricReport::validate() const {
  if (!(purity > 0.0 && purity <= 1.0 + 1e-9))
    throw numerical_error("metric report: purity outside (0, 1]");
  if (se_m2 < -1e-9) throw numerical_error("metric report: negative se_m2");
  if (qmi < -1e-9) throw numerical_error("metric report: negative qmi");
  for (const auto& opt : {overlap_with_target, coherent_mismatch})
    if (opt && (*opt < -1e-9 || *opt > 1.0 + 1e-9))
      throw numerical_error("metric report: bounded field outside [0, 1]");
}

QmiForm parse_qmi_form(const std::string& name) {
  if (name == "kumar") return QmiForm::KUMAR;
  if (name == "watanabe") return QmiForm::WATANABE;
  throw value_error("unknown qmi form: " + name);
}

std::string qmi_form_name(QmiForm f) {
  return f == QmiForm::KUMAR ? "kumar" : "watanabe";
}

double purity(const DensityMatrix& rho) {
  // tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
  double s = 0.0;
  for (const cplx& v : rho.m.a) s += std::norm(v);
  return s;
}

namespace {

double expectation_walk(const DensityMatrix& rho, uint64_t x, uint64_t z, uint8_t phase_pow) {
  static const cplx kPhases[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const int ys = std::popcount(x & z);
  const cplx base = kPhases[(phase_pow + ys) % 4];
  const std::size_t d = rho.dim();
  cplx s = 0.0;
  for (uint64_t k = 0; k < d; ++k) {
    const double sign = (std::popcount(k & z) & 1) ? -1.0 : 1.0;
    s += sign * rho.m(k, k ^ x);
  }
  return (base * s).real();
}

}  // namespace

double pauli_expectation(const DensityMatrix& rho, const PauliWord& w) {
  if (w.n_qubits != rho.n_qubits) throw value_error("expectation: qubit count mismatch");
  return expectation_walk(rho, w.x_bits, w.z_bits, w.phase_pow);
}

double expectation(const DensityMatrix& rho, const PauliSum& obs) {
  if (obs.n_qubits != rho.n_qubits) throw value_error("expectation: qubit count mismatch");
  double s = 0.0;
  for (const PauliTerm& t : obs.terms)
    s += t.coeff.real() * pauli_expectation(rho, t.word);
  return s;
}

double stabilizer_renyi_2(const DensityMatrix& rho, bool subtract_entropy) {
  const uint32_t n = rho.n_qubits;
  if (n > 7) throw value_error("stabilizer_renyi_2: more than 7 qubits");
  const uint64_t d = uint64_t(1) << n;
  double s4 = 0.0;
  for (uint64_t x = 0; x < d; ++x)
    for (uint64_t z = 0; z < d; ++z) {
      const double e = expectation_walk(rho, x, z, 0);
      const double e2 = e * e;
      s4 += e2 * e2;
    }
  double val = -std::log2(s4 / double(d));
  if (subtract_entropy) val -= von_neumann_entropy(rho);
  return val;
}

double von_neumann_entropy(const DensityMatrix& rho) {
  const EigResult eig = hermitian_eig(rho.m);
  double s = 0.0;
  for (double v : eig.values) {
    if (v < -1e-9) throw numerical_error("von_neumann_entropy: negative eigenvalue");
    if (v < 1e-12) continue;
    s -= v * std::log2(v);
  }
  return s;
}

double multipartite_qmi(const DensityMatrix& rho, QmiForm form) {
  const uint32_t n = rho.n_qubits;
  if (n < 2) throw value_error("multipartite_qmi: needs at least 2 qubits");
  const double s_full = von_neumann_entropy(rho);
  double total = 0.0;
  for (uint32_t i = 0; i < n; ++i) {
    std::vector<uint32_t> keep;
    if (form == QmiForm::KUMAR) {
      for (uint32_t q = 0; q < n; ++q)
        if (q != i) keep.push_back(q);
    } else {
      keep.push_back(i);
    }
    total += von_neumann_entropy(partial_trace(rho, keep));
  }
  const double factor = form == QmiForm::KUMAR ? double(n - 1) : 1.0;
  return total - factor * s_full;
}

PurificationResult purify(const DensityMatrix& rho, int order) {
  if (order < 1) throw value_error("purify: order must be >= 1");
  Matrix acc = rho.m;
  for (int i = 1; i < order; ++i) acc = acc * rho.m;
  const double tr = trace(acc).real();
  if (!(tr >= 1e-300)) throw numerical_error("purify: trace underflow");
  PurificationResult r;
  r.order = order;
  r.purified_state.n_qubits = rho.n_qubits;
  r.purified_state.m = cplx(1.0 / tr) * acc;
  r.residual_purity_gap = 1.0 - purity(r.purified_state);
  return r;
}

double coherent_mismatch(const StateVector& ideal, const DensityMatrix& noisy, int order) {
  if (ideal.n_qubits != noisy.n_qubits) throw value_error("coherent_mismatch: qubit count mismatch");
  const PurificationResult pur = purify(noisy, order);
  const double c = 1.0 - fidelity_with_pure(pur.purified_state, ideal);
  return std::clamp(c, 0.0, 1.0);
}

double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw value_error("pearson: length mismatch");
  if (xs.size() < 3) throw value_error("pearson: needs at least 3 points");
  const double n = double(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  const double denom = std::sqrt(sxx * syy);
  if (denom == 0.0) throw numerical_error("pearson: undefined correlation (degenerate variance)");
  return std::clamp(sxy / denom, -1.0, 1.0);
}

BootstrapResult bootstrap(const std::function<double(const std::vector<double>&)>& stat,
                          const std::vector<double>& data, int resamples, uint64_t seed) {
  if (data.empty()) throw value_error("bootstrap: empty data");
  if (resamples < 2) throw value_error("bootstrap: needs at least 2 resamples");
  Rng rng(seed);
  std::vector<double> vals(std::size_t(resamples), 0.0);
  std::vector<double> draw(data.size());
  for (int r = 0; r < resamples; ++r) {
    for (std::size_t i = 0; i < data.size(); ++i) draw[i] = data[rng.below(data.size())];
    vals[std::size_t(r)] = stat(draw);
  }
  double mean = 0.0;
  for (double v : vals) mean += v;
  mean /= double(resamples);
  double var = 0.0;
  for (double v : vals) var += (v - mean) * (v - mean);
  var /= double(resamples - 1);
  BootstrapResult out;
  out.mean = mean;
  out.stddev = std::sqrt(var);
  return out;
}

}  // namespace psim
