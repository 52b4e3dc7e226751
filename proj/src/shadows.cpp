#include "paulisim/shadows.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>

#include "paulisim/metrics.hpp"
#include "paulisim/rng.hpp"

namespace psim {

namespace {

constexpr char kLetters[3] = {'X', 'Y', 'Z'};

Matrix basis_rotation(char letter) {
  Matrix u(2, 2);
  const double r = 1.0 / std::sqrt(2.0);
  switch (letter) {
    case 'X':  // H
      u(0, 0) = r; u(0, 1) = r; u(1, 0) = r; u(1, 1) = -r;
      break;
    case 'Y':  // H S^dag
      u(0, 0) = r; u(0, 1) = cplx(0.0, -r); u(1, 0) = r; u(1, 1) = cplx(0.0, r);
      break;
    case 'Z':
      u = Matrix::identity(2);
      break;
    default:
      throw value_error(std::string("bad basis letter: ") + letter);
  }
  return u;
}

// 3 U^dag |b><b| U - I, exact dyadic entries so the trace is exactly 1
Matrix snapshot_factor(char letter, int bit) {
  Matrix m(2, 2);
  const double s = bit ? -1.0 : 1.0;
  switch (letter) {
    case 'X':
      m(0, 0) = 0.5; m(0, 1) = s * 1.5; m(1, 0) = s * 1.5; m(1, 1) = 0.5;
      break;
    case 'Y':
      m(0, 0) = 0.5; m(0, 1) = cplx(0.0, -s * 1.5); m(1, 0) = cplx(0.0, s * 1.5); m(1, 1) = 0.5;
      break;
    case 'Z':
      m(0, 0) = bit ? -1.0 : 2.0;
      m(1, 1) = bit ? 2.0 : -1.0;
      break;
    default:
      throw value_error(std::string("bad basis letter: ") + letter);
  }
  return m;
}

void check_basis_string(const std::string& basis, uint32_t n) {
  if (basis.size() != n) throw value_error("basis string length mismatch");
  for (char c : basis)
    if (c != 'X' && c != 'Y' && c != 'Z')
      throw value_error(std::string("bad basis letter: ") + c);
}

// diagonal of U rho U^dag for the per-qubit rotation given by the basis string;
// extra_identity_qubits appends unrotated qubits (the ancilla)
std::vector<double> rotated_diagonal(const Matrix& rho, const std::string& basis,
                                     uint32_t extra_identity_qubits) {
  Matrix u(1, 1);
  u(0, 0) = 1.0;
  for (char letter : basis) u = kron(u, basis_rotation(letter));
  for (uint32_t i = 0; i < extra_identity_qubits; ++i) u = kron(u, Matrix::identity(2));
  const Matrix rot = u * rho * dagger(u);
  std::vector<double> probs(rot.rows);
  double total = 0.0;
  for (std::size_t i = 0; i < rot.rows; ++i) {
    probs[i] = std::max(0.0, rot(i, i).real());
    total += probs[i];
  }
  if (std::abs(total - 1.0) > 1e-6)
    throw numerical_error("shadow sampling: rotated diagonal does not sum to 1");
  for (double& p : probs) p /= total;
  return probs;
}

uint64_t sample_index(const std::vector<double>& probs, Rng& rng) {
  const double r = rng.uniform();
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (r < acc) return i;
  }
  return probs.size() - 1;
}

std::string bits_string(uint64_t index, uint32_t n) {
  std::string s(n, '0');
  for (uint32_t q = 0; q < n; ++q)
    if (index & (uint64_t(1) << (n - 1 - q))) s[q] = '1';
  return s;
}

ShadowSet sample_from_bases(const DensityMatrix& rho, const std::vector<std::string>& bases,
                            int shots_per_basis, uint64_t seed) {
  if (shots_per_basis < 1) throw value_error("sample_shadows: shots_per_basis must be >= 1");
  if (rho.n_qubits > 7) throw value_error("sample_shadows: more than 7 qubits");
  ShadowSet set;
  set.n_qubits = rho.n_qubits;
  set.seed = seed;
  set.shots_per_basis = shots_per_basis;
  for (std::size_t b = 0; b < bases.size(); ++b) {
    const std::vector<double> probs = rotated_diagonal(rho.m, bases[b], 0);
    Rng rng(child_seed(seed, 1 + b));
    for (int shot = 0; shot < shots_per_basis; ++shot) {
      MeasurementRecord rec;
      rec.basis = bases[b];
      rec.outcome_bits = bits_string(sample_index(probs, rng), rho.n_qubits);
      set.records.push_back(std::move(rec));
    }
  }
  return set;
}

}  // namespace

std::size_t ShadowSet::accepted_count() const {
  std::size_t n = 0;
  for (const MeasurementRecord& r : records)
    if (r.accepted) ++n;
  return n;
}

double ShadowSet::rejected_ratio() const {
  if (records.empty()) throw value_error("shadow set: no records");
  return double(records.size() - accepted_count()) / double(records.size());
}

std::vector<std::string> all_basis_strings(uint32_t n) {
  if (n < 1 || n > 4) throw value_error("all_basis_strings: qubit count must be in [1, 4]");
  std::vector<std::string> out(1, "");
  for (uint32_t q = 0; q < n; ++q) {
    std::vector<std::string> next;
    next.reserve(out.size() * 3);
    for (const std::string& prefix : out)
      for (char l : kLetters) next.push_back(prefix + l);
    out = std::move(next);
  }
  return out;
}

ShadowSet sample_shadows(const DensityMatrix& rho, int n_bases, int shots_per_basis,
                         uint64_t seed) {
  if (n_bases < 1) throw value_error("sample_shadows: n_bases must be >= 1");
  Rng basis_rng(child_seed(seed, 0));
  std::vector<std::string> bases;
  bases.reserve(std::size_t(n_bases));
  for (int b = 0; b < n_bases; ++b) {
    std::string s(rho.n_qubits, 'Z');
    for (uint32_t q = 0; q < rho.n_qubits; ++q) s[q] = kLetters[basis_rng.below(3)];
    bases.push_back(std::move(s));
  }
  return sample_from_bases(rho, bases, shots_per_basis, seed);
}

ShadowSet sample_shadows_all_bases(const DensityMatrix& rho, int shots_per_basis, uint64_t seed) {
  return sample_from_bases(rho, all_basis_strings(rho.n_qubits), shots_per_basis, seed);
}

ShadowSet sample_with_postselection(const Circuit& circuit,
                                    const std::vector<uint32_t>& parity_qubits,
                                    const NoiseSpec& noise, ExpMode mode, int n_bases,
                                    int shots_per_basis, uint64_t seed, uint64_t initial_basis) {
  if (parity_qubits.empty()) throw value_error("postselection: parity set empty");
  for (uint32_t q : parity_qubits)
    if (q >= circuit.n_qubits) throw value_error("postselection: parity qubit out of range");
  if (shots_per_basis < 1) throw value_error("postselection: shots_per_basis must be >= 1");
  const uint32_t n = circuit.n_qubits;
  if (n + 1 > 7) throw value_error("postselection: more than 6 system qubits");

  // expected ancilla bit from the noiseless run; the sector must be definite
  const StateVector ideal = run_circuit_pure(circuit, initial_basis);
  uint64_t pmask = 0;
  for (uint32_t q : parity_qubits) pmask |= uint64_t(1) << (n - 1 - q);
  double p_even = 0.0;
  for (uint64_t c = 0; c < ideal.dim(); ++c)
    if ((std::popcount(c & pmask) & 1) == 0) p_even += std::norm(ideal.amps[c]);
  int expected;
  if (p_even > 1.0 - 1e-9) expected = 0;
  else if (p_even < 1e-9) expected = 1;
  else throw value_error("postselection: noiseless state has no definite parity");

  // widen to n+1 qubits (ancilla last, least-significant bit) and add CNOTs
  Circuit ext(n + 1);
  for (const Gate& g : circuit.gates) {
    if (g.kind == GateKind::PAULI_EXP) {
      PauliWord w;
      w.n_qubits = n + 1;
      w.x_bits = g.word.x_bits << 1;
      w.z_bits = g.word.z_bits << 1;
      ext.append(Gate::pauli_exp(g.angle, w));
    } else {
      ext.append(g);
    }
  }
  std::vector<uint32_t> sorted_parity = parity_qubits;
  std::sort(sorted_parity.begin(), sorted_parity.end());
  for (uint32_t q : sorted_parity) ext.append(Gate::cnot(q, n));

  const DensityMatrix rho = run_circuit(ext, noise, mode, initial_basis << 1);

  const std::vector<std::string> bases =
      n_bases == 0 ? all_basis_strings(n) : [&] {
        Rng basis_rng(child_seed(seed, 0));
        std::vector<std::string> out;
        for (int b = 0; b < n_bases; ++b) {
          std::string s(n, 'Z');
          for (uint32_t q = 0; q < n; ++q) s[q] = kLetters[basis_rng.below(3)];
          out.push_back(std::move(s));
        }
        return out;
      }();

  ShadowSet set;
  set.n_qubits = n;
  set.seed = seed;
  set.shots_per_basis = shots_per_basis;
  for (std::size_t b = 0; b < bases.size(); ++b) {
    const std::vector<double> probs = rotated_diagonal(rho.m, bases[b], 1);
    Rng rng(child_seed(seed, 1 + b));
    for (int shot = 0; shot < shots_per_basis; ++shot) {
      const uint64_t idx = sample_index(probs, rng);
      MeasurementRecord rec;
      rec.basis = bases[b];
      rec.outcome_bits = bits_string(idx >> 1, n);
      rec.ancilla_bit = int(idx & 1);
      rec.accepted = (*rec.ancilla_bit == expected);
      set.records.push_back(std::move(rec));
    }
  }
  return set;
}

DensityMatrix snapshot(const MeasurementRecord& r) {
  if (!r.accepted) throw value_error("snapshot: rejected record");
  if (r.basis.size() != r.outcome_bits.size() || r.basis.empty())
    throw value_error("snapshot: malformed record");
  if (r.basis.size() > 7) throw value_error("snapshot: more than 7 qubits");
  Matrix m(1, 1);
  m(0, 0) = 1.0;
  for (std::size_t q = 0; q < r.basis.size(); ++q) {
    const char bit = r.outcome_bits[q];
    if (bit != '0' && bit != '1') throw value_error("snapshot: malformed outcome bits");
    m = kron(m, snapshot_factor(r.basis[q], bit - '0'));
  }
  DensityMatrix rho(uint32_t(r.basis.size()));
  rho.m = std::move(m);
  return rho;
}

Matrix snapshot_mean(const ShadowSet& s) {
  const std::size_t accepted = s.accepted_count();
  if (accepted == 0) throw value_error("shadow set: no accepted records");
  const std::size_t d = std::size_t(1) << s.n_qubits;
  Matrix sum(d, d);
  for (const MeasurementRecord& r : s.records) {
    if (!r.accepted) continue;
    const DensityMatrix snap = snapshot(r);
    for (std::size_t i = 0; i < sum.a.size(); ++i) sum.a[i] += snap.m.a[i];
  }
  const double inv = 1.0 / double(accepted);
  for (cplx& v : sum.a) v *= inv;
  return sum;
}

DensityMatrix shadow_state(const ShadowSet& s) {
  const Matrix mean = snapshot_mean(s);
  const EigResult eig = hermitian_eig(mean);
  const std::size_t d = mean.rows;
  std::vector<double> clipped(d);
  double total = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    clipped[i] = std::max(0.0, eig.values[i]);
    total += clipped[i];
  }
  if (total < 1e-12) throw numerical_error("shadow_state: all eigenvalues clipped");
  DensityMatrix out(s.n_qubits);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      cplx v = 0.0;
      for (std::size_t k = 0; k < d; ++k)
        v += eig.vectors(i, k) * (clipped[k] / total) * std::conj(eig.vectors(j, k));
      out.m(i, j) = v;
    }
  return out;
}

namespace {

double record_estimate(const MeasurementRecord& r, const PauliSum& obs) {
  double sum = 0.0;
  for (const PauliTerm& t : obs.terms) {
    if (t.word.is_identity()) {
      sum += t.coeff.real();
      continue;
    }
    double est = 1.0;
    bool match = true;
    for (uint32_t q = 0; q < t.word.n_qubits && match; ++q) {
      const char l = t.word.letter(q);
      if (l == 'I') continue;
      if (r.basis[q] != l) {
        match = false;
        break;
      }
      est *= 3.0 * (r.outcome_bits[q] == '1' ? -1.0 : 1.0);
    }
    if (match) sum += t.coeff.real() * est;
  }
  return sum;
}

}  // namespace

std::vector<double> per_record_estimates(const ShadowSet& s, const PauliSum& obs) {
  if (obs.n_qubits != s.n_qubits) throw value_error("estimate: qubit count mismatch");
  std::vector<double> out;
  out.reserve(s.records.size());
  for (const MeasurementRecord& r : s.records)
    if (r.accepted) out.push_back(record_estimate(r, obs));
  return out;
}

double estimate_observable(const ShadowSet& s, const PauliSum& obs, int k_groups) {
  const std::vector<double> ests = per_record_estimates(s, obs);
  if (ests.empty()) throw value_error("estimate: no accepted records");
  if (k_groups < 1 || std::size_t(k_groups) > ests.size())
    throw value_error("estimate: k_groups outside [1, accepted records]");
  // Records arrive grouped by basis; round-robin assignment keeps group sizes
  // equal (within 1) while giving every group an even share of each basis.
  const std::size_t n = ests.size();
  std::vector<double> sums(std::size_t(k_groups), 0.0);
  std::vector<std::size_t> counts(std::size_t(k_groups), 0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t g = i % std::size_t(k_groups);
    sums[g] += ests[i];
    ++counts[g];
  }
  std::vector<double> means;
  means.reserve(std::size_t(k_groups));
  for (std::size_t g = 0; g < std::size_t(k_groups); ++g)
    means.push_back(sums[g] / double(counts[g]));
  std::sort(means.begin(), means.end());
  const std::size_t mid = means.size() / 2;
  if (means.size() % 2 == 1) return means[mid];
  return 0.5 * (means[mid - 1] + means[mid]);
}

std::string format_shadow_set(const ShadowSet& s) {
  std::string out;
  out += "qubits: " + std::to_string(s.n_qubits) + "\n";
  out += "seed: " + std::to_string(s.seed) + "\n";
  out += "shots_per_basis: " + std::to_string(s.shots_per_basis) + "\n";
  for (const MeasurementRecord& r : s.records) {
    out += r.basis + " " + r.outcome_bits + " ";
    out += r.ancilla_bit ? std::to_string(*r.ancilla_bit) : "-";
    out += r.accepted ? " 1\n" : " 0\n";
  }
  return out;
}

ShadowSet parse_shadow_set(std::istream& in) {
  ShadowSet s;
  std::string line;
  int lineno = 0;
  const auto fail = [&](const std::string& msg) {
    throw value_error("shadow set line " + std::to_string(lineno) + ": " + msg);
  };
  const auto header = [&](const std::string& key) -> uint64_t {
    if (!std::getline(in, line)) fail("missing header " + key);
    ++lineno;
    std::istringstream ls(line);
    std::string k, v, rest;
    if (!(ls >> k >> v) || (ls >> rest) || k != key + ":") fail("expected \"" + key + ": <int>\"");
    try {
      std::size_t used = 0;
      const uint64_t x = std::stoull(v, &used);
      if (used != v.size()) fail("bad integer in header " + key);
      return x;
    } catch (const value_error&) {
      throw;
    } catch (const std::exception&) {
      fail("bad integer in header " + key);
    }
    return 0;
  };
  const uint64_t n = header("qubits");
  if (n < 1 || n > 7) fail("qubit count must be in [1, 7]");
  s.n_qubits = uint32_t(n);
  s.seed = header("seed");
  const uint64_t shots = header("shots_per_basis");
  if (shots < 1 || shots > (uint64_t(1) << 31)) fail("bad shots_per_basis");
  s.shots_per_basis = int(shots);
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string basis, bits, anc, acc, rest;
    if (!(ls >> basis)) continue;  // blank line
    if (!(ls >> bits >> anc >> acc) || (ls >> rest)) fail("expected 4 fields");
    check_basis_string(basis, s.n_qubits);
    if (bits.size() != s.n_qubits) fail("outcome length mismatch");
    for (char c : bits)
      if (c != '0' && c != '1') fail("outcome bits must be 0/1");
    MeasurementRecord rec;
    rec.basis = basis;
    rec.outcome_bits = bits;
    if (anc == "-") rec.ancilla_bit.reset();
    else if (anc == "0" || anc == "1") rec.ancilla_bit = anc[0] - '0';
    else fail("ancilla must be -, 0, or 1");
    if (acc == "0") rec.accepted = false;
    else if (acc == "1") rec.accepted = true;
    else fail("accepted flag must be 0 or 1");
    s.records.push_back(std::move(rec));
  }
  return s;
}

ShadowSet read_shadow_set_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open shadow file: " + path);
  return parse_shadow_set(in);
}

void write_shadow_set_file(const ShadowSet& s, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot write shadow file: " + path);
  out << format_shadow_set(s);
  if (!out) throw io_error("failed writing shadow file: " + path);
}

}  // namespace psim
