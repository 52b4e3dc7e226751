#include "paulisim/circuit.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace psim {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw value_error(std::string(what) + ": angle must be finite");
}

}  // namespace

Gate Gate::h(uint32_t q) {
  Gate g;
  g.kind = GateKind::H;
  g.q0 = q;
  return g;
}

Gate Gate::rx(uint32_t q, double angle) {
  require_finite(angle, "rx");
  Gate g;
  g.kind = GateKind::RX;
  g.q0 = q;
  g.angle = angle;
  return g;
}

Gate Gate::rz(uint32_t q, double angle) {
  require_finite(angle, "rz");
  Gate g;
  g.kind = GateKind::RZ;
  g.q0 = q;
  g.angle = angle;
  return g;
}

Gate Gate::x(uint32_t q) {
  Gate g;
  g.kind = GateKind::X;
  g.q0 = q;
  return g;
}

Gate Gate::cnot(uint32_t control, uint32_t target) {
  if (control == target) throw value_error("cnot: control and target must differ");
  Gate g;
  g.kind = GateKind::CNOT;
  g.q0 = control;
  g.q1 = target;
  return g;
}

Gate Gate::pauli_exp(double theta, const PauliWord& w) {
  require_finite(theta, "exp");
  if (w.is_identity()) throw value_error("exp: identity word is not a rotation");
  if (w.phase_pow != 0) throw value_error("exp: word must carry no phase");
  Gate g;
  g.kind = GateKind::PAULI_EXP;
  g.angle = theta;
  g.word = w;
  return g;
}

std::vector<uint32_t> Gate::acting_qubits() const {
  switch (kind) {
    case GateKind::CNOT:
      return {q0, q1};
    case GateKind::PAULI_EXP: {
      std::vector<uint32_t> qs;
      for (uint32_t q = 0; q < word.n_qubits; ++q)
        if (word.letter(q) != 'I') qs.push_back(q);
      return qs;
    }
    default:
      return {q0};
  }
}

void Circuit::append(const Gate& g) {
  for (uint32_t q : g.acting_qubits())
    if (q >= n_qubits) throw value_error("gate touches qubit outside the register");
  if (g.kind == GateKind::PAULI_EXP && g.word.n_qubits != n_qubits)
    throw value_error("exp word width does not match the register");
  gates.push_back(g);
}

NoiseModel parse_noise_model(const std::string& name) {
  if (name == "none") return NoiseModel::NONE;
  if (name == "global_depol_per_exp") return NoiseModel::GLOBAL_DEPOL_PER_EXP;
  if (name == "local_depol_per_gate") return NoiseModel::LOCAL_DEPOL_PER_GATE;
  if (name == "local_depol_per_exp") return NoiseModel::LOCAL_DEPOL_PER_EXP;
  throw value_error("unknown noise model: " + name);
}

std::string noise_model_name(NoiseModel m) {
  switch (m) {
    case NoiseModel::NONE: return "none";
    case NoiseModel::GLOBAL_DEPOL_PER_EXP: return "global_depol_per_exp";
    case NoiseModel::LOCAL_DEPOL_PER_GATE: return "local_depol_per_gate";
    case NoiseModel::LOCAL_DEPOL_PER_EXP: return "local_depol_per_exp";
  }
  throw value_error("unknown noise model enum");
}

std::vector<Gate> compile_pauli_exp(const Gate& g) {
  if (g.kind != GateKind::PAULI_EXP) throw value_error("compile_pauli_exp: not an exp gate");
  const std::vector<uint32_t> active = g.acting_qubits();
  std::vector<Gate> out;
  const double half_pi = std::acos(0.0);
  for (uint32_t q : active) {
    const char l = g.word.letter(q);
    if (l == 'X') out.push_back(Gate::h(q));
    else if (l == 'Y') out.push_back(Gate::rx(q, half_pi));
  }
  for (std::size_t i = 0; i + 1 < active.size(); ++i)
    out.push_back(Gate::cnot(active[i], active[i + 1]));
  out.push_back(Gate::rz(active.back(), g.angle));
  for (std::size_t i = active.size() - 1; i-- > 0;)
    out.push_back(Gate::cnot(active[i], active[i + 1]));
  for (uint32_t q : active) {
    const char l = g.word.letter(q);
    if (l == 'X') out.push_back(Gate::h(q));
    else if (l == 'Y') out.push_back(Gate::rx(q, -half_pi));
  }
  return out;
}

namespace {

Matrix single_qubit_matrix(const Gate& g) {
  Matrix m(2, 2);
  const cplx mi(0.0, -1.0);
  switch (g.kind) {
    case GateKind::H: {
      const double r = 1.0 / std::sqrt(2.0);
      m(0, 0) = r; m(0, 1) = r; m(1, 0) = r; m(1, 1) = -r;
      break;
    }
    case GateKind::RX: {
      const double c = std::cos(0.5 * g.angle), s = std::sin(0.5 * g.angle);
      m(0, 0) = c; m(0, 1) = mi * s; m(1, 0) = mi * s; m(1, 1) = c;
      break;
    }
    case GateKind::RZ:
      m(0, 0) = std::exp(cplx(0.0, -0.5 * g.angle));
      m(1, 1) = std::exp(cplx(0.0, 0.5 * g.angle));
      break;
    case GateKind::X:
      m(0, 1) = 1.0; m(1, 0) = 1.0;
      break;
    default:
      throw value_error("single_qubit_matrix: not a single-qubit gate");
  }
  return m;
}

}  // namespace

Matrix gate_matrix(const Gate& g, uint32_t n_qubits) {
  for (uint32_t q : g.acting_qubits())
    if (q >= n_qubits) throw value_error("gate_matrix: qubit out of range");
  if (g.kind == GateKind::PAULI_EXP && g.word.n_qubits != n_qubits)
    throw value_error("gate_matrix: exp word width mismatch");
  const std::size_t d = std::size_t(1) << n_qubits;
  switch (g.kind) {
    case GateKind::CNOT: {
      Matrix m(d, d);
      const uint64_t cm = uint64_t(1) << (n_qubits - 1 - g.q0);
      const uint64_t tm = uint64_t(1) << (n_qubits - 1 - g.q1);
      for (uint64_t i = 0; i < d; ++i) m((i & cm) ? (i ^ tm) : i, i) = 1.0;
      return m;
    }
    case GateKind::PAULI_EXP: {
      const Matrix p = pauli_matrix(g.word);
      Matrix m = Matrix::identity(d);
      const double c = std::cos(0.5 * g.angle), s = std::sin(0.5 * g.angle);
      for (std::size_t i = 0; i < m.a.size(); ++i) m.a[i] = c * m.a[i] + cplx(0.0, -s) * p.a[i];
      return m;
    }
    default: {
      Matrix m(1, 1);
      m(0, 0) = 1.0;
      const Matrix sq = single_qubit_matrix(g);
      const Matrix id2 = Matrix::identity(2);
      for (uint32_t q = 0; q < n_qubits; ++q) m = kron(m, q == g.q0 ? sq : id2);
      return m;
    }
  }
}

void apply_gate(StateVector& v, const Gate& g) {
  const uint32_t n = v.n_qubits;
  const std::size_t d = v.dim();
  for (uint32_t q : g.acting_qubits())
    if (q >= n) throw value_error("apply_gate: qubit out of range");
  switch (g.kind) {
    case GateKind::H: {
      const uint64_t m = uint64_t(1) << (n - 1 - g.q0);
      const double r = 1.0 / std::sqrt(2.0);
      for (uint64_t i = 0; i < d; ++i)
        if (!(i & m)) {
          const cplx a = v.amps[i], b = v.amps[i | m];
          v.amps[i] = r * (a + b);
          v.amps[i | m] = r * (a - b);
        }
      break;
    }
    case GateKind::RX: {
      const uint64_t m = uint64_t(1) << (n - 1 - g.q0);
      const double c = std::cos(0.5 * g.angle), s = std::sin(0.5 * g.angle);
      const cplx mis(0.0, -s);
      for (uint64_t i = 0; i < d; ++i)
        if (!(i & m)) {
          const cplx a = v.amps[i], b = v.amps[i | m];
          v.amps[i] = c * a + mis * b;
          v.amps[i | m] = mis * a + c * b;
        }
      break;
    }
    case GateKind::RZ: {
      const uint64_t m = uint64_t(1) << (n - 1 - g.q0);
      const cplx e0 = std::exp(cplx(0.0, -0.5 * g.angle));
      const cplx e1 = std::exp(cplx(0.0, 0.5 * g.angle));
      for (uint64_t i = 0; i < d; ++i) v.amps[i] *= (i & m) ? e1 : e0;
      break;
    }
    case GateKind::X: {
      const uint64_t m = uint64_t(1) << (n - 1 - g.q0);
      for (uint64_t i = 0; i < d; ++i)
        if (!(i & m)) std::swap(v.amps[i], v.amps[i | m]);
      break;
    }
    case GateKind::CNOT: {
      const uint64_t cm = uint64_t(1) << (n - 1 - g.q0);
      const uint64_t tm = uint64_t(1) << (n - 1 - g.q1);
      for (uint64_t i = 0; i < d; ++i)
        if ((i & cm) && !(i & tm)) std::swap(v.amps[i], v.amps[i | tm]);
      break;
    }
    case GateKind::PAULI_EXP: {
      if (g.word.n_qubits != n) throw value_error("apply_gate: exp word width mismatch");
      int ys = 0;
      for (uint32_t q = 0; q < n; ++q)
        if (g.word.letter(q) == 'Y') ++ys;
      static const cplx kPhases[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
      const cplx base = kPhases[(g.word.phase_pow + ys) % 4];
      const double c = std::cos(0.5 * g.angle), s = std::sin(0.5 * g.angle);
      std::vector<cplx> pv(d);
      for (uint64_t i = 0; i < d; ++i) {
        const double sign = (std::popcount(i & g.word.z_bits) & 1) ? -1.0 : 1.0;
        pv[i ^ g.word.x_bits] = base * sign * v.amps[i];
      }
      for (uint64_t i = 0; i < d; ++i) v.amps[i] = c * v.amps[i] + cplx(0.0, -s) * pv[i];
      break;
    }
  }
}

void apply_gate(DensityMatrix& rho, const Gate& g) {
  const Matrix u = gate_matrix(g, rho.n_qubits);
  rho.m = u * rho.m * dagger(u);
}

void depolarize_global(DensityMatrix& rho, double p) {
  if (p < 0.0 || p > 1.0) throw value_error("depolarize: p outside [0, 1]");
  if (p == 0.0) return;
  const std::size_t d = rho.dim();
  const double fill = p / double(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      rho.m(i, j) *= (1.0 - p);
      if (i == j) rho.m(i, j) += fill;
    }
}

void depolarize_local(DensityMatrix& rho, double p, const std::vector<uint32_t>& qubits) {
  if (p < 0.0 || p > 1.0) throw value_error("depolarize: p outside [0, 1]");
  if (p == 0.0 || qubits.empty()) return;
  const std::size_t d = rho.dim();
  Matrix out(d, d);
  for (uint32_t q : qubits) {
    if (q >= rho.n_qubits) throw value_error("depolarize: qubit out of range");
    const uint64_t m = uint64_t(1) << (rho.n_qubits - 1 - q);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        const bool same = ((i ^ j) & m) == 0;
        const cplx flip = rho.m(i ^ m, j ^ m);
        // X: flip; Z: +/- in place; Y: +/- flip (signs cancel when bits differ)
        if (same)
          out(i, j) = (1.0 - 2.0 * p / 3.0) * rho.m(i, j) + (2.0 * p / 3.0) * flip;
        else
          out(i, j) = (1.0 - 4.0 * p / 3.0) * rho.m(i, j);
      }
    std::swap(rho.m, out);
  }
}

StateVector run_circuit_pure(const Circuit& c, uint64_t initial_basis) {
  StateVector v = basis_state(c.n_qubits, initial_basis);
  for (const Gate& g : c.gates) apply_gate(v, g);
  return v;
}

DensityMatrix run_circuit(const Circuit& c, const NoiseSpec& noise, ExpMode mode,
                          uint64_t initial_basis) {
  if (c.n_qubits == 0) throw value_error("run_circuit: empty register");
  if (noise.model != NoiseModel::NONE && !(noise.p >= 0.0 && noise.p <= 1.0))
    throw value_error("run_circuit: noise probability outside [0, 1]");
  std::vector<uint32_t> all;
  for (uint32_t q = 0; q < c.n_qubits; ++q) all.push_back(q);
  DensityMatrix rho = projector(basis_state(c.n_qubits, initial_basis));
  for (const Gate& g : c.gates) {
    if (noise.model == NoiseModel::LOCAL_DEPOL_PER_GATE) {
      std::vector<Gate> basis =
          g.kind == GateKind::PAULI_EXP ? compile_pauli_exp(g) : std::vector<Gate>{g};
      for (const Gate& b : basis) {
        apply_gate(rho, b);
        depolarize_local(rho, noise.p, b.acting_qubits());
      }
      continue;
    }
    if (g.kind == GateKind::PAULI_EXP && mode == ExpMode::COMPILED) {
      for (const Gate& b : compile_pauli_exp(g)) apply_gate(rho, b);
    } else {
      apply_gate(rho, g);
    }
    if (g.kind == GateKind::PAULI_EXP) {
      if (noise.model == NoiseModel::GLOBAL_DEPOL_PER_EXP) depolarize_global(rho, noise.p);
      else if (noise.model == NoiseModel::LOCAL_DEPOL_PER_EXP) depolarize_local(rho, noise.p, all);
    }
  }
  return rho;
}

Circuit parse_circuit(std::istream& in) {
  std::string line;
  int lineno = 0;
  bool have_header = false;
  Circuit c;
  const auto fail = [&](const std::string& msg) {
    throw value_error("circuit line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    std::string t;
    while (ls >> t) tok.push_back(t);
    if (tok.empty()) continue;
    if (!have_header) {
      if (tok[0] != "qubits:" || tok.size() != 2) fail("expected header \"qubits: n\"");
      long n = 0;
      try {
        std::size_t used = 0;
        n = std::stol(tok[1], &used);
        if (used != tok[1].size()) fail("bad qubit count");
      } catch (const std::exception&) {
        fail("bad qubit count");
      }
      if (n < 1 || n > 16) fail("qubit count must be in [1, 16]");
      c = Circuit(uint32_t(n));
      have_header = true;
      continue;
    }
    const auto parse_q = [&](const std::string& s) -> uint32_t {
      try {
        std::size_t used = 0;
        const long q = std::stol(s, &used);
        if (used != s.size() || q < 0 || uint64_t(q) >= c.n_qubits) fail("qubit index out of range");
        return uint32_t(q);
      } catch (const value_error&) {
        throw;
      } catch (const std::exception&) {
        fail("bad qubit index");
      }
      return 0;
    };
    const auto parse_angle = [&](const std::string& s) -> double {
      try {
        std::size_t used = 0;
        const double a = std::stod(s, &used);
        if (used != s.size() || !std::isfinite(a)) fail("bad angle");
        return a;
      } catch (const value_error&) {
        throw;
      } catch (const std::exception&) {
        fail("bad angle");
      }
      return 0.0;
    };
    try {
      if (tok[0] == "h" || tok[0] == "x") {
        if (tok.size() != 2) fail("expected \"" + tok[0] + " <qubit>\"");
        c.append(tok[0] == "h" ? Gate::h(parse_q(tok[1])) : Gate::x(parse_q(tok[1])));
      } else if (tok[0] == "rx" || tok[0] == "rz") {
        if (tok.size() != 3) fail("expected \"" + tok[0] + " <qubit> <angle>\"");
        const uint32_t q = parse_q(tok[1]);
        const double a = parse_angle(tok[2]);
        c.append(tok[0] == "rx" ? Gate::rx(q, a) : Gate::rz(q, a));
      } else if (tok[0] == "cnot") {
        if (tok.size() != 3) fail("expected \"cnot <control> <target>\"");
        c.append(Gate::cnot(parse_q(tok[1]), parse_q(tok[2])));
      } else if (tok[0] == "exp") {
        if (tok.size() < 3) fail("expected \"exp <theta> <word>\"");
        const double theta = parse_angle(tok[1]);
        std::string word_text;
        for (std::size_t i = 2; i < tok.size(); ++i) {
          if (i > 2) word_text += ' ';
          word_text += tok[i];
        }
        c.append(Gate::pauli_exp(theta, parse_word(word_text, c.n_qubits)));
      } else {
        fail("unknown gate \"" + tok[0] + "\"");
      }
    } catch (const value_error& e) {
      const std::string what = e.what();
      if (what.rfind("circuit line", 0) == 0) throw;
      fail(what);
    }
  }
  if (!have_header) throw value_error("circuit: missing \"qubits: n\" header");
  return c;
}

Circuit parse_circuit_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open circuit file: " + path);
  return parse_circuit(in);
}

std::string format_circuit(const Circuit& c) {
  std::string out = "qubits: " + std::to_string(c.n_qubits) + "\n";
  for (const Gate& g : c.gates) {
    switch (g.kind) {
      case GateKind::H: out += "h " + std::to_string(g.q0); break;
      case GateKind::X: out += "x " + std::to_string(g.q0); break;
      case GateKind::RX: out += "rx " + std::to_string(g.q0) + " " + fmt17(g.angle); break;
      case GateKind::RZ: out += "rz " + std::to_string(g.q0) + " " + fmt17(g.angle); break;
      case GateKind::CNOT:
        out += "cnot " + std::to_string(g.q0) + " " + std::to_string(g.q1);
        break;
      case GateKind::PAULI_EXP: {
        out += "exp " + fmt17(g.angle);
        for (uint32_t q = 0; q < g.word.n_qubits; ++q) {
          const char l = g.word.letter(q);
          if (l != 'I') out += std::string(" ") + l + std::to_string(q);
        }
        break;
      }
    }
    out += "\n";
  }
  return out;
}

}  // namespace psim
