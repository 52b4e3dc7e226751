#include "paulisim/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace psim {

namespace {

constexpr cplx kPhases[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

// letter index by symplectic bits: (x<<1)|z -> I=0, Z=1, X=2, Y=3
// kProductPhase[a][b] = k with a*b = i^k * (a xor b)
constexpr uint8_t kProductPhase[4][4] = {
    {0, 0, 0, 0},  // I*
    {0, 0, 1, 3},  // Z*: ZX=+iY, ZY=-iX
    {0, 3, 0, 1},  // X*: XZ=-iY, XY=+iZ
    {0, 1, 3, 0},  // Y*: YZ=+iX, YX=-iZ
};

void check_same_size(const PauliWord& a, const PauliWord& b, const char* op) {
  if (a.n_qubits != b.n_qubits)
    throw value_error(std::string(op) + ": qubit count mismatch (" +
                      std::to_string(a.n_qubits) + " vs " + std::to_string(b.n_qubits) + ")");
}

}  // namespace

PauliWord PauliWord::identity(uint32_t n) {
  if (n == 0 || n > 64) throw value_error("PauliWord: n_qubits must be in [1,64]");
  PauliWord w;
  w.n_qubits = n;
  return w;
}

char PauliWord::letter(uint32_t q) const {
  if (q >= n_qubits) throw value_error("PauliWord::letter: qubit out of range");
  bool x = x_bits & qubit_mask(q), z = z_bits & qubit_mask(q);
  return x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I');
}

void PauliWord::set_letter(uint32_t q, char l) {
  if (q >= n_qubits) throw value_error("PauliWord::set_letter: qubit out of range");
  uint64_t m = qubit_mask(q);
  x_bits &= ~m;
  z_bits &= ~m;
  switch (l) {
    case 'I': break;
    case 'X': x_bits |= m; break;
    case 'Y': x_bits |= m; z_bits |= m; break;
    case 'Z': z_bits |= m; break;
    default: throw value_error(std::string("unknown Pauli letter '") + l + "'");
  }
}

uint32_t PauliWord::weight() const {
  return static_cast<uint32_t>(std::popcount(x_bits | z_bits));
}

std::string PauliWord::str() const {
  std::string s(n_qubits, 'I');
  for (uint32_t q = 0; q < n_qubits; ++q) s[q] = letter(q);
  return s;
}

PauliWord multiply(const PauliWord& a, const PauliWord& b) {
  check_same_size(a, b, "multiply");
  PauliWord c;
  c.n_qubits = a.n_qubits;
  c.x_bits = a.x_bits ^ b.x_bits;
  c.z_bits = a.z_bits ^ b.z_bits;
  unsigned k = a.phase_pow + b.phase_pow;
  for (uint32_t q = 0; q < a.n_qubits; ++q) {
    uint64_t m = 1ull << q;
    unsigned la = ((a.x_bits & m) ? 2 : 0) | ((a.z_bits & m) ? 1 : 0);
    unsigned lb = ((b.x_bits & m) ? 2 : 0) | ((b.z_bits & m) ? 1 : 0);
    k += kProductPhase[la][lb];
  }
  c.phase_pow = static_cast<uint8_t>(k % 4);
  return c;
}

bool commutes(const PauliWord& a, const PauliWord& b) {
  check_same_size(a, b, "commutes");
  unsigned p = std::popcount(a.x_bits & b.z_bits) + std::popcount(a.z_bits & b.x_bits);
  return (p % 2) == 0;
}

PauliWord parse_word(const std::string& text, uint32_t n_qubits) {
  PauliWord w = PauliWord::identity(n_qubits);
  bool sparse = text.find_first_of("0123456789 ") != std::string::npos;
  if (!sparse) {
    if (text.size() != n_qubits)
      throw value_error("dense Pauli word '" + text + "' length != n_qubits=" +
                        std::to_string(n_qubits));
    for (uint32_t q = 0; q < n_qubits; ++q) w.set_letter(q, text[q]);
    return w;
  }
  std::istringstream iss(text);
  std::string tok;
  uint64_t seen = 0;
  while (iss >> tok) {
    if (tok.size() < 2 || !std::isdigit(static_cast<unsigned char>(tok[1])))
      throw value_error("bad sparse Pauli token '" + tok + "'");
    char l = tok[0];
    if (l != 'X' && l != 'Y' && l != 'Z' && l != 'I')
      throw value_error(std::string("unknown Pauli letter '") + l + "'");
    uint32_t q = 0;
    try {
      q = static_cast<uint32_t>(std::stoul(tok.substr(1)));
    } catch (const std::exception&) {
      throw value_error("bad qubit index in token '" + tok + "'");
    }
    if (q >= n_qubits)
      throw value_error("qubit index " + std::to_string(q) + " out of range (n=" +
                        std::to_string(n_qubits) + ")");
    if (seen & (1ull << q)) throw value_error("duplicate qubit index " + std::to_string(q));
    seen |= 1ull << q;
    w.set_letter(q, l);
  }
  return w;
}

PauliTerm::PauliTerm(cplx c, PauliWord w) : coeff(c), word(w) {
  coeff *= kPhases[word.phase_pow];
  word.phase_pow = 0;
}

void PauliSum::add(cplx c, const PauliWord& w) {
  if (w.n_qubits != n_qubits)
    throw value_error("PauliSum::add: qubit count mismatch");
  terms.emplace_back(c, w);
}

void PauliSum::simplify(double tol) {
  std::sort(terms.begin(), terms.end(), [](const PauliTerm& a, const PauliTerm& b) {
    return std::tie(a.word.x_bits, a.word.z_bits) < std::tie(b.word.x_bits, b.word.z_bits);
  });
  std::vector<PauliTerm> out;
  out.reserve(terms.size());
  for (const auto& t : terms) {
    if (!out.empty() && out.back().word == t.word)
      out.back().coeff += t.coeff;
    else
      out.push_back(t);
  }
  std::erase_if(out, [tol](const PauliTerm& t) { return std::abs(t.coeff) < tol; });
  terms = std::move(out);
}

PauliRotation::PauliRotation(double theta, PauliWord w) : angle(theta), word(w) {
  if (word.is_identity()) throw value_error("PauliRotation: identity word rejected");
  if (word.phase_pow != 0) throw value_error("PauliRotation: word must have phase_pow 0");
}

PauliSum conjugate_by_rotation(const PauliSum& h, const PauliRotation& r, int sign) {
  if (h.n_qubits != r.word.n_qubits)
    throw value_error("conjugate_by_rotation: qubit count mismatch");
  double s = sign >= 0 ? 1.0 : -1.0;
  double c = std::cos(r.angle), sn = std::sin(r.angle);
  PauliSum out(h.n_qubits);
  for (const auto& t : h.terms) {
    if (commutes(t.word, r.word)) {
      out.add(t.coeff, t.word);
    } else {
      out.add(t.coeff * c, t.word);
      out.add(t.coeff * cplx(0, 1) * s * sn, multiply(r.word, t.word));
    }
  }
  out.simplify();
  return out;
}

PauliSum dress_hamiltonian(const PauliSum& h, const std::vector<PauliRotation>& d_sequence) {
  PauliSum out = h;
  for (const auto& r : d_sequence) out = conjugate_by_rotation(out, r, +1);
  constexpr double herm_tol = 1e-9;
  for (auto& t : out.terms) {
    if (std::abs(t.coeff.imag()) >= herm_tol)
      throw numerical_error("dress_hamiltonian: non-Hermitian result, imag coefficient " +
                            std::to_string(t.coeff.imag()) + " on " + t.word.str());
    t.coeff = cplx(t.coeff.real(), 0.0);
  }
  out.simplify();
  return out;
}

PauliSum parse_pauli_sum(std::istream& in) {
  std::string line;
  int lineno = 0;
  bool have_header = false;
  uint32_t n = 0;
  PauliSum sum;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream iss(line);
    std::vector<std::string> toks;
    std::string tok;
    while (iss >> tok) toks.push_back(tok);
    if (toks.empty()) continue;
    if (!have_header) {
      if (toks.size() != 2 || toks[0] != "qubits:")
        throw value_error("line " + std::to_string(lineno) + ": expected header 'qubits: n'");
      try {
        n = static_cast<uint32_t>(std::stoul(toks[1]));
      } catch (const std::exception&) {
        throw value_error("line " + std::to_string(lineno) + ": bad qubit count '" + toks[1] + "'");
      }
      sum = PauliSum(n);
      have_header = true;
      continue;
    }
    if (toks.size() < 2 || toks.size() > 3)
      throw value_error("line " + std::to_string(lineno) +
                        ": expected '<real> [<imag>] <word>', got '" + line + "'");
    double re = 0, im = 0;
    try {
      re = std::stod(toks[0]);
      if (toks.size() == 3) im = std::stod(toks[1]);
    } catch (const std::exception&) {
      throw value_error("line " + std::to_string(lineno) + ": bad coefficient");
    }
    PauliWord w = PauliWord::identity(n);
    try {
      w = parse_word(toks.back(), n);
    } catch (const value_error& e) {
      throw value_error("line " + std::to_string(lineno) + ": " + e.what());
    }
    sum.add(cplx(re, im), w);
  }
  if (!have_header) throw value_error("pauli sum: missing 'qubits: n' header");
  sum.simplify();
  return sum;
}

PauliSum parse_pauli_sum_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw io_error("cannot open '" + path + "'");
  try {
    return parse_pauli_sum(f);
  } catch (const value_error& e) {
    throw value_error(path + ": " + e.what());
  }
}

std::string format_pauli_sum(const PauliSum& s) {
  std::ostringstream out;
  out << "qubits: " << s.n_qubits << "\n";
  char buf[96];
  for (const auto& t : s.terms) {
    if (t.coeff.imag() == 0.0)
      std::snprintf(buf, sizeof buf, "%.17g %s", t.coeff.real(), t.word.str().c_str());
    else
      std::snprintf(buf, sizeof buf, "%.17g %.17g %s", t.coeff.real(), t.coeff.imag(),
                    t.word.str().c_str());
    out << buf << "\n";
  }
  return out.str();
}

}  // namespace psim
