#include "paulisim/study_runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "paulisim/errors.hpp"
#include "paulisim/pauli.hpp"

namespace psim {
namespace {

namespace fs = std::filesystem;

double to_double(const std::string& s, const char* what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw value_error(std::string("bad number for ") + what + ": '" + s + "'");
  }
}

long to_long(const std::string& s, const char* what) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw value_error(std::string("bad integer for ") + what + ": '" + s + "'");
  }
}

std::string resolve_path(const std::string& base_dir, const std::string& p) {
  fs::path fp(p);
  if (fp.is_absolute() || base_dir.empty()) return fp.string();
  return (fs::path(base_dir) / fp).string();
}

std::string absolute_path(const std::string& p) {
  std::error_code ec;
  fs::path abs = fs::absolute(p, ec);
  return ec ? p : abs.lexically_normal().string();
}

// Collects every config problem before failing, so one run reports them all.
class Reader {
 public:
  Reader(const nlohmann::json& j, std::string context) : j_(j), ctx_(std::move(context)) {
    if (!j_.is_object()) errs_.push_back("config root must be a JSON object");
  }

  bool has(const char* key) const { return j_.is_object() && j_.contains(key); }
  void allow(const char* key) { allowed_.insert(key); }
  void fail(const std::string& key, const std::string& why) {
    errs_.push_back("'" + key + "' " + why);
  }

  template <class T>
  bool opt(const char* key, T& out) {
    allowed_.insert(key);
    if (!has(key)) return false;
    try {
      j_.at(key).get_to(out);
      return true;
    } catch (const nlohmann::json::exception&) {
      fail(key, "has the wrong type");
      return false;
    }
  }

  void expect_study(const char* name) {
    std::string s;
    if (opt("study", s) && s != name) fail("study", std::string("must be '") + name + "'");
  }
  void prob(const char* key, double& out) {
    if (opt(key, out) && !(out >= 0.0 && out <= 1.0)) fail(key, "must lie in [0, 1]");
  }
  void prob_list(const char* key, std::vector<double>& out) {
    if (!opt(key, out)) return;
    if (out.empty()) fail(key, "must be nonempty");
    for (double v : out)
      if (!(v >= 0.0 && v <= 1.0)) {
        fail(key, "entries must lie in [0, 1]");
        break;
      }
  }
  void positive_int(const char* key, int& out) {
    if (opt(key, out) && out < 1) fail(key, "must be >= 1");
  }
  void noise_model(const char* key, NoiseModel& out) {
    std::string s;
    if (!opt(key, s)) return;
    try {
      out = parse_noise_model(s);
    } catch (const value_error& e) {
      fail(key, e.what());
    }
  }
  void qmi(const char* key, QmiForm& out) {
    std::string s;
    if (!opt(key, s)) return;
    try {
      out = parse_qmi_form(s);
    } catch (const value_error& e) {
      fail(key, e.what());
    }
  }

  void finish() {
    if (j_.is_object())
      for (auto it = j_.begin(); it != j_.end(); ++it)
        if (!allowed_.count(it.key())) errs_.push_back("unknown key '" + it.key() + "'");
    if (errs_.empty()) return;
    std::string msg = "invalid " + ctx_ + " config: ";
    for (std::size_t i = 0; i < errs_.size(); ++i) {
      if (i) msg += "; ";
      msg += errs_[i];
    }
    throw value_error(msg);
  }

 private:
  const nlohmann::json& j_;
  std::string ctx_;
  std::set<std::string> allowed_;
  std::vector<std::string> errs_;
};

RunRecord run_primitive(const nlohmann::json& j) {
  Reader rd(j, "primitive");
  rd.expect_study("primitive");
  uint64_t seed = 0;
  rd.opt("seed", seed);  // accepted for round trips; the sweep is deterministic

  PrimitiveConfig cfg;
  cfg.angles = parse_angle_grid("0:1.5707963267948966:33");
  std::vector<double> angles;
  if (rd.opt("angles", angles)) cfg.angles = angles;
  std::string grid;
  if (rd.opt("angle_grid", grid)) {
    try {
      cfg.angles = parse_angle_grid(grid);
    } catch (const value_error& e) {
      rd.fail("angle_grid", e.what());
    }
  }
  rd.prob("p", cfg.p);
  rd.noise_model("noise_model", cfg.model);
  rd.prob_list("noise_levels", cfg.noise_levels);
  rd.positive_int("mismatch_order", cfg.mismatch_order);
  rd.qmi("qmi_form", cfg.qmi_form);
  rd.finish();
  return primitive_sweep(cfg);
}

RunRecord run_random(const nlohmann::json& j) {
  Reader rd(j, "random");
  rd.expect_study("random");
  RandomConfig cfg;
  rd.opt("seed", cfg.seed);
  if (rd.opt("count", cfg.count) && cfg.count < 100) rd.fail("count", "must be >= 100");
  rd.prob_list("noise_levels", cfg.noise_levels);
  std::string nm;
  if (rd.opt("noise_model", nm) && nm != noise_model_name(NoiseModel::GLOBAL_DEPOL_PER_EXP))
    rd.fail("noise_model", "must be global_depol_per_exp for the random study");
  rd.positive_int("n_subsets", cfg.n_subsets);
  if (rd.opt("subset_size", cfg.subset_size) && cfg.subset_size < 0)
    rd.fail("subset_size", "must be >= 0 (0 = count / n_subsets)");
  rd.prob("stratify_level", cfg.stratify_level);
  rd.positive_int("mismatch_order", cfg.mismatch_order);
  rd.qmi("qmi_form", cfg.qmi_form);
  rd.finish();
  return random_circuit_study(cfg);
}

RunRecord run_path(const nlohmann::json& j, const std::string& base_dir) {
  Reader rd(j, "path");
  rd.expect_study("path");
  uint64_t seed = 0;
  rd.opt("seed", seed);

  PathConfig cfg;
  if (!rd.opt("reference", cfg.reference_bits)) rd.fail("reference", "is required");
  const uint32_t n = uint32_t(cfg.reference_bits.size());

  rd.allow("paths");
  if (!rd.has("paths")) {
    rd.fail("paths", "is required");
  } else if (!j.at("paths").is_array() || j.at("paths").empty()) {
    rd.fail("paths", "must be a nonempty array of rotation lists");
  } else if (n > 0) {
    for (const auto& jp : j.at("paths")) {
      std::vector<PauliRotation> path;
      bool ok = jp.is_array() && !jp.empty();
      if (ok)
        for (const auto& je : jp) {
          if (!je.is_object() || !je.contains("theta") || !je.contains("word") ||
              !je.at("theta").is_number() || !je.at("word").is_string()) {
            rd.fail("paths", "entries must be objects {\"theta\": number, \"word\": string}");
            ok = false;
            break;
          }
          try {
            path.emplace_back(je.at("theta").get<double>(),
                              parse_word(je.at("word").get<std::string>(), n));
          } catch (const value_error& e) {
            rd.fail("paths", e.what());
            ok = false;
            break;
          }
        }
      else
        rd.fail("paths", "each path must be a nonempty array");
      if (!ok) break;
      cfg.paths.push_back(std::move(path));
    }
  }

  rd.prob("noise_per_g", cfg.noise_per_g);
  rd.noise_model("noise_model", cfg.model);
  rd.positive_int("mismatch_order", cfg.mismatch_order);
  rd.qmi("qmi_form", cfg.qmi_form);
  std::string target_file, hamiltonian_file;
  rd.opt("target_file", target_file);
  rd.opt("hamiltonian_file", hamiltonian_file);
  rd.allow("has_target");
  rd.allow("has_hamiltonian");
  rd.finish();

  if (!target_file.empty())
    cfg.target = read_state_vector_file(resolve_path(base_dir, target_file));
  if (!hamiltonian_file.empty())
    cfg.hamiltonian = parse_pauli_sum_file(resolve_path(base_dir, hamiltonian_file));

  RunRecord rec = path_study(cfg);
  if (!target_file.empty())
    rec.config["target_file"] = absolute_path(resolve_path(base_dir, target_file));
  if (!hamiltonian_file.empty())
    rec.config["hamiltonian_file"] = absolute_path(resolve_path(base_dir, hamiltonian_file));
  return rec;
}

RunRecord run_dressing(const nlohmann::json& j, const std::string& base_dir) {
  Reader rd(j, "dressing");
  rd.expect_study("dressing");
  DressingConfig cfg;
  rd.opt("seed", cfg.seed);
  rd.opt("reference", cfg.reference_bits);
  const uint32_t n = uint32_t(cfg.reference_bits.size());

  std::string word_text = "YXXX";
  rd.opt("ansatz_word", word_text);
  try {
    cfg.ansatz_word = parse_word(word_text, n);
  } catch (const value_error& e) {
    rd.fail("ansatz_word", e.what());
  }

  rd.allow("points");
  std::vector<std::string> files;
  if (!rd.has("points")) {
    rd.fail("points", "is required");
  } else if (!j.at("points").is_array() || j.at("points").empty()) {
    rd.fail("points", "must be a nonempty array of {\"file\", \"delta\"} objects");
  } else {
    for (const auto& jp : j.at("points")) {
      if (!jp.is_object() || !jp.contains("file") || !jp.contains("delta") ||
          !jp.at("file").is_string() || !jp.at("delta").is_number()) {
        rd.fail("points", "entries must be objects {\"file\": string, \"delta\": number}");
        files.clear();
        break;
      }
      files.push_back(jp.at("file").get<std::string>());
      cfg.point_angles.push_back(jp.at("delta").get<double>());
    }
  }

  rd.opt("fixed_angle", cfg.fixed_angle);
  rd.noise_model("noise_model", cfg.noise.model);
  rd.prob("p", cfg.noise.p);
  rd.positive_int("shots_per_basis", cfg.shots_per_basis);
  rd.positive_int("k_groups", cfg.k_groups);
  if (rd.opt("bootstrap_resamples", cfg.bootstrap_resamples) && cfg.bootstrap_resamples < 2)
    rd.fail("bootstrap_resamples", "must be >= 2");
  rd.finish();

  std::vector<std::string> abs_files;
  for (const std::string& f : files) {
    const std::string resolved = resolve_path(base_dir, f);
    cfg.hamiltonians.push_back(parse_pauli_sum_file(resolved));
    cfg.h_labels.push_back(f);
    abs_files.push_back(absolute_path(resolved));
  }

  RunRecord rec = dressing_study(cfg);
  rec.config.erase("point_angles");
  rec.config.erase("h_labels");
  nlohmann::json pts = nlohmann::json::array();
  for (std::size_t i = 0; i < abs_files.size(); ++i)
    pts.push_back({{"file", abs_files[i]}, {"delta", cfg.point_angles[i]}});
  rec.config["points"] = pts;
  return rec;
}

RunRecord run_be_path(const nlohmann::json& j) {
  Reader rd(j, "be-path");
  rd.expect_study("be-path");
  BePathConfig cfg;
  rd.opt("seed", cfg.seed);
  rd.prob("p", cfg.p);
  rd.noise_model("noise_model", cfg.model);
  rd.positive_int("shots_per_basis", cfg.shots_per_basis);
  rd.positive_int("mismatch_order", cfg.mismatch_order);
  rd.qmi("qmi_form", cfg.qmi_form);
  rd.finish();
  return be_path_experiment(cfg);
}

RunRecord run_shadows_demo(const nlohmann::json& j) {
  Reader rd(j, "shadows-demo");
  rd.expect_study("shadows-demo");
  ShadowsDemoConfig cfg;
  rd.opt("seed", cfg.seed);
  rd.opt("theta", cfg.theta);
  rd.prob("p", cfg.p);
  rd.noise_model("noise_model", cfg.model);
  rd.positive_int("shots_per_basis", cfg.shots_per_basis);
  if (rd.opt("n_bases", cfg.n_bases) && cfg.n_bases < 0) rd.fail("n_bases", "must be >= 0");
  rd.positive_int("k_groups", cfg.k_groups);
  rd.finish();
  return shadows_demo(cfg);
}

}  // namespace

std::vector<double> parse_angle_grid(const std::string& text) {
  const auto p1 = text.find(':');
  const auto p2 = text.rfind(':');
  if (p1 == std::string::npos || p2 == p1)
    throw value_error("angle grid must be start:stop:count, got '" + text + "'");
  const double start = to_double(text.substr(0, p1), "grid start");
  const double stop = to_double(text.substr(p1 + 1, p2 - p1 - 1), "grid stop");
  const long count = to_long(text.substr(p2 + 1), "grid count");
  if (count < 1 || count > 1000000) throw value_error("grid count must lie in [1, 1000000]");
  if (stop < start) throw value_error("angle grid has negative step (stop < start)");
  std::vector<double> out;
  out.reserve(std::size_t(count));
  if (count == 1) {
    out.push_back(start);
    return out;
  }
  for (long i = 0; i < count; ++i)
    out.push_back(start + (stop - start) * double(i) / double(count - 1));
  out.back() = stop;
  return out;
}

StateVector parse_state_vector(std::istream& in) {
  std::string line;
  int lineno = 0;
  uint32_t n = 0;
  bool have_header = false;
  StateVector v;
  std::size_t filled = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (!have_header) {
      std::string count;
      if (first != "qubits:" || !(ls >> count))
        throw value_error("state vector line " + std::to_string(lineno) +
                          ": expected 'qubits: n' header");
      const long nn = to_long(count, "qubit count");
      if (nn < 1 || nn > 16)
        throw value_error("state vector qubit count must lie in [1, 16]");
      n = uint32_t(nn);
      v.n_qubits = n;
      v.amps.assign(std::size_t(1) << n, cplx(0.0, 0.0));
      have_header = true;
      continue;
    }
    if (filled >= v.amps.size())
      throw value_error("state vector line " + std::to_string(lineno) + ": too many amplitudes");
    const double re = to_double(first, "amplitude");
    double im = 0.0;
    std::string rest;
    if (ls >> rest) {
      im = to_double(rest, "amplitude");
      std::string extra;
      if (ls >> extra)
        throw value_error("state vector line " + std::to_string(lineno) +
                          ": expected 're [im]'");
    }
    v.amps[filled++] = cplx(re, im);
  }
  if (!have_header) throw value_error("state vector file is empty");
  if (filled != v.amps.size())
    throw value_error("state vector file has " + std::to_string(filled) + " amplitudes, needs " +
                      std::to_string(v.amps.size()));
  const double norm = v.norm();
  if (std::abs(norm - 1.0) > 1e-6)
    throw value_error("state vector is not normalized (norm " + std::to_string(norm) + ")");
  for (cplx& a : v.amps) a /= norm;
  return v;
}

StateVector read_state_vector_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open state vector file " + path);
  try {
    return parse_state_vector(in);
  } catch (const value_error& e) {
    throw value_error(path + ": " + e.what());
  }
}

std::string format_state_vector(const StateVector& v) {
  std::string out = "qubits: " + std::to_string(v.n_qubits) + "\n";
  char buf[96];
  for (const cplx& a : v.amps) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", a.real(), a.imag());
    out += buf;
  }
  return out;
}

nlohmann::json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open config file " + path);
  try {
    return nlohmann::json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const nlohmann::json::exception& e) {
    throw value_error("config parse error in " + path + ": " + e.what());
  }
}

RunRecord run_study_config(const nlohmann::json& config, const std::string& base_dir) {
  if (!config.is_object()) throw value_error("config root must be a JSON object");
  if (!config.contains("study") || !config.at("study").is_string())
    throw value_error(
        "config needs a 'study' key "
        "(primitive|random|path|dressing|be-path|shadows-demo)");
  const std::string study = config.at("study").get<std::string>();
  if (study == "primitive") return run_primitive(config);
  if (study == "random") return run_random(config);
  if (study == "path") return run_path(config, base_dir);
  if (study == "dressing") return run_dressing(config, base_dir);
  if (study == "be-path") return run_be_path(config);
  if (study == "shadows-demo") return run_shadows_demo(config);
  throw value_error("unknown study '" + study + "'");
}

}  // namespace psim
