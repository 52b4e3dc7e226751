#include <cstdio>
#include <filesystem>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "paulisim/errors.hpp"
#include "paulisim/study_runner.hpp"

namespace {

namespace fs = std::filesystem;

struct SubState {
  std::string config;
  std::string out = "out";
  uint64_t seed = 0;
  double noise = 0.0;
  double noise_per_g = 0.0;
  int count = 0;
  int shots = 0;
  double theta = 0.0;
  std::string angles;
};

nlohmann::json base_config(const SubState& st, const char* study) {
  nlohmann::json j =
      st.config.empty() ? nlohmann::json::object() : psim::load_config_file(st.config);
  if (!j.is_object()) throw psim::value_error("config root must be a JSON object");
  if (!j.contains("study")) j["study"] = study;
  return j;
}

void run_and_write(const nlohmann::json& config, const SubState& st) {
  const std::string base_dir = fs::path(st.config).parent_path().string();
  const psim::RunRecord rec = psim::run_study_config(config, base_dir);
  const std::string dir =
      (fs::path(st.out) / (rec.study + "-" + std::to_string(rec.seed))).string();
  psim::write_run(rec, dir);
  std::printf("%s: %zu metric rows, %zu curves -> %s\n", rec.study.c_str(),
              rec.metrics.rows.size(), rec.curves.size(), dir.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pauli-product circuit studies: magic, correlations and error mitigation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "0.1.0");

  SubState prim, rnd, path, dress, be, demo;

  auto add_common = [](CLI::App* sub, SubState& st, const char* cfg_names = "--config") {
    sub->add_option(cfg_names, st.config, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--out", st.out, "output root directory")->capture_default_str();
  };

  auto* sp = app.add_subcommand("primitive", "theta sweep of the YXXX primitive on |1100>");
  add_common(sp, prim);
  auto* sp_angles =
      sp->add_option("--angles", prim.angles, "angle grid start:stop:count (e.g. 0:1.5708:50)");
  auto* sp_noise = sp->add_option("--noise", prim.noise, "depolarizing strength p");
  sp->callback([&]() {
    nlohmann::json j = base_config(prim, "primitive");
    if (sp_angles->count()) {
      j.erase("angles");
      j["angle_grid"] = prim.angles;
    }
    if (sp_noise->count()) j["p"] = prim.noise;
    run_and_write(j, prim);
  });

  auto* sr = app.add_subcommand("random", "randomized Pauli-product correlation study");
  add_common(sr, rnd);
  auto* sr_count = sr->add_option("--count", rnd.count, "number of sampled circuits");
  auto* sr_seed = sr->add_option("--seed", rnd.seed, "master seed");
  sr->callback([&]() {
    nlohmann::json j = base_config(rnd, "random");
    if (sr_count->count()) j["count"] = rnd.count;
    if (sr_seed->count()) j["seed"] = rnd.seed;
    run_and_write(j, rnd);
  });

  auto* st = app.add_subcommand("path", "operator-ordering path study");
  add_common(st, path, "--spec,--config");
  auto* st_noise = st->add_option("--noise-per-g", path.noise_per_g,
                                  "depolarizing strength after each exponential");
  st->callback([&]() {
    nlohmann::json j = base_config(path, "path");
    if (st_noise->count()) j["noise_per_g"] = path.noise_per_g;
    run_and_write(j, path);
  });

  auto* sd = app.add_subcommand("dressing", "Hamiltonian-dressing measurement-reuse study");
  add_common(sd, dress);
  auto* sd_seed = sd->add_option("--seed", dress.seed, "master seed");
  auto* sd_noise = sd->add_option("--noise", dress.noise, "depolarizing strength p");
  auto* sd_shots = sd->add_option("--shots", dress.shots, "shots per measurement basis");
  sd->callback([&]() {
    nlohmann::json j = base_config(dress, "dressing");
    if (sd_seed->count()) j["seed"] = dress.seed;
    if (sd_noise->count()) j["p"] = dress.noise;
    if (sd_shots->count()) j["shots_per_basis"] = dress.shots;
    run_and_write(j, dress);
  });

  auto* sb = app.add_subcommand("be-path", "fixed three-circuit depth study with postselection");
  add_common(sb, be);
  auto* sb_seed = sb->add_option("--seed", be.seed, "master seed");
  auto* sb_noise = sb->add_option("--noise", be.noise, "depolarizing strength p");
  auto* sb_shots = sb->add_option("--shots", be.shots, "shots per measurement basis");
  sb->callback([&]() {
    nlohmann::json j = base_config(be, "be-path");
    if (sb_seed->count()) j["seed"] = be.seed;
    if (sb_noise->count()) j["p"] = be.noise;
    if (sb_shots->count()) j["shots_per_basis"] = be.shots;
    run_and_write(j, be);
  });

  auto* sm = app.add_subcommand("shadows-demo", "shadow tomography demo on the primitive");
  add_common(sm, demo);
  auto* sm_seed = sm->add_option("--seed", demo.seed, "master seed");
  auto* sm_noise = sm->add_option("--noise", demo.noise, "depolarizing strength p");
  auto* sm_shots = sm->add_option("--shots", demo.shots, "shots per measurement basis");
  auto* sm_theta = sm->add_option("--theta", demo.theta, "primitive rotation angle");
  sm->callback([&]() {
    nlohmann::json j = base_config(demo, "shadows-demo");
    if (sm_seed->count()) j["seed"] = demo.seed;
    if (sm_noise->count()) j["p"] = demo.noise;
    if (sm_shots->count()) j["shots_per_basis"] = demo.shots;
    if (sm_theta->count()) j["theta"] = demo.theta;
    run_and_write(j, demo);
  });

  try {
    app.parse(argc, argv);
    return 0;
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const psim::value_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const psim::numerical_error& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return 3;
  } catch (const psim::io_error& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "unexpected error: %s\n", e.what());
    return 1;
  }
}
