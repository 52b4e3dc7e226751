#pragma once
#include <string>
#include <vector>

#include "json.hpp"
#include "paulisim/dense.hpp"
#include "paulisim/experiments.hpp"

namespace psim {

// Parses "start:stop:count" into an inclusive linear grid.
std::vector<double> parse_angle_grid(const std::string& text);

// Text format: "qubits: n" header, then 2^n amplitude lines "re [im]";
// '#' starts a comment. The vector must be normalized within 1e-6.
StateVector parse_state_vector(std::istream& in);
StateVector read_state_vector_file(const std::string& path);
std::string format_state_vector(const StateVector& v);

// Loads a JSON config file (// and /* */ comments allowed).
nlohmann::json load_config_file(const std::string& path);

// Validates a study config (all problems reported together), runs the matching
// driver and returns its record. Relative file references inside the config are
// resolved against base_dir; the returned record's config snapshot stores them
// as absolute paths so resolved configs replay from anywhere.
RunRecord run_study_config(const nlohmann::json& config, const std::string& base_dir);

}  // namespace psim
