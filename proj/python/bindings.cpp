#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "paulisim/circuit.hpp"
#include "paulisim/dense.hpp"
#include "paulisim/errors.hpp"
#include "paulisim/experiments.hpp"
#include "paulisim/metrics.hpp"
#include "paulisim/pauli.hpp"
#include "paulisim/shadows.hpp"
#include "paulisim/study_runner.hpp"

namespace py = pybind11;
using namespace psim;

namespace {

py::list matrix_to_list(const Matrix& m) {
  py::list rows;
  for (std::size_t i = 0; i < m.rows; ++i) {
    py::list row;
    for (std::size_t j = 0; j < m.cols; ++j) row.append(m(i, j));
    rows.append(row);
  }
  return rows;
}

py::dict record_to_dict(const RunRecord& rec) {
  py::module json = py::module::import("json");
  py::dict out;
  out["study"] = rec.study;
  out["seed"] = py::int_(rec.seed);
  out["config"] = json.attr("loads")(rec.config.dump());
  out["stats"] = json.attr("loads")(rec.stats.dump());
  py::dict metrics;
  for (const auto& name : rec.metrics.columns) metrics[name.c_str()] = rec.metrics.column(name);
  out["metrics"] = metrics;
  py::dict curves;
  for (const auto& [name, table] : rec.curves) {
    py::dict cols;
    for (const auto& col : table.columns) cols[col.c_str()] = table.column(col);
    curves[name.c_str()] = cols;
  }
  out["curves"] = curves;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Pauli-product circuit simulator: magic/entanglement metrics, noisy studies, "
            "classical shadows";

  py::register_exception<value_error>(m, "ValueError", PyExc_ValueError);
  py::register_exception<numerical_error>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<io_error>(m, "IOError", PyExc_OSError);

  // ---------------------------------------------------------------- pauli
  py::class_<PauliWord>(m, "PauliWord")
      .def(py::init([](const std::string& text, uint32_t n) { return parse_word(text, n); }),
           py::arg("text"), py::arg("n_qubits"))
      .def_static("identity", &PauliWord::identity, py::arg("n_qubits"))
      .def_readonly("n_qubits", &PauliWord::n_qubits)
      .def_readonly("phase_pow", &PauliWord::phase_pow)
      .def_property_readonly("weight", &PauliWord::weight)
      .def("letter", &PauliWord::letter, py::arg("qubit"))
      .def("is_identity", &PauliWord::is_identity)
      .def("__str__", &PauliWord::str)
      .def("__repr__", [](const PauliWord& w) { return "PauliWord('" + w.str() + "')"; })
      .def("__eq__", [](const PauliWord& a, const PauliWord& b) { return a == b; });
  m.def("parse_word", &parse_word, py::arg("text"), py::arg("n_qubits"));
  m.def("multiply", &multiply, py::arg("a"), py::arg("b"));
  m.def("commutes", &commutes, py::arg("a"), py::arg("b"));

  py::class_<PauliTerm>(m, "PauliTerm")
      .def_readonly("coeff", &PauliTerm::coeff)
      .def_readonly("word", &PauliTerm::word);

  py::class_<PauliSum>(m, "PauliSum")
      .def(py::init<uint32_t>(), py::arg("n_qubits"))
      .def_readonly("n_qubits", &PauliSum::n_qubits)
      .def_readonly("terms", &PauliSum::terms)
      .def("add", &PauliSum::add, py::arg("coeff"), py::arg("word"))
      .def("simplify", &PauliSum::simplify, py::arg("tol") = 1e-12)
      .def("__len__", &PauliSum::size)
      .def("__str__", &format_pauli_sum);
  m.def("parse_pauli_sum_file", &parse_pauli_sum_file, py::arg("path"));
  m.def("format_pauli_sum", &format_pauli_sum, py::arg("s"));

  py::class_<PauliRotation>(m, "PauliRotation")
      .def(py::init<double, PauliWord>(), py::arg("angle"), py::arg("word"))
      .def_readonly("angle", &PauliRotation::angle)
      .def_readonly("word", &PauliRotation::word)
      .def("inverse", &PauliRotation::inverse);
  m.def("conjugate_by_rotation", &conjugate_by_rotation, py::arg("h"), py::arg("rotation"),
        py::arg("sign"));
  m.def("dress_hamiltonian", &dress_hamiltonian, py::arg("h"), py::arg("d_sequence"));

  // ---------------------------------------------------------------- dense
  py::class_<StateVector>(m, "StateVector")
      .def(py::init<uint32_t>(), py::arg("n_qubits"))
      .def_readonly("n_qubits", &StateVector::n_qubits)
      .def_property(
          "amps", [](const StateVector& v) { return v.amps; },
          [](StateVector& v, const std::vector<cplx>& a) {
            if (a.size() != v.dim()) throw value_error("amps: wrong length");
            v.amps = a;
          })
      .def("norm", &StateVector::norm);
  m.def("basis_state", py::overload_cast<uint32_t, uint64_t>(&basis_state), py::arg("n_qubits"),
        py::arg("index"));
  m.def("basis_state", py::overload_cast<const std::string&>(&basis_state), py::arg("bits"));
  m.def("inner", &inner, py::arg("x"), py::arg("y"));
  m.def("overlap", &overlap, py::arg("x"), py::arg("y"));

  py::class_<DensityMatrix>(m, "DensityMatrix")
      .def(py::init<uint32_t>(), py::arg("n_qubits"))
      .def_readonly("n_qubits", &DensityMatrix::n_qubits)
      .def("matrix", [](const DensityMatrix& r) { return matrix_to_list(r.m); })
      .def("validate", &DensityMatrix::validate);
  m.def("projector", &projector, py::arg("state"));
  m.def("fidelity_with_pure", &fidelity_with_pure, py::arg("rho"), py::arg("state"));
  m.def("trace_distance", &trace_distance, py::arg("x"), py::arg("y"));
  m.def("partial_trace", &partial_trace, py::arg("rho"), py::arg("keep"));
  m.def("pauli_matrix_list",
        [](const PauliWord& w) { return matrix_to_list(pauli_matrix(w)); }, py::arg("word"));
  m.def("hermitian_eig_of_density", [](const DensityMatrix& rho) {
    const EigResult e = hermitian_eig(rho.m);
    return py::make_tuple(e.values, matrix_to_list(e.vectors));
  });

  // ---------------------------------------------------------------- circuit
  py::enum_<NoiseModel>(m, "NoiseModel")
      .value("NONE", NoiseModel::NONE)
      .value("GLOBAL_DEPOL_PER_EXP", NoiseModel::GLOBAL_DEPOL_PER_EXP)
      .value("LOCAL_DEPOL_PER_GATE", NoiseModel::LOCAL_DEPOL_PER_GATE)
      .value("LOCAL_DEPOL_PER_EXP", NoiseModel::LOCAL_DEPOL_PER_EXP);
  m.def("parse_noise_model", &parse_noise_model, py::arg("name"));
  m.def("noise_model_name", &noise_model_name, py::arg("model"));

  py::class_<NoiseSpec>(m, "NoiseSpec")
      .def(py::init([](NoiseModel model, double p) { return NoiseSpec{model, p}; }),
           py::arg("model") = NoiseModel::NONE, py::arg("p") = 0.0)
      .def_readwrite("model", &NoiseSpec::model)
      .def_readwrite("p", &NoiseSpec::p);

  py::enum_<ExpMode>(m, "ExpMode")
      .value("EXACT", ExpMode::EXACT)
      .value("COMPILED", ExpMode::COMPILED);

  py::class_<Gate>(m, "Gate")
      .def_static("h", &Gate::h, py::arg("qubit"))
      .def_static("x", &Gate::x, py::arg("qubit"))
      .def_static("rx", &Gate::rx, py::arg("qubit"), py::arg("angle"))
      .def_static("rz", &Gate::rz, py::arg("qubit"), py::arg("angle"))
      .def_static("cnot", &Gate::cnot, py::arg("control"), py::arg("target"))
      .def_static("pauli_exp", &Gate::pauli_exp, py::arg("theta"), py::arg("word"))
      .def("acting_qubits", &Gate::acting_qubits);

  py::class_<Circuit>(m, "Circuit")
      .def(py::init<uint32_t>(), py::arg("n_qubits"))
      .def_readonly("n_qubits", &Circuit::n_qubits)
      .def("append", &Circuit::append, py::arg("gate"))
      .def("__len__", [](const Circuit& c) { return c.gates.size(); })
      .def("__str__", &format_circuit);
  m.def("parse_circuit_file", &parse_circuit_file, py::arg("path"));
  m.def("format_circuit", &format_circuit, py::arg("circuit"));
  m.def("compile_pauli_exp", &compile_pauli_exp, py::arg("gate"));
  m.def("run_circuit_pure", &run_circuit_pure, py::arg("circuit"), py::arg("initial_basis") = 0);
  m.def("run_circuit", &run_circuit, py::arg("circuit"), py::arg("noise"),
        py::arg("mode") = ExpMode::EXACT, py::arg("initial_basis") = 0);

  // ---------------------------------------------------------------- metrics
  py::enum_<QmiForm>(m, "QmiForm")
      .value("KUMAR", QmiForm::KUMAR)
      .value("WATANABE", QmiForm::WATANABE);
  m.def("purity", &purity, py::arg("rho"));
  m.def("von_neumann_entropy", &von_neumann_entropy, py::arg("rho"));
  m.def("pauli_expectation", &pauli_expectation, py::arg("rho"), py::arg("word"));
  m.def("expectation", &expectation, py::arg("rho"), py::arg("observable"));
  m.def("stabilizer_renyi_2", &stabilizer_renyi_2, py::arg("rho"),
        py::arg("subtract_entropy") = true);
  m.def("multipartite_qmi", &multipartite_qmi, py::arg("rho"),
        py::arg("form") = QmiForm::KUMAR);

  py::class_<PurificationResult>(m, "PurificationResult")
      .def_readonly("order", &PurificationResult::order)
      .def_readonly("purified_state", &PurificationResult::purified_state)
      .def_readonly("residual_purity_gap", &PurificationResult::residual_purity_gap);
  m.def("purify", &purify, py::arg("rho"), py::arg("order"));
  m.def("coherent_mismatch", &coherent_mismatch, py::arg("ideal"), py::arg("noisy"),
        py::arg("order") = 5);
  m.def("pearson", &pearson, py::arg("xs"), py::arg("ys"));

  py::class_<BootstrapResult>(m, "BootstrapResult")
      .def_readonly("mean", &BootstrapResult::mean)
      .def_readonly("stddev", &BootstrapResult::stddev);
  m.def("bootstrap", &bootstrap, py::arg("stat"), py::arg("data"), py::arg("resamples"),
        py::arg("seed"));

  // ---------------------------------------------------------------- shadows
  py::class_<MeasurementRecord>(m, "MeasurementRecord")
      .def_readonly("basis", &MeasurementRecord::basis)
      .def_readonly("outcome_bits", &MeasurementRecord::outcome_bits)
      .def_readonly("ancilla_bit", &MeasurementRecord::ancilla_bit)
      .def_readonly("accepted", &MeasurementRecord::accepted);

  py::class_<ShadowSet>(m, "ShadowSet")
      .def_readonly("n_qubits", &ShadowSet::n_qubits)
      .def_readonly("seed", &ShadowSet::seed)
      .def_readonly("shots_per_basis", &ShadowSet::shots_per_basis)
      .def_readonly("records", &ShadowSet::records)
      .def("accepted_count", &ShadowSet::accepted_count)
      .def("rejected_ratio", &ShadowSet::rejected_ratio)
      .def("__len__", [](const ShadowSet& s) { return s.records.size(); })
      .def("__str__", &format_shadow_set);
  m.def("all_basis_strings", &all_basis_strings, py::arg("n_qubits"));
  m.def("sample_shadows", &sample_shadows, py::arg("rho"), py::arg("n_bases"),
        py::arg("shots_per_basis"), py::arg("seed"));
  m.def("sample_shadows_all_bases", &sample_shadows_all_bases, py::arg("rho"),
        py::arg("shots_per_basis"), py::arg("seed"));
  m.def("sample_with_postselection", &sample_with_postselection, py::arg("circuit"),
        py::arg("parity_qubits"), py::arg("noise"), py::arg("mode"), py::arg("n_bases"),
        py::arg("shots_per_basis"), py::arg("seed"), py::arg("initial_basis") = 0);
  m.def("snapshot", &snapshot, py::arg("record"));
  m.def("shadow_state", &shadow_state, py::arg("shadows"));
  m.def("estimate_observable", &estimate_observable, py::arg("shadows"), py::arg("observable"),
        py::arg("k_groups"));
  m.def("per_record_estimates", &per_record_estimates, py::arg("shadows"), py::arg("observable"));
  m.def("read_shadow_set_file", &read_shadow_set_file, py::arg("path"));
  m.def("write_shadow_set_file", &write_shadow_set_file, py::arg("shadows"), py::arg("path"));

  // ---------------------------------------------------------------- studies
  m.def(
      "run_study",
      [](const py::dict& config, const std::string& base_dir, py::object out_dir) {
        py::module json = py::module::import("json");
        const std::string dumped = py::cast<std::string>(json.attr("dumps")(config));
        RunRecord rec = run_study_config(nlohmann::json::parse(dumped), base_dir);
        if (!out_dir.is_none()) write_run(rec, py::cast<std::string>(out_dir));
        return record_to_dict(rec);
      },
      py::arg("config"), py::arg("base_dir") = ".", py::arg("out_dir") = py::none(),
      "Run one named study from a config dict; optionally write the run directory.");
}
