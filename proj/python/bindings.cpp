#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "jmnoise/closed_form.hpp"
#include "jmnoise/measurement.hpp"
#include "jmnoise/mc_oracle.hpp"
#include "jmnoise/region.hpp"

namespace py = pybind11;
using namespace jmnoise;

namespace {

EvalMode mode_from_string(const std::string& name) {
  if (name == "float64") return EvalMode::float64;
  if (name == "extended") return EvalMode::extended;
  if (name == "exact") return EvalMode::exact_rational;
  throw py::value_error("mode must be 'float64', 'extended' or 'exact'");
}

}  // namespace

PYBIND11_MODULE(jmnoise, m) {
  m.doc() = "Joint-measurability region of projective measurements under "
            "white noise and loss";

  py::class_<BoundarySample>(m, "BoundarySample")
      .def_readonly("t", &BoundarySample::t)
      .def_readonly("eta", &BoundarySample::eta)
      .def_readonly("p", &BoundarySample::p)
      .def("__repr__", [](const BoundarySample& s) {
        std::ostringstream out;
        out << "BoundarySample(t=" << s.t << ", eta=" << s.eta << ", p=" << s.p << ")";
        return out.str();
      });

  py::class_<MembershipVerdict>(m, "MembershipVerdict")
      .def_readonly("inside", &MembershipVerdict::inside)
      .def_readonly("eta_max", &MembershipVerdict::eta_max)
      .def_readonly("margin", &MembershipVerdict::margin);

  py::class_<McEstimate>(m, "McEstimate")
      .def_readonly("mean", &McEstimate::mean)
      .def_readonly("std_error", &McEstimate::std_error)
      .def_readonly("n_samples", &McEstimate::n_samples);

  py::class_<SimulationResult>(m, "SimulationResult")
      .def_readonly("counts", &SimulationResult::counts)
      .def_readonly("analytic", &SimulationResult::analytic)
      .def_readonly("chi_square", &SimulationResult::chi_square)
      .def_readonly("p_value", &SimulationResult::p_value)
      .def_readonly("shots", &SimulationResult::shots);

  m.def(
      "eval_T",
      [](int d, double t, const std::string& mode) {
        return eval_T(Dimension(d), Threshold(t), mode_from_string(mode));
      },
      py::arg("d"), py::arg("t"), py::arg("mode") = "float64");
  m.def(
      "eval_A",
      [](int d, double t, const std::string& mode) {
        return eval_A(Dimension(d), Threshold(t), mode_from_string(mode));
      },
      py::arg("d"), py::arg("t"), py::arg("mode") = "float64");
  m.def(
      "harmonic",
      [](int d) { return harmonic(d).to_string(); }, py::arg("d"),
      "Exact harmonic number H_d as a 'p/q' string");
  m.def(
      "boundary_point",
      [](int d, double t) { return boundary_point(Dimension(d), Threshold(t)); },
      py::arg("d"), py::arg("t"));
  m.def(
      "simple_regime_eta",
      [](int d, double p) { return simple_regime_eta(Dimension(d), p); },
      py::arg("d"), py::arg("p"));
  m.def(
      "povm_bound_eta",
      [](int d, double p) { return povm_bound_eta(Dimension(d), p); },
      py::arg("d"), py::arg("p"));

  m.def(
      "eta_max", [](int d, double p) { return eta_max(Dimension(d), p); },
      py::arg("d"), py::arg("p"));
  m.def(
      "is_jointly_measurable",
      [](int d, double eta, double p) {
        return is_jointly_measurable(Dimension(d), NoiseParams(eta, p));
      },
      py::arg("d"), py::arg("eta"), py::arg("p"));
  m.def(
      "mixture",
      [](std::pair<double, double> a, std::pair<double, double> b, double q) {
        const MixtureResult result = mixture(NoiseParams(a.first, a.second),
                                             NoiseParams(b.first, b.second), q);
        return py::make_tuple(result.params.eta, result.params.p, result.p_undefined);
      },
      py::arg("params1"), py::arg("params2"), py::arg("q"),
      "Returns (eta, p, p_undefined)");
  m.def(
      "export_curve",
      [](int d, int n_samples, const std::string& mode) {
        return export_curve(Dimension(d), n_samples, mode_from_string(mode)).samples;
      },
      py::arg("d"), py::arg("n_samples") = 100, py::arg("mode") = "float64");
  m.def(
      "curve_csv",
      [](int d, int n_samples) {
        std::ostringstream out;
        write_curve_csv(export_curve(Dimension(d), n_samples), out);
        return out.str();
      },
      py::arg("d"), py::arg("n_samples") = 100);
  m.def(
      "probe_nonconvexity",
      [](int d, int grid_points) -> py::object {
        const auto witness = probe_nonconvexity(Dimension(d), grid_points);
        if (!witness) return py::none();
        return py::make_tuple(witness->a, witness->b, witness->q,
                              py::make_tuple(witness->mid_eta, witness->mid_p),
                              witness->excess);
      },
      py::arg("d"), py::arg("grid_points") = 100);

  m.def(
      "sample_uniform",
      [](int d, std::uint64_t seed, int n) {
        SphereSampler sampler(Dimension(d), seed);
        Matrix out(n, d);
        for (int i = 0; i < n; ++i) out.row(i) = sampler.sample().amplitudes();
        return out;
      },
      py::arg("d"), py::arg("seed"), py::arg("n") = 1,
      "n uniformly distributed unit vectors, one per row");
  m.def(
      "estimate_T",
      [](int d, double t, std::uint64_t n, std::uint64_t seed, int threads) {
        return estimate_T(Dimension(d), Threshold(t), n, seed, threads);
      },
      py::arg("d"), py::arg("t"), py::arg("n_samples") = 1000000,
      py::arg("seed") = 1, py::arg("threads") = 0);
  m.def(
      "estimate_A",
      [](int d, double t, std::uint64_t n, std::uint64_t seed, int threads) {
        return estimate_A(Dimension(d), Threshold(t), n, seed, threads);
      },
      py::arg("d"), py::arg("t"), py::arg("n_samples") = 1000000,
      py::arg("seed") = 1, py::arg("threads") = 0);
  m.def(
      "reconstruct_simulated_povm",
      [](int d, double t, std::uint64_t n, std::uint64_t seed, int threads) {
        const auto estimates =
            reconstruct_simulated_povm(Dimension(d), Threshold(t), n, seed, threads);
        py::list out;
        for (const auto& e : estimates) {
          py::dict entry;
          entry["mean"] = e.mean;
          entry["std_error_re"] = e.std_error_re;
          entry["std_error_im"] = e.std_error_im;
          out.append(entry);
        }
        return out;
      },
      py::arg("d"), py::arg("t"), py::arg("n_samples") = 100000,
      py::arg("seed") = 1, py::arg("threads") = 0);

  m.def(
      "make_noisy_pvm",
      [](int d, const Matrix& basis, double eta, double p) {
        return make_noisy_pvm(Dimension(d), basis, NoiseParams(eta, p)).elements;
      },
      py::arg("d"), py::arg("basis"), py::arg("eta"), py::arg("p"),
      "POVM elements: d click operators then the no-click operator");
  m.def(
      "analytic_simulated_povm",
      [](int d, double t) {
        return analytic_simulated_povm(Dimension(d), Threshold(t)).elements;
      },
      py::arg("d"), py::arg("t"));
  m.def(
      "outcome_distribution",
      [](int d, const Matrix& basis, double eta, double p, const Matrix& rho) {
        const NoisyPvm pvm = make_noisy_pvm(Dimension(d), basis, NoiseParams(eta, p));
        return outcome_distribution(pvm, QuantumState(rho));
      },
      py::arg("d"), py::arg("basis"), py::arg("eta"), py::arg("p"), py::arg("rho"));
  m.def(
      "simulate_measurement",
      [](const Matrix& rho, const Matrix& basis, double t, std::uint64_t shots,
         std::uint64_t seed, int threads) {
        return simulate_measurement(QuantumState(rho), basis, Threshold(t), shots,
                                    seed, threads);
      },
      py::arg("rho"), py::arg("basis"), py::arg("t"), py::arg("shots") = 100000,
      py::arg("seed") = 1, py::arg("threads") = 0);
  m.def(
      "haar_random_unitary",
      [](int d, std::uint64_t seed) { return haar_random_unitary(Dimension(d), seed); },
      py::arg("d"), py::arg("seed"));
  m.def(
      "random_full_rank_state",
      [](int d, std::uint64_t seed) {
        return QuantumState::random_full_rank(Dimension(d), seed).rho();
      },
      py::arg("d"), py::arg("seed"));
  m.def(
      "validate_povm",
      [](const std::vector<Matrix>& elements) { return validate_povm(elements); },
      py::arg("elements"));

#ifdef VERSION_INFO
  m.attr("__version__") = VERSION_INFO;
#else
  m.attr("__version__") = "dev";
#endif
}
