#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ptchain/chain.hpp"
#include "ptchain/errors.hpp"
#include "ptchain/phase.hpp"
#include "ptchain/secular.hpp"
#include "ptchain/spectral.hpp"
#include "ptchain/wavefn.hpp"

namespace py = pybind11;
using namespace ptchain;

PYBIND11_MODULE(_core, m) {
    m.doc() = "PT-symmetric tight-binding chain: spectra, critical strength, eigenstates.";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    auto numerical = py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", numerical.ptr());
    py::register_exception<GridTooCoarseError>(m, "GridTooCoarseError", numerical.ptr());

    py::class_<ChainSpec>(m, "ChainSpec")
        .def(py::init<int, int, double, double>(), py::arg("n_sites"), py::arg("impurity_site"),
             py::arg("gamma"), py::arg("hopping") = 1.0)
        .def_property_readonly("n_sites", &ChainSpec::n_sites)
        .def_property_readonly("impurity_site", &ChainSpec::impurity_site)
        .def_property_readonly("mirror_impurity_site", &ChainSpec::mirror_impurity_site)
        .def_property_readonly("gamma", &ChainSpec::gamma)
        .def_property_readonly("hopping", &ChainSpec::hopping)
        .def_property_readonly("mu", &ChainSpec::mu)
        .def("with_gamma", &ChainSpec::with_gamma)
        .def("__repr__", [](const ChainSpec& s) {
            return "ChainSpec(n_sites=" + std::to_string(s.n_sites()) +
                   ", impurity_site=" + std::to_string(s.impurity_site()) +
                   ", gamma=" + py::repr(py::float_(s.gamma())).cast<std::string>() +
                   ", hopping=" + py::repr(py::float_(s.hopping())).cast<std::string>() + ")";
        });

    py::class_<Spectrum>(m, "Spectrum")
        .def_readonly("eigenvalues", &Spectrum::eigenvalues)
        .def_readonly("degenerate", &Spectrum::degenerate)
        .def_readonly("n_real", &Spectrum::n_real)
        .def_readonly("n_complex", &Spectrum::n_complex)
        .def_readonly("broken", &Spectrum::broken);

    py::class_<RootSet>(m, "RootSet")
        .def_readonly("roots", &RootSet::roots)
        .def_readonly("multiplicities", &RootSet::multiplicities)
        .def_readonly("residuals", &RootSet::residuals)
        .def_readonly("total_count", &RootSet::total_count);

    py::class_<CriticalResult>(m, "CriticalResult")
        .def_readonly("gamma_pt", &CriticalResult::gamma_pt)
        .def_readonly("gamma_low", &CriticalResult::gamma_low)
        .def_readonly("gamma_high", &CriticalResult::gamma_high)
        .def_readonly("tolerance", &CriticalResult::tolerance)
        .def_readonly("n_complex_just_above", &CriticalResult::n_complex_just_above);

    py::class_<PhasePoint>(m, "PhasePoint")
        .def_readonly("n_sites", &PhasePoint::n_sites)
        .def_readonly("impurity_site", &PhasePoint::impurity_site)
        .def_readonly("mu", &PhasePoint::mu)
        .def_readonly("gamma_pt", &PhasePoint::gamma_pt)
        .def_readonly("n_complex_saturated", &PhasePoint::n_complex_saturated)
        .def_readonly("error", &PhasePoint::error);

    py::class_<ScalingFit>(m, "ScalingFit")
        .def_readonly("mu", &ScalingFit::mu)
        .def_readonly("sample_sizes", &ScalingFit::sample_sizes)
        .def_readonly("gamma_pts", &ScalingFit::gamma_pts)
        .def_readonly("exponent", &ScalingFit::exponent)
        .def_readonly("log_prefactor", &ScalingFit::log_prefactor)
        .def_readonly("residual", &ScalingFit::residual);

    py::class_<Eigenvector>(m, "Eigenvector")
        .def_readonly("energy", &Eigenvector::energy)
        .def_readonly("amplitudes", &Eigenvector::amplitudes)
        .def_readonly("quasimomentum", &Eigenvector::quasimomentum)
        .def_readonly("residual", &Eigenvector::residual)
        .def_readonly("near_exceptional_point", &Eigenvector::near_exceptional_point);

    m.def("build_hamiltonian", &build_hamiltonian, py::arg("spec"));
    m.def("eval_secular", &eval_secular, py::arg("k"), py::arg("spec"));
    m.def("find_real_roots", py::overload_cast<const ChainSpec&>(&find_real_roots), py::arg("spec"));

    m.def("all_eigenvalues", &all_eigenvalues, py::arg("spec"),
          py::arg("tolerance") = kDefaultClassificationTolerance,
          py::call_guard<py::gil_scoped_release>());
    m.def("all_eigenvalues_dense", &all_eigenvalues_dense, py::arg("spec"),
          py::arg("tolerance") = kDefaultClassificationTolerance,
          py::call_guard<py::gil_scoped_release>());
    m.def("eigenvector", &eigenvector_for, py::arg("spec"), py::arg("energy"));

    m.def(
        "critical_gamma",
        [](int n, int site, double hopping, double tolerance, double gamma_cap, bool dense) {
            CriticalOptions opt;
            opt.tolerance = tolerance;
            opt.gamma_cap = gamma_cap;
            opt.predicate = dense ? PhasePredicate::Dense : PhasePredicate::Secular;
            return critical_gamma(n, site, hopping, opt);
        },
        py::arg("n_sites"), py::arg("impurity_site"), py::arg("hopping") = 1.0,
        py::arg("tolerance") = 1e-8, py::arg("gamma_cap") = 2.0, py::arg("dense") = false,
        py::call_guard<py::gil_scoped_release>());
    m.def("broken_count", &broken_count, py::arg("n_sites"), py::arg("impurity_site"),
          py::arg("gamma"), py::arg("hopping") = 1.0,
          py::arg("classification_tolerance") = kDefaultClassificationTolerance,
          py::call_guard<py::gil_scoped_release>());
    m.def(
        "sweep_phase_diagram",
        [](int n, const std::vector<int>& sites, double hopping) {
            return sweep_phase_diagram(n, sites, hopping);
        },
        py::arg("n_sites"), py::arg("impurity_sites"), py::arg("hopping") = 1.0,
        py::call_guard<py::gil_scoped_release>());
    m.def(
        "fit_fragility_scaling",
        [](double mu, const std::vector<int>& sizes, double hopping) {
            return fit_fragility_scaling(mu, sizes, hopping);
        },
        py::arg("mu"), py::arg("sample_sizes"), py::arg("hopping") = 1.0,
        py::call_guard<py::gil_scoped_release>());
    m.def("odd_closest_threshold", &odd_closest_threshold, py::arg("n_sites"),
          py::arg("hopping") = 1.0);

    m.def(
        "amplitude_phase",
        [](const Eigenvector& psi) {
            std::vector<double> amplitude, phase;
            for (const auto& p : amplitude_phase(psi)) {
                amplitude.push_back(p.amplitude);
                phase.push_back(p.phase);
            }
            return py::make_tuple(amplitude, phase);
        },
        py::arg("psi"), "Per-site (amplitudes, phases) with the first site's phase set to 0.");
    m.def("theta_gamma", &theta_gamma, py::arg("k"), py::arg("gamma"), py::arg("hopping"),
          py::arg("n_sites"));
    m.def("pt_symmetry_check", &pt_symmetry_check, py::arg("psi"), py::arg("tolerance"));
}
