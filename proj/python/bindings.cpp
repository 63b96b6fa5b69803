#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fermirdm/densities.hpp"
#include "fermirdm/errors.hpp"
#include "fermirdm/model.hpp"
#include "fermirdm/potential.hpp"
#include "fermirdm/spectra.hpp"

namespace py = pybind11;
using namespace fermirdm;

namespace {

std::vector<std::vector<double>> rows_of(const linalg::Matrix& m) {
    std::vector<std::vector<double>> out(m.rows(), std::vector<double>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
    return out;
}

py::dict spectrum_dict(const SpectrumResult& s) {
    py::dict d;
    d["lambdas"] = s.lambdas;
    d["method"] = to_string(s.method);
    d["trace_error"] = s.trace_error;
    d["grid_nodes"] = s.grid_nodes;
    d["orbital_parity"] = s.orbital_parity;
    return d;
}

py::dict extremum_dict(const Extremum& e) {
    py::dict d;
    d["location"] = e.location;
    d["value"] = e.value;
    d["curvature"] = e.curvature;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Reduced density matrix spectra of harmonically interacting fermions";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

    py::class_<ModelParams>(m, "ModelParams")
        .def_readonly("n_particles", &ModelParams::n_particles)
        .def_readonly("t", &ModelParams::t)
        .def_readonly("A", &ModelParams::A)
        .def_readonly("B", &ModelParams::B)
        .def_readonly("a", &ModelParams::a)
        .def_readonly("b", &ModelParams::b)
        .def_readonly("diag_rate", &ModelParams::diag_rate)
        .def_readonly("p_squared", &ModelParams::p_squared);

    m.def("make_params", &make_params, py::arg("n_particles"), py::arg("t"));
    m.def("coupling_from_t", &coupling_from_t);
    m.def("t_from_coupling", &t_from_coupling, py::arg("n_particles"), py::arg("coupling"));

    m.def(
        "rdm",
        [](int n, double t, const std::vector<double>& xs, const std::vector<double>& ys) {
            const auto k = build_kernel(make_params(n, t));
            std::vector<std::vector<double>> out(xs.size(), std::vector<double>(ys.size()));
            for (std::size_t i = 0; i < xs.size(); ++i)
                for (std::size_t j = 0; j < ys.size(); ++j) out[i][j] = k(xs[i], ys[j]);
            return out;
        },
        py::arg("n_particles"), py::arg("t"), py::arg("xs"), py::arg("ys"));

    m.def(
        "spectrum",
        [](int n, double t, const std::string& method, int k_max) {
            const auto params = make_params(n, t);
            if (method == "nystrom") {
                GridSpec spec;
                spec.k_max = k_max;
                return spectrum_dict(solve_nystrom(build_kernel(params), spec));
            }
            if (method == "schrodinger") {
                return spectrum_dict(solve_momentum_schrodinger(params, build_potential(params), k_max));
            }
            if (method == "oracle") return spectrum_dict(oracle_spectrum(params));
            throw ValidationError("method must be nystrom, schrodinger or oracle");
        },
        py::arg("n_particles"), py::arg("t"), py::arg("method") = "nystrom", py::arg("k_max") = 40);

    m.def(
        "potential",
        [](int n, double t, const std::vector<double>& ps) {
            const auto pot = build_potential(make_params(n, t));
            std::vector<double> out;
            for (double p : ps) out.push_back(pot(p));
            return out;
        },
        py::arg("n_particles"), py::arg("t"), py::arg("ps"));

    m.def(
        "extrema",
        [](int n, double t) {
            const auto pot = build_potential(make_params(n, t));
            const auto rep = find_extrema(pot);
            py::list minima, maxima;
            for (const auto& e : rep.minima) minima.append(extremum_dict(e));
            for (const auto& e : rep.maxima) maxima.append(extremum_dict(e));
            const auto hp = harmonic_params(pot, rep);
            py::dict d;
            d["minima"] = minima;
            d["maxima"] = maxima;
            d["parity_class"] = to_string(rep.parity_class);
            d["global_min_multiplicity"] = rep.global_min_multiplicity;
            d["alpha"] = hp.alpha;
            d["beta"] = hp.beta;
            d["mass"] = hp.mass;
            return d;
        },
        py::arg("n_particles"), py::arg("t"));

    m.def("max_strong_coupling_t", &max_strong_coupling_t);

    m.def(
        "density",
        [](int n, double t, const std::vector<double>& xs) { return one_particle_density(make_params(n, t), xs).values; },
        py::arg("n_particles"), py::arg("t"), py::arg("xs"));

    m.def(
        "pair_density",
        [](int n, double t, const std::vector<double>& xs, const std::vector<double>& ys) {
            return rows_of(two_particle_density(make_params(n, t), xs, ys).values);
        },
        py::arg("n_particles"), py::arg("t"), py::arg("xs"), py::arg("ys"));

    m.def(
        "correlation",
        [](int n, double t, const std::vector<double>& xs) {
            const auto params = make_params(n, t);
            const auto pd = two_particle_density(params, xs, xs);
            return rows_of(correlation_function(pd, one_particle_density(params, xs)).values);
        },
        py::arg("n_particles"), py::arg("t"), py::arg("xs"));
}
