#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "twospin/errors.hpp"
#include "twospin/experiments.hpp"
#include "twospin/fptas.hpp"
#include "twospin/json_io.hpp"
#include "twospin/potentials.hpp"
#include "twospin/saw.hpp"
#include "twospin/spin_system.hpp"
#include "twospin/thresholds.hpp"
#include "twospin/tree.hpp"

namespace py = pybind11;
using namespace twospin;

PYBIND11_MODULE(_twospin, m) {
    m.doc() = "ferromagnetic 2-spin systems: exact oracle, thresholds, SAW "
              "trees, potential certificates, and the deterministic FPTAS";

    py::register_exception<parse_error>(m, "ParseError", PyExc_ValueError);
    py::register_exception<regime_error>(m, "RegimeError", PyExc_ValueError);

    py::class_<SpinParams>(m, "SpinParams")
        .def(py::init<double, double>(), py::arg("beta"), py::arg("gamma"))
        .def_readonly("beta", &SpinParams::beta)
        .def_readonly("gamma", &SpinParams::gamma);

    py::class_<SpinSystem>(m, "SpinSystem")
        .def(py::init<SpinParams, std::vector<std::pair<VertexId, double>>,
                      std::vector<std::pair<VertexId, VertexId>>,
                      std::vector<std::pair<VertexId, int>>, bool>(),
             py::arg("params"), py::arg("vertices"), py::arg("edges"),
             py::arg("pins") = std::vector<std::pair<VertexId, int>>{},
             py::arg("allow_self_loops") = false)
        .def_static("from_json", &system_from_json_text)
        .def_static("from_file", &system_from_json_file)
        .def("to_json", &system_to_json_text)
        .def_property_readonly("n", &SpinSystem::size)
        .def_property_readonly("max_degree", &SpinSystem::max_degree)
        .def("with_pin", &SpinSystem::with_pin);

    m.def("exact_partition", &exact_partition,
          "log Z by brute-force enumeration (<= 25 free vertices)");
    m.def("exact_marginal", &exact_marginal, py::arg("system"), py::arg("vertex"));
    m.def("exact_ratio", &exact_ratio, py::arg("system"), py::arg("vertex"));

    m.def(
        "saw_ratio",
        [](const SpinSystem& sys, VertexId v) { return saw_ratio_exact(sys, v).value; },
        "exact marginal ratio through the fully expanded SAW tree");

    m.def("delta_c", &delta_c);
    m.def("lambda_c", &lambda_c);
    py::class_<ThresholdReport>(m, "ThresholdReport")
        .def_readonly("delta_c", &ThresholdReport::delta_c)
        .def_readonly("lambda_c", &ThresholdReport::lambda_c)
        .def_readonly("lambda_c_int", &ThresholdReport::lambda_c_int)
        .def_readonly("lambda_c_int_prime", &ThresholdReport::lambda_c_int_prime)
        .def_readonly("delta_c_integral", &ThresholdReport::delta_c_integral);
    m.def("compute_thresholds", &compute_thresholds);

    py::class_<FixedPoint>(m, "FixedPoint")
        .def_readonly("x", &FixedPoint::x)
        .def_readonly("derivative", &FixedPoint::derivative)
        .def_readonly("tangent", &FixedPoint::tangent);
    py::class_<FixedPointSet>(m, "FixedPointSet")
        .def_readonly("points", &FixedPointSet::points)
        .def_readonly("inflection", &FixedPointSet::inflection);
    m.def("fixed_points", &fixed_points, py::arg("params"), py::arg("lam"), py::arg("d"));
    m.def("fixed_points_composed", &fixed_points_composed, py::arg("params"), py::arg("lam"),
          py::arg("d_outer"), py::arg("d_inner"));
    m.def(
        "uniqueness_at_degree",
        [](SpinParams p, double lam, double deg) {
            return std::string(to_string(uniqueness_at_degree(p, lam, deg)));
        },
        py::arg("params"), py::arg("lam"), py::arg("tree_degree"));
    m.def("boundary_field", &boundary_field, py::arg("params"), py::arg("d"),
          py::arg("branch"));

    m.def("compute_alpha_lambda", &compute_alpha_lambda);

    py::class_<MarginalBounds>(m, "MarginalBounds")
        .def_readonly("p_lower", &MarginalBounds::p_lower)
        .def_readonly("p_upper", &MarginalBounds::p_upper)
        .def_readonly("depth_used", &MarginalBounds::depth_used)
        .def_readonly("nodes_expanded", &MarginalBounds::nodes_expanded);
    py::class_<ApproxResult>(m, "ApproxResult")
        .def_readonly("log_z", &ApproxResult::log_z)
        .def_readonly("epsilon", &ApproxResult::epsilon)
        .def_readonly("mode", &ApproxResult::mode)
        .def_readonly("depths", &ApproxResult::depths)
        .def_readonly("nodes_expanded", &ApproxResult::nodes_expanded);
    m.def(
        "approx_partition",
        [](const SpinSystem& sys, double eps, const std::string& mode) {
            return approx_partition({sys, eps, parse_mode(mode)});
        },
        py::arg("system"), py::arg("eps") = 1e-3, py::arg("mode") = "auto");
    m.def(
        "approx_marginal",
        [](const SpinSystem& sys, VertexId v, double eps_additive, const std::string& mode) {
            const SpinParams params = sys.params();
            const Potential pot =
                mode == "bounded"
                    ? make_phi1(params, std::max(2, sys.max_degree()), sys.max_lambda())
                    : make_phi2(params, sys.max_lambda() * (1 + 1e-9));
            return approx_marginal(sys, v, eps_additive, pot);
        },
        py::arg("system"), py::arg("vertex"), py::arg("eps_additive") = 1e-4,
        py::arg("mode") = "universal");

    py::class_<Phi3Certificate::PerDegree>(m, "PerDegreeMax")
        .def_readonly("d", &Phi3Certificate::PerDegree::d)
        .def_readonly("argmax_x", &Phi3Certificate::PerDegree::argmax_x)
        .def_readonly("value", &Phi3Certificate::PerDegree::value);
    py::class_<Phi3Certificate>(m, "Phi3Certificate")
        .def_readonly("t3", &Phi3Certificate::t3)
        .def_readonly("concavity_margin", &Phi3Certificate::concavity_margin)
        .def_readonly("per_degree_max", &Phi3Certificate::per_degree_max)
        .def_readonly("c0", &Phi3Certificate::c0)
        .def_readonly("c1_tail", &Phi3Certificate::c1_tail)
        .def_readonly("alpha3", &Phi3Certificate::alpha3)
        .def_readonly("argmax_degree", &Phi3Certificate::argmax_degree)
        .def_readonly("argmax_x", &Phi3Certificate::argmax_x)
        .def_readonly("base_m", &Phi3Certificate::base_m);
    m.def("make_phi3_certificate", &make_phi3_certificate, py::arg("params"), py::arg("lam"));

    py::class_<FiveSevenReport>(m, "FiveSevenReport")
        .def_readonly("lambda_c", &FiveSevenReport::lambda_c)
        .def_readonly("lambda_in_quoted_interval", &FiveSevenReport::lambda_in_quoted_interval)
        .def_readonly("fixed_points", &FiveSevenReport::fixed_points)
        .def_readonly("seq_truncated", &FiveSevenReport::seq_truncated)
        .def_readonly("seq_appended", &FiveSevenReport::seq_appended)
        .def_readonly("limit_truncated", &FiveSevenReport::limit_truncated)
        .def_readonly("limit_appended", &FiveSevenReport::limit_appended);
    m.def("five_seven_demo", &five_seven_demo, py::arg("lam"), py::arg("report_levels") = 30);

    py::class_<MixingRun>(m, "MixingRun")
        .def_readonly("ells", &MixingRun::ells)
        .def_readonly("max_discrepancy", &MixingRun::max_discrepancy)
        .def_readonly("alpha_lambda", &MixingRun::alpha_lambda)
        .def_readonly("slope_bound", &MixingRun::slope_bound)
        .def_property_readonly("slope", [](const MixingRun& r) { return r.fit.slope; })
        .def_property_readonly("r_squared",
                               [](const MixingRun& r) { return r.fit.r_squared; });
    m.def("mixing_decay", &mixing_decay, py::arg("params"), py::arg("lam"),
          py::arg("generator_spec") = "random:dmax=8", py::arg("ell_lo") = 1,
          py::arg("ell_hi") = 10, py::arg("trials") = 16, py::arg("seed") = 1);
}
