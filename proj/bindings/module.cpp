#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "chainbound/fields.hpp"
#include "chainbound/grr.hpp"
#include "chainbound/measure.hpp"
#include "chainbound/orlicz.hpp"

namespace py = pybind11;
using namespace chainbound;

namespace {

SolveMode parse_mode(const std::string& s) {
    if (s == "exact") return SolveMode::Exact;
    if (s == "greedy") return SolveMode::Greedy;
    throw ParameterError("mode must be 'exact' or 'greedy'");
}

std::shared_ptr<const MetricSpace> as_shared(const MetricSpace& s) {
    return std::make_shared<MetricSpace>(s);
}

}  // namespace

PYBIND11_MODULE(_chainbound, mod) {
    mod.doc() = "Covering numbers, uniform measures, Orlicz gauges, moduli of "
                "continuity, and chaining tail bounds on finite metric spaces";

    py::register_exception<ParameterError>(mod, "ParameterError", PyExc_ValueError);
    py::register_exception<ValidationError>(mod, "ValidationError", PyExc_ValueError);
    py::register_exception<CapabilityError>(mod, "CapabilityError", PyExc_RuntimeError);

    py::class_<AxiomViolation>(mod, "AxiomViolation")
        .def_readonly("axiom", &AxiomViolation::axiom)
        .def_readonly("i", &AxiomViolation::i)
        .def_readonly("j", &AxiomViolation::j)
        .def_readonly("k", &AxiomViolation::k)
        .def_readonly("value", &AxiomViolation::value);

    py::class_<ValidationReport>(mod, "ValidationReport")
        .def_readonly("violations", &ValidationReport::violations)
        .def("ok", &ValidationReport::ok);

    py::class_<MetricSpace, std::shared_ptr<MetricSpace>>(mod, "MetricSpace")
        .def_static("from_matrix", &MetricSpace::from_matrix, py::arg("dist"),
                    py::arg("labels") = std::vector<std::string>{},
                    py::arg("semimetric") = false)
        .def_static("grid", &MetricSpace::grid, py::arg("dims"), py::arg("points_per_axis"),
                    py::arg("alpha") = 1.0, py::arg("scale") = 1.0)
        .def_static("cycle", &MetricSpace::cycle, py::arg("n"))
        .def_static("point_cloud", &MetricSpace::point_cloud, py::arg("points"),
                    py::arg("labels") = std::vector<std::string>{})
        .def("size", &MetricSpace::size)
        .def("dist", &MetricSpace::dist)
        .def("flat", &MetricSpace::flat)
        .def("labels", &MetricSpace::labels)
        .def("validate", &MetricSpace::validate, py::arg("tol") = 1e-9,
             py::arg("check_triangle") = true)
        .def("diameter", &MetricSpace::diameter)
        .def("chebyshev_center", &MetricSpace::chebyshev_center)
        .def("breakpoints", &MetricSpace::breakpoints)
        .def("positive_breakpoints", &MetricSpace::positive_breakpoints)
        .def("ball", &MetricSpace::ball)
        .def("subspace", &MetricSpace::subspace);

    py::class_<CoverOptions>(mod, "CoverOptions")
        .def(py::init<>())
        .def_readwrite("exact_limit", &CoverOptions::exact_limit);

    py::class_<NetResult>(mod, "NetResult")
        .def_readonly("epsilon", &NetResult::epsilon)
        .def_readonly("centers", &NetResult::centers)
        .def_readonly("assignment", &NetResult::assignment)
        .def_readonly("exact", &NetResult::exact);

    py::class_<CoverProfileEntry>(mod, "CoverProfileEntry")
        .def_readonly("r", &CoverProfileEntry::r)
        .def_readonly("N", &CoverProfileEntry::N)
        .def_readonly("M", &CoverProfileEntry::M)
        .def_readonly("exact", &CoverProfileEntry::exact);

    mod.def(
        "cover_number",
        [](const MetricSpace& s, double eps, const std::string& mode, CoverOptions opts) {
            return cover_number(s, eps, parse_mode(mode), opts);
        },
        py::arg("space"), py::arg("epsilon"), py::arg("mode") = "exact",
        py::arg("opts") = CoverOptions{});
    mod.def(
        "pack_number",
        [](const MetricSpace& s, double eps, const std::string& mode, CoverOptions opts) {
            return pack_number(s, eps, parse_mode(mode), opts);
        },
        py::arg("space"), py::arg("epsilon"), py::arg("mode") = "exact",
        py::arg("opts") = CoverOptions{});
    mod.def("greedy_net", &greedy_net, py::arg("space"), py::arg("epsilon"));
    mod.def("optimal_net", &optimal_net, py::arg("space"), py::arg("epsilon"),
            py::arg("opts") = CoverOptions{});
    mod.def(
        "cover_profile",
        [](const MetricSpace& s, const std::string& mode, CoverOptions opts) {
            return cover_profile(s, parse_mode(mode), opts).entries;
        },
        py::arg("space"), py::arg("mode") = "exact", py::arg("opts") = CoverOptions{});

    py::class_<DiscreteMeasure>(mod, "DiscreteMeasure")
        .def(py::init([](const MetricSpace& s, std::vector<double> w) {
                 return DiscreteMeasure(as_shared(s), std::move(w));
             }),
             py::arg("space"), py::arg("weights"))
        .def_static(
            "uniform", [](const MetricSpace& s) { return DiscreteMeasure::uniform(as_shared(s)); },
            py::arg("space"))
        .def_static(
            "point_mass",
            [](const MetricSpace& s, int at) { return DiscreteMeasure::point_mass(as_shared(s), at); },
            py::arg("space"), py::arg("at"))
        .def("weights", &DiscreteMeasure::weights)
        .def("ball_mass_at", &DiscreteMeasure::ball_mass_at)
        .def("ball_mass", &DiscreteMeasure::ball_mass);

    mod.def(
        "nu_eps",
        [](const MetricSpace& s, double eps, const std::string& mode, CoverOptions opts) {
            return nu_eps(as_shared(s), eps, parse_mode(mode), opts);
        },
        py::arg("space"), py::arg("epsilon"), py::arg("mode") = "exact",
        py::arg("opts") = CoverOptions{});
    mod.def("wasserstein1", &wasserstein1, py::arg("a"), py::arg("b"));

    py::class_<UniformMeasureResult>(mod, "UniformMeasureResult")
        .def_readonly("measure", &UniformMeasureResult::measure)
        .def_readonly("wasserstein_gaps", &UniformMeasureResult::wasserstein_gaps)
        .def_readonly("stabilized", &UniformMeasureResult::stabilized);
    mod.def(
        "uniform_measure",
        [](const MetricSpace& s, const std::vector<double>& sched, const std::string& mode,
           CoverOptions opts) { return uniform_measure(as_shared(s), sched, parse_mode(mode), opts); },
        py::arg("space"), py::arg("eps_schedule"), py::arg("mode") = "exact",
        py::arg("opts") = CoverOptions{});

    py::class_<HomogeneityReport>(mod, "HomogeneityReport")
        .def_readonly("c_minus", &HomogeneityReport::c_minus)
        .def_readonly("quasi_ratio", &HomogeneityReport::quasi_ratio);
    mod.def(
        "weak_homogeneity",
        [](const MetricSpace& s, const std::string& mode, CoverOptions opts) {
            return weak_homogeneity(as_shared(s), parse_mode(mode), opts);
        },
        py::arg("space"), py::arg("mode") = "exact", py::arg("opts") = CoverOptions{});

    py::class_<MGFunction>(mod, "MGFunction")
        .def_static("quadratic", &MGFunction::quadratic, py::arg("sigma2") = 1.0)
        .def_static("power", &MGFunction::power, py::arg("q"), py::arg("c") = 1.0)
        .def_static("tabulated", &MGFunction::tabulated, py::arg("lambdas"), py::arg("values"),
                    py::arg("check_convex") = true)
        .def("value", &MGFunction::value)
        .def("inverse", &MGFunction::inverse)
        .def("conjugate", &MGFunction::conjugate)
        .def("psi", &MGFunction::psi);

    py::class_<YoungFunction>(mod, "YoungFunction")
        .def_static("power", &YoungFunction::power, py::arg("p"))
        .def_static("exp_quadratic", &YoungFunction::exp_quadratic)
        .def_static("exp_conjugate", &YoungFunction::exp_conjugate, py::arg("phi"))
        .def_static("tabulated", &YoungFunction::tabulated, py::arg("z"), py::arg("values"))
        .def("value", &YoungFunction::value)
        .def("inverse", &YoungFunction::inverse);

    mod.def(
        "luxemburg_norm",
        [](const std::vector<double>& samples, const YoungFunction& Phi) {
            return luxemburg_norm(samples, Phi);
        },
        py::arg("samples"), py::arg("Phi"));

    py::class_<ModulusContext>(mod, "ModulusContext")
        .def_readonly("V", &ModulusContext::V);
    mod.def(
        "make_context",
        [](const MetricSpace& s, std::vector<double> rho, const DiscreteMeasure& m,
           const YoungFunction& Phi) { return make_context(as_shared(s), std::move(rho), m, Phi); },
        py::arg("space"), py::arg("rho_flat"), py::arg("measure"), py::arg("Phi"));
    mod.def("rho_from_scalar", &rho_from_scalar, py::arg("f"));
    mod.def("w_distance", &w_distance, py::arg("ctx"), py::arg("x1"), py::arg("x2"));
    mod.def("w_bar_distance", &w_bar_distance, py::arg("ctx"), py::arg("x1"), py::arg("x2"));

    py::class_<ModulusReport>(mod, "ModulusReport")
        .def_readonly("worst_ratio", &ModulusReport::worst_ratio)
        .def_readonly("pass_", &ModulusReport::pass)
        .def_readonly("V", &ModulusReport::V)
        .def_readonly("minorizing", &ModulusReport::minorizing);
    mod.def("check_arnold_imkeller", &check_arnold_imkeller, py::arg("ctx"));

    py::class_<GammaResult>(mod, "GammaResult")
        .def_readonly("gamma", &GammaResult::gamma)
        .def_readonly("argmax", &GammaResult::argmax)
        .def_readonly("delta_grid", &GammaResult::delta_grid)
        .def_readonly("truncated", &GammaResult::truncated);
    mod.def("gamma_m", &gamma_m, py::arg("space"), py::arg("measure"), py::arg("Phi"));

    py::class_<ChainBounds>(mod, "ChainBounds")
        .def_readonly("gamma", &ChainBounds::gamma)
        .def_readonly("bound_57", &ChainBounds::bound_57)
        .def_readonly("bound_58_inf", &ChainBounds::bound_58_inf)
        .def_readonly("bound_58_liminf", &ChainBounds::bound_58_liminf)
        .def_readonly("bound_59", &ChainBounds::bound_59);
    mod.def(
        "bound_chain",
        [](const MetricSpace& s, const DiscreteMeasure& m, const YoungFunction& Phi,
           double c_minus, const std::string& mode, CoverOptions opts) {
            return bound_chain(s, m, Phi, c_minus, parse_mode(mode), opts);
        },
        py::arg("space"), py::arg("measure"), py::arg("Phi"), py::arg("c_minus"),
        py::arg("mode") = "exact", py::arg("opts") = CoverOptions{});

    mod.def(
        "entropy_integral",
        [](const MetricSpace& s, const YoungFunction& Phi, const std::string& mode,
           CoverOptions opts) { return entropy_integral(s, Phi, parse_mode(mode), opts); },
        py::arg("space"), py::arg("Phi"), py::arg("mode") = "exact",
        py::arg("opts") = CoverOptions{});

    py::class_<RandomFieldModel>(mod, "RandomFieldModel")
        .def_readonly("seed", &RandomFieldModel::seed)
        .def("size", &RandomFieldModel::size);
    mod.def("cov_ou", &cov_ou, py::arg("t"));
    mod.def("cov_fbm", &cov_fbm, py::arg("t"), py::arg("hurst"));
    mod.def("cov_iid", &cov_iid, py::arg("n"));
    mod.def(
        "gaussian_model",
        [](const MetricSpace& s, std::vector<double> cov, std::uint64_t seed,
           std::vector<double> mean) {
            return gaussian_model(as_shared(s), std::move(cov), seed, std::move(mean));
        },
        py::arg("space"), py::arg("cov"), py::arg("seed"),
        py::arg("mean") = std::vector<double>{});

    py::class_<SampleMatrix>(mod, "SampleMatrix")
        .def_readonly("R", &SampleMatrix::R)
        .def_readonly("n", &SampleMatrix::n)
        .def_readonly("seed", &SampleMatrix::seed)
        .def_readonly("values", &SampleMatrix::values);
    mod.def("sample", &sample, py::arg("model"), py::arg("R"));
    mod.def("natural_distance", &natural_distance, py::arg("samples"), py::arg("Phi"),
            py::arg("normalize") = false);

    py::class_<TailBoundReport>(mod, "TailBoundReport")
        .def_readonly("u_grid", &TailBoundReport::u_grid)
        .def_readonly("bound", &TailBoundReport::bound)
        .def_readonly("bound_raw", &TailBoundReport::bound_raw)
        .def_readonly("bound_abs", &TailBoundReport::bound_abs)
        .def_readonly("delta_star", &TailBoundReport::delta_star)
        .def_readonly("empirical", &TailBoundReport::empirical)
        .def_readonly("empirical_se", &TailBoundReport::empirical_se)
        .def_readonly("dominated", &TailBoundReport::dominated)
        .def_readonly("K", &TailBoundReport::K)
        .def_readonly("D_zeta", &TailBoundReport::D_zeta);

    py::class_<McVerifyResult>(mod, "McVerifyResult")
        .def_readonly("report", &McVerifyResult::report)
        .def_readonly("mean_Z", &McVerifyResult::mean_Z)
        .def_readonly("se_Z", &McVerifyResult::se_Z)
        .def_readonly("K", &McVerifyResult::K)
        .def_readonly("all_dominated", &McVerifyResult::all_dominated);
    mod.def(
        "mc_verify",
        [](const RandomFieldModel& model, const YoungFunction& Phi,
           const std::vector<double>& u_grid, int R, const std::string& mode,
           CoverOptions opts) { return mc_verify(model, Phi, u_grid, R, parse_mode(mode), opts); },
        py::arg("model"), py::arg("Phi"), py::arg("u_grid"), py::arg("R"),
        py::arg("mode") = "exact", py::arg("opts") = CoverOptions{});
}
