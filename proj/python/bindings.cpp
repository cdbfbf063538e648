#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "instab/charsolver.hpp"
#include "instab/dynamics.hpp"
#include "instab/experiment.hpp"
#include "instab/io.hpp"
#include "instab/presets.hpp"
#include "instab/theory.hpp"
#include "instab/verify.hpp"

namespace py = pybind11;
using namespace instab;

namespace {

MapSpec map_from_json_str(const std::string& text) {
    return map_from_json(nlohmann::json::parse(text), "map");
}

py::dict report_to_dict(const BoundReport& rep) {
    py::dict d;
    d["experiment"] = rep.experiment;
    d["verdict"] = verdict_name(rep.verdict);
    d["worst_margin"] = rep.worst_margin;
    d["total_checks"] = rep.total_checks;
    d["violations"] = rep.violations;
    d["notes"] = rep.notes;
    py::list checks;
    for (const auto& c : rep.checks) {
        py::dict cd;
        cd["label"] = c.label;
        cd["where"] = c.where;
        cd["observed"] = c.observed;
        cd["bound"] = c.bound;
        cd["margin"] = c.margin;
        checks.append(cd);
    }
    d["checks"] = checks;
    return d;
}

} // namespace

PYBIND11_MODULE(_instab, m) {
    m.doc() = "numerical laboratory for nonlinear stabilization experiments";

    py::register_exception<Error>(m, "InstabError");

    py::enum_<NormKind>(m, "NormKind")
        .value("L2", NormKind::L2)
        .value("SUP", NormKind::Sup)
        .value("H1SEMI", NormKind::H1Semi)
        .value("SEQ_L2", NormKind::SeqL2)
        .value("PLANAR_MIX", NormKind::PlanarMix);

    py::class_<GridFunction1D>(m, "GridFunction1D")
        .def(py::init<double, double, std::vector<double>>(), py::arg("lo"), py::arg("hi"),
             py::arg("values"))
        .def_static("zeros", &GridFunction1D::zeros)
        .def_readonly("lo", &GridFunction1D::lo)
        .def_readonly("hi", &GridFunction1D::hi)
        .def_readonly("values", &GridFunction1D::values)
        .def("dx", &GridFunction1D::dx)
        .def("eval", &GridFunction1D::eval)
        .def("__len__", &GridFunction1D::size);

    py::class_<SeqVector>(m, "SeqVector")
        .def(py::init<std::vector<double>>(), py::arg("values"))
        .def_static("zeros", &SeqVector::zeros)
        .def_static("basis", &SeqVector::basis)
        .def_readonly("values", &SeqVector::values)
        .def("__len__", &SeqVector::size);

    py::class_<PlanarPoint>(m, "PlanarPoint")
        .def(py::init<double, double>(), py::arg("v"), py::arg("w"))
        .def_readwrite("v", &PlanarPoint::v)
        .def_readwrite("w", &PlanarPoint::w);

    m.def("norm",
          [](const GridFunction1D& f, NormKind k) { return norm(f, k); });
    m.def("norm", [](const SeqVector& u) { return norm(u); });
    m.def("norm",
          [](const PlanarPoint& p) { return norm(p, NormKind::PlanarMix); });
    m.def("translate", &translate, py::arg("f"), py::arg("s"));
    m.def("dilate_translate", &dilate_translate, py::arg("f"), py::arg("a"), py::arg("s"));
    m.def("support_interval", [](const GridFunction1D& f, double tol) -> py::object {
        const auto s = support_interval(f, tol);
        if (!s) return py::none();
        return py::make_tuple(s->lo, s->hi);
    });

    py::class_<AlphaProfile>(m, "AlphaProfile")
        .def_static("power", &AlphaProfile::power, py::arg("b"), py::arg("p"),
                    py::arg("a") = 1.0)
        .def_static("log_kind", &AlphaProfile::log_kind, py::arg("gamma"),
                    py::arg("a") = 0.36787944117144233)
        .def_static("from_table", &AlphaProfile::from_table)
        .def("__call__", &AlphaProfile::operator());

    m.def("integral_alpha_over_s", [](const AlphaProfile& a, double upper) {
        const auto res = integral_alpha_over_s(a, upper);
        py::dict d;
        d["value"] = res.value;
        d["status"] = integral_status_name(res.status);
        d["numeric_status"] = integral_status_name(res.numeric_status);
        d["quadrature"] = res.quadrature;
        d["depth"] = res.depth;
        return d;
    });

    py::class_<DiagonalOperator>(m, "DiagonalOperator")
        .def(py::init([](std::vector<double> w) {
            DiagonalOperator op;
            op.weights = std::move(w);
            return op;
        }))
        .def_static("from_samples", &DiagonalOperator::from_samples)
        .def_readonly("weights", &DiagonalOperator::weights)
        .def("apply", [](const DiagonalOperator& op, const SeqVector& u) { return op.apply(u); });

    m.def("spectral_radius", [](const DiagonalOperator& op) { return spectral_radius(op); });
    m.def("approx_eigenvector", [](const DiagonalOperator& op, double nu) {
        const auto p = approx_eigenvector(op, nu);
        return py::make_tuple(p.index, p.lambda);
    });
    m.def("spectral_split", [](const DiagonalOperator& op, double rho) {
        const auto s = spectral_split(op, rho);
        return py::make_tuple(s.hi_indices, s.lo_indices);
    });
    m.def("power_norm_on_e0", [](std::size_t n) {
        return power_norm_on_e0(WeightedShift{WeightSeq::log_special()}, n);
    });

    // maps are addressed by their JSON spec, mirroring the CLI configs
    m.def("apply_map", [](const std::string& map_json, const py::object& state) {
        const MapSpec spec = map_from_json_str(map_json);
        State u;
        if (py::isinstance<py::float_>(state) || py::isinstance<py::int_>(state))
            u = state.cast<double>();
        else if (py::isinstance<PlanarPoint>(state))
            u = state.cast<PlanarPoint>();
        else if (py::isinstance<SeqVector>(state))
            u = state.cast<SeqVector>();
        else
            u = state.cast<GridFunction1D>();
        const State v = instab::apply(spec, u);
        return std::visit([](const auto& x) { return py::cast(x); }, v);
    });

    m.def("iterate_norms", [](const std::string& map_json, const py::object& state,
                              std::size_t max_steps, double floor, double ceiling) {
        const MapSpec spec = map_from_json_str(map_json);
        State u;
        if (py::isinstance<py::float_>(state) || py::isinstance<py::int_>(state))
            u = state.cast<double>();
        else if (py::isinstance<PlanarPoint>(state))
            u = state.cast<PlanarPoint>();
        else if (py::isinstance<SeqVector>(state))
            u = state.cast<SeqVector>();
        else
            u = state.cast<GridFunction1D>();
        const Trajectory traj = iterate(spec, u, {max_steps, floor, ceiling, 0});
        py::dict d;
        d["norms"] = traj.norms;
        d["stop_reason"] = stop_reason_name(traj.stop_reason);
        return d;
    },
          py::arg("map_json"), py::arg("state"), py::arg("max_steps") = 1000,
          py::arg("floor") = 0.0,
          py::arg("ceiling") = std::numeric_limits<double>::infinity());

    py::class_<MonotoneInitialData>(m, "MonotoneInitialData")
        .def(py::init<GridFunction1D>())
        .def("sup", &MonotoneInitialData::sup);

    m.def("solve_at_time", &solve_at_time, py::arg("u0"), py::arg("t"), py::arg("n_out"));
    m.def("linearized_at_time", &linearized_at_time, py::arg("u0"), py::arg("t"),
          py::arg("n_out"));
    m.def("characteristic_position", [](double x0, double t, const MonotoneInitialData& u0) {
        const auto rec = characteristic_position(x0, t, u0);
        return py::make_tuple(rec.X, rec.u_along);
    });

    m.def("budget_eta", [](const AlphaProfile& a, double r) { return budget(a, r, a.a).eta; });
    m.def("beta_build", [](const AlphaProfile& a, double rho, double C) {
        const BetaFn beta = beta_build(a, rho, C);
        py::dict d;
        d["C"] = beta.C;
        d["r0"] = beta.r0;
        return d;
    });
    m.def("sandwich_check", [](const DiagonalOperator& op, const AlphaProfile& a, double delta) {
        return report_to_dict(sandwich_check(op, a, delta));
    });
    m.def("remainder_profile", [](const std::string& map_json, std::vector<double> radii) {
        const RemainderProfile prof = remainder_profile(map_from_json_str(map_json), radii);
        py::dict d;
        d["radii"] = prof.radii;
        d["alpha_hat"] = prof.alpha_hat;
        d["alpha_hat_smooth"] = prof.alpha_hat_smooth;
        d["alpha_hat_rough"] = prof.alpha_hat_rough;
        return d;
    });

    m.def("run_config", [](const std::string& path, const std::string& out_dir,
                           std::size_t jobs) {
        const RunConfig cfg = parse_run_config(read_text_file(path));
        return run_all(cfg, out_dir, jobs);
    },
          py::arg("path"), py::arg("out_dir") = std::string(), py::arg("jobs") = 1);
    m.def("preset_names", &preset_names);
    m.def("preset_config", &preset_config);
    m.def("paper_suite_config", &paper_suite_config);

    m.def("verify_jordan2d", []() { return report_to_dict(verify_jordan2d({})); });
    m.def("verify_discont2d", []() { return report_to_dict(verify_discont2d({})); });
}
