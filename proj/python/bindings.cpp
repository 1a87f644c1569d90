#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/stl.h>

#include <sstream>

#include "morsim/detection.hpp"
#include "morsim/errors.hpp"
#include "morsim/mor_channel.hpp"
#include "morsim/oracles.hpp"
#include "morsim/sources.hpp"
#include "morsim/verify.hpp"

namespace py = pybind11;
using namespace morsim;

namespace {

Occupation to_occupation(const std::array<std::uint32_t, 4>& a) { return a; }

ObservableSpec make_observable(const std::string& kind, const std::string& mode, const std::pair<Mode, Mode>& pair,
                               const std::optional<std::array<std::uint32_t, 4>>& target) {
    const ModePair p{pair.first, pair.second};
    switch (parse_observable_kind(kind)) {
        case ObservableKind::intensity: return ObservableSpec::intensity(parse_mode(mode));
        case ObservableKind::two_photon_coincidence: return ObservableSpec::two_photon(p);
        case ObservableKind::four_photon_glauber: return ObservableSpec::glauber4(p);
        case ObservableKind::nd_variance: return ObservableSpec::nd(p);
        case ObservableKind::four_photon_projection:
            if (!target) throw ValidationError("projection needs a target occupation");
            return ObservableSpec::projection(to_occupation(*target));
    }
    throw ValidationError("unknown observable");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Fock-space simulator of magneto-optical rotation with coherent and PDC light";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<TruncationError>(m, "TruncationError", PyExc_RuntimeError);
    py::register_exception<NoSolutionError>(m, "NoSolutionError", PyExc_RuntimeError);
    py::register_exception<UndefinedVisibilityError>(m, "UndefinedVisibilityError", PyExc_ArithmeticError);

    py::enum_<Mode>(m, "Mode")
        .value("aH", Mode::aH)
        .value("aV", Mode::aV)
        .value("bH", Mode::bH)
        .value("bV", Mode::bV);

    py::enum_<Geometry>(m, "Geometry")
        .value("collinear", Geometry::collinear)
        .value("noncollinear", Geometry::noncollinear);

    py::enum_<SourceKind>(m, "SourceKind")
        .value("coherent", SourceKind::coherent)
        .value("collinear", SourceKind::collinear_pdc)
        .value("noncollinear", SourceKind::noncollinear_pdc);

    py::class_<SourceSpec>(m, "SourceSpec")
        .def_readonly("kind", &SourceSpec::kind)
        .def_readonly("r", &SourceSpec::r)
        .def_readonly("phi", &SourceSpec::phi)
        .def_property_readonly("alpha", [](const SourceSpec& s) { return s.alpha; })
        .def_readwrite("n_max", &SourceSpec::n_max)
        .def_readwrite("epsilon", &SourceSpec::epsilon)
        .def_readwrite("n_max_cap", &SourceSpec::n_max_cap)
        .def("__repr__", [](const SourceSpec& s) {
            std::ostringstream o;
            o << "SourceSpec(" << source_kind_name(s.kind) << ", r=" << s.r << ", alpha=" << s.alpha << ")";
            return o.str();
        });

    m.def("coherent", [](Complex alpha) { return SourceSpec::coherent(alpha); }, py::arg("alpha"));
    m.def("collinear", &SourceSpec::collinear, py::arg("r"), py::arg("phi") = 0.0);
    m.def("noncollinear", &SourceSpec::noncollinear, py::arg("r"));

    py::class_<KetState>(m, "KetState")
        .def_property_readonly("components",
                               [](const KetState& s) {
                                   std::vector<std::pair<std::array<std::uint32_t, 4>, Complex>> out;
                                   for (const auto& [occ, amp] : s.components()) out.emplace_back(occ, amp);
                                   return out;
                               })
        .def_property_readonly("truncation_tail", &KetState::truncation_tail)
        .def("norm2", &KetState::norm2)
        .def("amplitude", [](const KetState& s, const std::array<std::uint32_t, 4>& occ) { return s.amplitude(occ); })
        .def("__len__", &KetState::size);

    m.def("basis_state", [](const std::array<std::uint32_t, 4>& occ) { return make_basis_state(occ); });
    m.def("collinear_state", &collinear_state, py::arg("r"), py::arg("phi"), py::arg("n_max"));
    m.def("noncollinear_state", &noncollinear_state, py::arg("r"), py::arg("n_max"));
    m.def("mean_photon_number", [](const SourceSpec& s) { return mean_photon_number(s).value; });

    m.def("rotation_matrix", [](double theta, double theta_plus) { return rotation_matrix(theta, theta_plus).matrix(); },
          py::arg("theta"), py::arg("theta_plus") = 0.0);
    m.def(
        "subspace_matrix",
        [](const Eigen::Matrix2cd& u, std::uint32_t n) { return two_mode_unitary_subspace_matrix(TwoModeUnitary(u), n); },
        py::arg("u"), py::arg("n"), "Lift of a 2x2 unitary to the n-photon subspace of a mode pair.");
    m.def(
        "apply_mor",
        [](const KetState& s, double theta, double theta_plus, Geometry g) {
            return apply_mor(s, {theta, theta_plus}, g);
        },
        py::arg("state"), py::arg("theta"), py::arg("theta_plus") = 0.0, py::arg("geometry") = Geometry::collinear);

    m.def(
        "evaluate",
        [](const SourceSpec& s, double theta, Geometry g, const std::string& kind, const std::string& mode,
           std::pair<Mode, Mode> pair, std::optional<std::array<std::uint32_t, 4>> target, double theta_plus,
           bool exact) {
            const auto obs = make_observable(kind, mode, pair, target);
            return exact ? evaluate_exact(s, {theta, theta_plus}, g, obs) : evaluate(s, {theta, theta_plus}, g, obs);
        },
        py::arg("source"), py::arg("theta"), py::arg("geometry") = Geometry::collinear,
        py::arg("observable") = "two_photon", py::arg("mode") = "aH", py::arg("pair") = std::pair{Mode::aH, Mode::aV},
        py::arg("target") = py::none(), py::arg("theta_plus") = 0.0, py::arg("exact") = false);

    m.def(
        "fringe_scan",
        [](const SourceSpec& s, const std::vector<double>& thetas, Geometry g, const std::string& kind,
           const std::string& mode, std::pair<Mode, Mode> pair, std::optional<std::array<std::uint32_t, 4>> target,
           double theta_plus, unsigned threads, bool exact) {
            const auto obs = make_observable(kind, mode, pair, target);
            py::gil_scoped_release release;
            const auto series =
                exact ? fringe_scan_exact(s, thetas, g, obs) : fringe_scan(s, theta_plus, thetas, g, obs, threads);
            return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(series.values.data(),
                                                                     static_cast<Eigen::Index>(series.values.size())));
        },
        py::arg("source"), py::arg("thetas"), py::arg("geometry") = Geometry::collinear,
        py::arg("observable") = "two_photon", py::arg("mode") = "aH", py::arg("pair") = std::pair{Mode::aH, Mode::aV},
        py::arg("target") = py::none(), py::arg("theta_plus") = 0.0, py::arg("threads") = 1, py::arg("exact") = false);

    m.def(
        "visibility",
        [](const std::vector<double>& thetas, const std::vector<double>& values) {
            if (thetas.size() != values.size()) throw ValidationError("thetas and values differ in length");
            FringeSeries series{thetas, values, {}, {}, Geometry::collinear};
            const auto v = visibility(series);
            return py::make_tuple(v.v, v.theta_at_max, v.theta_at_min);
        },
        py::arg("thetas"), py::arg("values"), "Returns (v, theta_at_max, theta_at_min).");

    m.def("nd_variance",
          [](const SourceSpec& s, double theta, Geometry g) { return nd_variance(s, {theta, 0.0}, g); },
          py::arg("source"), py::arg("theta"), py::arg("geometry") = Geometry::collinear);
    m.def("min_detectable_angle", &min_detectable_angle, py::arg("source"));

    m.def(
        "oracle",
        [](const std::string& name, double r, Complex alpha, double theta) {
            return oracles::oracle(oracles::parse_oracle_id(name), {r, alpha, theta});
        },
        py::arg("name"), py::arg("r") = 0.0, py::arg("alpha") = Complex{}, py::arg("theta") = 0.0);
    m.def("two_photon_amplitudes", &oracles::two_photon_amplitudes, py::arg("theta"));

    m.def(
        "verify",
        [](bool inject_b_sign_error) {
            VerifyOptions opts;
            opts.inject_b_sign_error = inject_b_sign_error;
            VerifyReport report;
            {
                py::gil_scoped_release release;
                report = run_verify(opts);
            }
            std::ostringstream out;
            write_report(report, out);
            return py::make_tuple(report.all_passed(), out.str());
        },
        py::arg("inject_b_sign_error") = false, "Run the verification suite; returns (passed, report).");
}
