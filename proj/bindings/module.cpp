// SPDX-License-Identifier: Apache-2.0
//
// Python bindings for the main operations.  Point patterns cross the
// boundary as CSV text (the same exact-decimal format the CLI uses) so that
// bit-level round trips survive the language hop.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ppiso/harness.hpp"
#include "ppiso/iso.hpp"
#include "ppiso/selection.hpp"
#include "ppiso/tessellation.hpp"

namespace py = pybind11;
using namespace ppiso;

namespace {

Domain make_domain(int dim, bool torus, double a, double b) {
    Real ra(a), rb(b);
    if (dim == 1) return torus ? Domain::torus1(ra) : Domain::box1(ra);
    return torus ? Domain::torus2(ra, rb) : Domain::box2(ra, rb);
}

FrameMode mode_of(const std::string& m) {
    return m == "translation" ? FrameMode::kTranslation : FrameMode::kIsometry;
}

}  // namespace

PYBIND11_MODULE(_ppiso, m) {
    m.doc() = "Finitary isomorphisms of finite-domain Poisson point patterns";

    m.def(
        "sample_poisson",
        [](int dim, bool torus, double side_a, double side_b, double r, std::uint64_t seed) {
            Rng rng(seed, "py-sample");
            return sample_poisson(make_domain(dim, torus, side_a, side_b), r, rng).to_csv();
        },
        py::arg("dim"), py::arg("torus"), py::arg("side_a"), py::arg("side_b"),
        py::arg("r"), py::arg("seed"));

    m.def(
        "psi",
        [](const std::string& csv, double r, double s, const std::string& params_json,
           const std::string& mode) {
            PointPattern mu = PointPattern::from_csv(csv);
            SelectionParams p = params_json.empty() ? SelectionParams::desk(mu.dom.dim)
                                                    : SelectionParams::from_json(params_json);
            IsoOutput out = psi(mu, r, s, p, mode_of(mode));
            return py::make_tuple(out.first.to_csv(), out.second.to_csv());
        },
        py::arg("pattern_csv"), py::arg("r"), py::arg("s"), py::arg("params_json") = "",
        py::arg("mode") = "isometry");

    m.def(
        "psi_inv",
        [](const std::string& first_csv, const std::string& second_csv, double r, double s,
           const std::string& params_json, const std::string& mode) {
            IsoOutput out;
            out.first = PointPattern::from_csv(first_csv);
            out.second = PointPattern::from_csv(second_csv);
            out.r = r;
            out.s = s;
            out.mode = mode_of(mode);
            SelectionParams p = params_json.empty()
                                    ? SelectionParams::desk(out.first.dom.dim)
                                    : SelectionParams::from_json(params_json);
            return psi_inv(out, p).to_csv();
        },
        py::arg("first_csv"), py::arg("second_csv"), py::arg("r"), py::arg("s"),
        py::arg("params_json") = "", py::arg("mode") = "isometry");

    m.def(
        "phi",
        [](const std::string& csv, double r, double s, const std::string& params_json,
           const std::string& mode) {
            PointPattern mu = PointPattern::from_csv(csv);
            SelectionParams p = params_json.empty() ? SelectionParams::desk(mu.dom.dim)
                                                    : SelectionParams::from_json(params_json);
            return phi(mu, r, s, p, mode_of(mode)).to_csv();
        },
        py::arg("pattern_csv"), py::arg("r"), py::arg("s"), py::arg("params_json") = "",
        py::arg("mode") = "isometry");

    m.def(
        "selection_map",
        [](const std::string& csv, const std::string& params_json) {
            PointPattern mu = PointPattern::from_csv(csv);
            SelectionParams p = params_json.empty() ? SelectionParams::desk(mu.dom.dim)
                                                    : SelectionParams::from_json(params_json);
            GlobeSet gs = seed_set(mu, p);
            return globes_to_json(gs, mu.dom.dim, mu.coordbits);
        },
        py::arg("pattern_csv"), py::arg("params_json") = "");

    m.def(
        "desk_params", [](int dim) { return SelectionParams::desk(dim).to_json(); },
        py::arg("dim"));
    m.def(
        "paper_params", [](int dim) { return SelectionParams::paper(dim).to_json(); },
        py::arg("dim"));

    m.def(
        "prop24_bound",
        [](double r, double s, long M) {
            Prop24Result res = prop24_bound(r, s, M);
            return py::make_tuple(res.ell, res.lhs, res.rhs);
        },
        py::arg("r"), py::arg("s"), py::arg("M"));
}
