#include "syncnet/conditions.hpp"
#include "syncnet/errors.hpp"
#include "syncnet/io.hpp"
#include "syncnet/linalg.hpp"
#include "syncnet/scenarios.hpp"
#include "syncnet/svg.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace syncnet;

namespace {

// Python side passes JSON text; the package wrapper converts dicts.
Scenario scenario_from(const std::string& preset_or_json) {
    if (!preset_or_json.empty() && preset_or_json.front() == '{')
        return scenario_from_json(parse_json(preset_or_json, "<python>"));
    return preset(preset_or_json);
}

py::tuple trajectory_tuple(const Trajectory& tr, bool diverged) {
    Matrix states(static_cast<Eigen::Index>(tr.states.size()), tr.states.empty() ? 0 : tr.states.front().size());
    for (std::size_t k = 0; k < tr.states.size(); ++k) states.row(static_cast<Eigen::Index>(k)) = tr.states[k].transpose();
    Vector times = Eigen::Map<const Vector>(tr.times.data(), static_cast<Eigen::Index>(tr.times.size()));
    std::vector<std::pair<double, int>> events;
    for (const auto& e : tr.switch_events) events.emplace_back(e.t, e.graph + 1);
    return py::make_tuple(times, states, events, tr.n, diverged);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "syncnet native core";

    static py::exception<Error> base(m, "SyncnetError", PyExc_RuntimeError);
    static py::exception<InputError> input(m, "InputError", base.ptr());
    static py::exception<DivergenceError> divergence(m, "DivergenceError", base.ptr());
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const InputError& e) {
            py::set_error(input, e.what());
        } catch (const DivergenceError& e) {
            py::set_error(divergence, e.what());
        } catch (const Error& e) {
            py::set_error(base, e.what());
        }
    });

    m.def("laplacian_json", [](const std::string& text) {
        return laplacian(graph_from_json(parse_json(text, "<python>")));
    });
    m.def("has_spanning_tree_json", [](const std::string& text) {
        return has_directed_spanning_tree(graph_from_json(parse_json(text, "<python>")));
    });
    m.def("analyze_graph_json", [](const std::string& text) {
        auto g = graph_from_json(parse_json(text, "<python>"));
        Matrix L = laplacian(g);
        auto rd = reach_decomposition(g);
        auto es = eigenstructure(L);
        auto kb = kernel_basis_by_reaches(L, rd);
        Json reaches = Json::array();
        for (std::size_t r = 0; r < rd.reaches.size(); ++r) {
            Json nodes = Json::array(), excl = Json::array(), common = Json::array();
            for (int v : rd.reaches[r]) nodes.push_back(v + 1);
            for (int v : rd.exclusive[r]) excl.push_back(v + 1);
            for (int v : rd.common[r]) common.push_back(v + 1);
            reaches.push_back({{"nodes", nodes},
                               {"exclusive", excl},
                               {"common", common},
                               {"gamma", vector_to_json(kb.vectors[r])}});
        }
        return Json{{"reaches", reaches},
                    {"zero_alg_mult", es.zero_alg_mult},
                    {"zero_geo_mult", es.zero_geo_mult},
                    {"has_spanning_tree", has_directed_spanning_tree(g)}}
            .dump();
    });
    m.def("rank", [](const Matrix& a) { return syncnet::rank(a); }, py::arg("m"));
    m.def("expm", &expm, py::arg("m"));
    m.def("observability_rank", &observability_rank, py::arg("C"), py::arg("A"));
    m.def(
        "exp_growth_bound",
        [](const Matrix& H, const std::string& method, double t_max) {
            auto b = exp_growth_bound(H, parse_bound_method(method), t_max);
            return py::make_tuple(b.upsilon, b.xi);
        },
        py::arg("H"), py::arg("method") = "eigen-conditioning", py::arg("t_max") = 10.0);

    m.def("preset_names", &preset_names);
    m.def("preset_json", [](const std::string& name) { return scenario_to_json(preset(name)).dump(); });
    m.def(
        "check_condition_json",
        [](const std::string& scenario, std::optional<double> gamma) {
            Scenario s = scenario_from(scenario);
            if (!s.is_linear()) throw InputError("check_condition applies to linear systems");
            const auto& sys = std::get<LinearNetworkSystem>(s.system);
            return condition_report_to_json(theorem1_check(sys.A, sys.B, sys.K, sys.phi, sys.sig, sys.graphs, gamma))
                .dump();
        },
        py::arg("scenario"), py::arg("gamma") = py::none());
    m.def(
        "simulate",
        [](const std::string& scenario, std::optional<std::uint64_t> seed, std::optional<double> phi, double dt,
           double horizon) {
            Scenario s = scenario_from(scenario);
            if (phi) s.set_phi(*phi);
            Vector x0 = s.x0.draw(s.agents(), seed);
            if (dt <= 0) dt = s.dt;
            if (horizon <= 0) horizon = s.horizon;
            py::gil_scoped_release release;
            try {
                Trajectory tr = std::visit([&](const auto& sys) { return integrate(sys, x0, dt, horizon); }, s.system);
                py::gil_scoped_acquire acquire;
                return trajectory_tuple(tr, false);
            } catch (const DivergenceError& e) {
                py::gil_scoped_acquire acquire;
                return trajectory_tuple(e.partial(), true);
            }
        },
        py::arg("scenario"), py::arg("seed") = py::none(), py::arg("phi") = py::none(), py::arg("dt") = -1.0,
        py::arg("horizon") = -1.0);
    m.def(
        "render_svg",
        [](const std::vector<std::tuple<std::string, std::vector<double>, std::vector<double>>>& series,
           const std::vector<double>& switch_times, const std::string& title) {
            std::vector<SvgSeries> s;
            for (const auto& [label, t, y] : series) s.push_back({label, t, y});
            return render_svg(s, switch_times, title);
        },
        py::arg("series"), py::arg("switch_times"), py::arg("title") = "");
}
