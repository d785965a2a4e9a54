#include "syncnet/io.hpp"

#include "syncnet/errors.hpp"
#include "syncnet/linalg.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace syncnet {

namespace {

const Json& need(const Json& j, const std::string& key, const std::string& ctx) {
    if (!j.is_object()) throw InputError(ctx + ": expected a JSON object");
    auto it = j.find(key);
    if (it == j.end()) throw InputError(ctx + ": missing field '" + key + "'");
    return *it;
}

double number(const Json& j, const std::string& ctx) {
    if (!j.is_number()) throw InputError(ctx + ": expected a number");
    double v = j.get<double>();
    if (!std::isfinite(v)) throw InputError(ctx + ": value is not finite");
    return v;
}

int integer(const Json& j, const std::string& ctx) {
    if (!j.is_number_integer()) throw InputError(ctx + ": expected an integer");
    return j.get<int>();
}

double number_or(const Json& j, const std::string& key, double fallback, const std::string& ctx) {
    auto it = j.find(key);
    return it == j.end() ? fallback : number(*it, ctx + "." + key);
}

template <class F>
auto rethrow_as_input(const std::string& ctx, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const InputError&) {
        throw;
    } catch (const Error& e) {
        throw InputError(ctx + ": " + e.what());
    }
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

Json parse_json(const std::string& text, const std::string& origin) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        std::size_t line = 1, col = 1;
        for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
            if (text[k] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::ostringstream os;
        os << origin << ":" << line << ":" << col << ": malformed JSON (" << e.what() << ")";
        throw InputError(os.str());
    }
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json(ss.str(), path.string());
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw InputError("failed while writing '" + path.string() + "'");
}

WeightedDigraph graph_from_json(const Json& j) {
    const std::string ctx = "graph";
    int n = integer(need(j, "n", ctx), ctx + ".n");
    const Json& edges = need(j, "edges", ctx);
    if (!edges.is_array()) throw InputError(ctx + ".edges: expected an array");
    std::vector<Edge> list;
    for (std::size_t k = 0; k < edges.size(); ++k) {
        const std::string ectx = ctx + ".edges[" + std::to_string(k) + "]";
        const Json& e = edges[k];
        if (!e.is_array() || e.size() != 3) throw InputError(ectx + ": expected [target, source, weight]");
        list.push_back({integer(e[0], ectx + "[0]"), integer(e[1], ectx + "[1]"), number(e[2], ectx + "[2]")});
    }
    return rethrow_as_input(ctx, [&] { return WeightedDigraph::from_one_based(n, list); });
}

Json graph_to_json(const WeightedDigraph& g) {
    Json edges = Json::array();
    for (const auto& e : g.edges()) edges.push_back({e.target + 1, e.source + 1, e.weight});
    return Json{{"n", g.n()}, {"edges", edges}};
}

SwitchingSignal signal_from_json(const Json& j) {
    const std::string ctx = "schedule";
    double t_min = number(need(j, "t_min", ctx), ctx + ".t_min");
    double t_max = number(need(j, "t_max", ctx), ctx + ".t_max");
    double horizon = number(need(j, "horizon", ctx), ctx + ".horizon");
    const Json& sched = need(j, "schedule", ctx);
    if (!sched.is_array()) throw InputError(ctx + ".schedule: expected an array");
    std::vector<ScheduleEntry> entries;
    for (std::size_t k = 0; k < sched.size(); ++k) {
        const std::string ectx = ctx + ".schedule[" + std::to_string(k) + "]";
        const Json& e = sched[k];
        if (!e.is_array() || e.size() != 2) throw InputError(ectx + ": expected [t, graph_id]");
        int id = integer(e[1], ectx + "[1]");
        if (id < 1) throw InputError(ectx + ": graph ids are 1-based");
        entries.push_back({number(e[0], ectx + "[0]"), id - 1});
    }
    std::vector<double> marks;
    if (auto it = j.find("windows"); it != j.end()) {
        if (!it->is_array()) throw InputError(ctx + ".windows: expected an array");
        for (std::size_t k = 0; k < it->size(); ++k) marks.push_back(number((*it)[k], ctx + ".windows"));
    }
    return rethrow_as_input(ctx, [&] { return SwitchingSignal(entries, horizon, t_min, t_max, marks); });
}

Json signal_to_json(const SwitchingSignal& s) {
    Json sched = Json::array();
    for (const auto& e : s.schedule()) sched.push_back({e.t, e.graph + 1});
    Json out{{"t_min", s.t_min()}, {"t_max", s.t_max()}, {"horizon", s.horizon()}, {"schedule", sched}};
    if (!s.marks().empty()) out["windows"] = s.marks();
    return out;
}

Matrix matrix_from_json(const Json& j, const std::string& field) {
    if (!j.is_array() || j.empty()) throw InputError(field + ": expected a non-empty array of rows");
    const std::size_t rows = j.size();
    if (!j[0].is_array()) throw InputError(field + ": expected an array of rows");
    const std::size_t cols = j[0].size();
    Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols) throw InputError(field + ": rows have different lengths");
        for (std::size_t c = 0; c < cols; ++c)
            m(r, c) = number(j[r][c], field + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
    }
    return m;
}

Json matrix_to_json(const Matrix& m) {
    Json out = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        out.push_back(row);
    }
    return out;
}

Vector vector_from_json(const Json& j, const std::string& field) {
    if (!j.is_array()) throw InputError(field + ": expected an array");
    Vector v(j.size());
    for (std::size_t k = 0; k < j.size(); ++k) v(k) = number(j[k], field + "[" + std::to_string(k) + "]");
    return v;
}

Json vector_to_json(const Vector& v) {
    Json out = Json::array();
    for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(v(k));
    return out;
}

Scenario scenario_from_json(const Json& j) {
    const std::string ctx = "scenario";
    if (!j.is_object()) throw InputError(ctx + ": expected a JSON object");
    Scenario s;
    s.name = j.value("name", std::string("custom"));
    s.description = j.value("description", std::string());

    std::vector<WeightedDigraph> graphs;
    if (auto it = j.find("graphs"); it != j.end()) {
        if (!it->is_array() || it->empty()) throw InputError(ctx + ".graphs: expected a non-empty array");
        for (const auto& g : *it) graphs.push_back(graph_from_json(g));
    } else if (j.contains("edges")) {
        graphs.push_back(graph_from_json(j));
    } else {
        throw InputError(ctx + ": missing field 'graphs'");
    }

    SwitchingSignal sig;
    if (j.contains("schedule")) {
        sig = signal_from_json(j);
    } else {
        double horizon = number(need(j, "horizon", ctx), ctx + ".horizon");
        if (graphs.size() != 1) throw InputError(ctx + ": several graphs need a 'schedule'");
        sig = rethrow_as_input(ctx, [&] { return SwitchingSignal({{0.0, 0}}, horizon, horizon, horizon); });
    }
    if (sig.max_graph_index() >= static_cast<int>(graphs.size()))
        throw InputError(ctx + ".schedule: references graph " + std::to_string(sig.max_graph_index() + 1) +
                         " but only " + std::to_string(graphs.size()) + " graphs are defined");

    const Json& sys = need(j, "system", ctx);
    const std::string sctx = ctx + ".system";
    std::string type = sys.value("type", std::string("linear"));
    double phi = number(need(sys, "phi", sctx), sctx + ".phi");
    if (type == "linear") {
        LinearNetworkSystem lin;
        lin.A = matrix_from_json(need(sys, "A", sctx), sctx + ".A");
        lin.B = matrix_from_json(need(sys, "B", sctx), sctx + ".B");
        lin.K = matrix_from_json(need(sys, "K", sctx), sctx + ".K");
        lin.phi = phi;
        lin.graphs = graphs;
        lin.sig = sig;
        rethrow_as_input(sctx, [&] { lin.validate(); return 0; });
        s.system = std::move(lin);
    } else if (type == "nonlinear") {
        NonlinearNetworkSystem nl;
        s.dynamics = need(sys, "dynamics", sctx).get<std::string>();
        auto dyn = dynamics_by_name(s.dynamics);
        nl.f = dyn.f;
        nl.jac = dyn.jac;
        nl.Gamma = matrix_from_json(need(sys, "Gamma", sctx), sctx + ".Gamma");
        if (dyn.dim != 0 && nl.Gamma.rows() != dyn.dim)
            throw InputError(sctx + ": dynamics '" + s.dynamics + "' needs " + std::to_string(dyn.dim) + " states");
        nl.rho = number_or(sys, "rho", 1.0, sctx);
        nl.phi = phi;
        nl.graphs = graphs;
        nl.sig = sig;
        rethrow_as_input(sctx, [&] { nl.validate(); return 0; });
        s.system = std::move(nl);
    } else {
        throw InputError(sctx + ".type: expected 'linear' or 'nonlinear'");
    }

    const int n = s.agent_dim(), N = s.agents();
    if (auto it = j.find("x0"); it != j.end()) {
        if (it->is_array()) {
            Vector x0 = vector_from_json(*it, ctx + ".x0");
            if (x0.size() != static_cast<Eigen::Index>(n) * N)
                throw InputError(ctx + ".x0: expected " + std::to_string(n * N) + " entries");
            s.x0.explicit_x0 = x0;
        } else {
            const std::string xctx = ctx + ".x0";
            const Json& box = need(*it, "box", xctx);
            s.x0.box.lo = vector_from_json(need(box, "lo", xctx + ".box"), xctx + ".box.lo");
            s.x0.box.hi = vector_from_json(need(box, "hi", xctx + ".box"), xctx + ".box.hi");
            if (s.x0.box.lo.size() != n || s.x0.box.hi.size() != n)
                throw InputError(xctx + ".box: bounds must have one entry per agent state");
            if (auto sd = it->find("seed"); sd != it->end()) s.x0.seed = sd->get<std::uint64_t>();
        }
    } else {
        s.x0.box = Box::cube(n, -1.0, 1.0);
    }
    if (auto it = j.find("expected"); it != j.end())
        s.expected = rethrow_as_input(ctx, [&] { return parse_verdict(it->get<std::string>()); });
    s.dt = number_or(j, "dt", -1.0, ctx);
    s.horizon = number_or(j, "sim_horizon", -1.0, ctx);
    if (auto it = j.find("notes"); it != j.end() && it->is_array())
        for (const auto& note : *it) s.notes.push_back(note.get<std::string>());
    return s;
}

Json scenario_to_json(const Scenario& s) {
    Json graphs = Json::array();
    for (const auto& g : s.graphs()) graphs.push_back(graph_to_json(g));
    Json out = signal_to_json(s.signal());
    out["name"] = s.name;
    out["description"] = s.description;
    out["graphs"] = graphs;
    if (s.is_linear()) {
        const auto& lin = std::get<LinearNetworkSystem>(s.system);
        out["system"] = Json{{"type", "linear"},
                             {"A", matrix_to_json(lin.A)},
                             {"B", matrix_to_json(lin.B)},
                             {"K", matrix_to_json(lin.K)},
                             {"phi", lin.phi}};
    } else {
        const auto& nl = std::get<NonlinearNetworkSystem>(s.system);
        out["system"] = Json{{"type", "nonlinear"},
                             {"dynamics", s.dynamics},
                             {"Gamma", matrix_to_json(nl.Gamma)},
                             {"rho", nl.rho},
                             {"phi", nl.phi}};
    }
    if (s.x0.explicit_x0) {
        out["x0"] = vector_to_json(*s.x0.explicit_x0);
    } else {
        out["x0"] = Json{{"box", {{"lo", vector_to_json(s.x0.box.lo)}, {"hi", vector_to_json(s.x0.box.hi)}}},
                         {"seed", s.x0.seed}};
    }
    out["expected"] = to_string(s.expected);
    if (s.dt > 0) out["dt"] = s.dt;
    if (s.horizon > 0) out["sim_horizon"] = s.horizon;
    if (!s.notes.empty()) out["notes"] = s.notes;
    return out;
}

Json condition_report_to_json(const ConditionReport& r) {
    Json rows = Json::array();
    for (const auto& row : r.per_window)
        rows.push_back({{"window", row.window + 1},
                        {"subspace", row.subspace + 1},
                        {"lhs", row.lhs},
                        {"ln_gamma", row.threshold},
                        {"ok", row.ok}});
    Json graphs = Json::array();
    for (const auto& g : r.graphs)
        graphs.push_back({{"graph", g.graph + 1},
                          {"ran_dim", g.ran_dim},
                          {"h1_upsilon", g.h1.upsilon},
                          {"h1_xi", g.h1.xi},
                          {"h1_method", to_string(g.h1.method)},
                          {"basis_cond", g.basis_cond},
                          {"h2_upsilon", g.h2.upsilon},
                          {"h2_xi", g.h2.xi},
                          {"split_factor", g.split_factor},
                          {"hurwitz", g.hurwitz}});
    return Json{{"satisfied", r.satisfied},     {"gamma", r.gamma},           {"gamma_ceiling", r.gamma_ceiling},
                {"per_window", rows},           {"hbar_values", r.hbar_values}, {"graphs", graphs},
                {"diagnosis", r.diagnosis}};
}

std::string condition_report_table(const ConditionReport& r) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(4);
    os << "gamma = " << r.gamma << " (ceiling " << r.gamma_ceiling << "), ln gamma = " << std::log(r.gamma) << "\n";
    os << "graph  ran_dim  h1_xi     h1_ups    h2_xi     h2_ups    split\n";
    for (const auto& g : r.graphs)
        os << std::setw(5) << g.graph + 1 << "  " << std::setw(7) << g.ran_dim << "  " << std::setw(8) << g.h1.xi << "  "
           << std::setw(8) << g.h1.upsilon * g.basis_cond << "  " << std::setw(8) << g.h2.xi << "  " << std::setw(8)
           << g.h2.upsilon << "  " << std::setw(6) << g.split_factor << "\n";
    os << "window  subspace  lhs         ln_gamma    ok\n";
    for (const auto& row : r.per_window)
        os << std::setw(6) << row.window + 1 << "  " << std::setw(8) << row.subspace + 1 << "  " << std::setw(10)
           << row.lhs << "  " << std::setw(10) << row.threshold << "  " << (row.ok ? "yes" : "no") << "\n";
    for (const auto& d : r.diagnosis) os << "! " << d << "\n";
    os << "satisfied: " << (r.satisfied ? "true" : "false") << "\n";
    return os.str();
}

std::string trajectory_csv(const Trajectory& traj, const std::vector<WeightedDigraph>& graphs,
                           const SwitchingSignal& sig) {
    const int n = traj.n;
    const int N = traj.states.empty() ? 0 : static_cast<int>(traj.states.front().size() / n);
    std::vector<Matrix> projectors;
    for (const auto& g : graphs)
        projectors.push_back(kron(delta_projector(laplacian(g), reach_decomposition(g)), Matrix::Identity(n, n)));

    std::ostringstream os;
    os << "t";
    for (int i = 1; i <= N; ++i)
        for (int k = 1; k <= n; ++k) os << ",x_" << i << "_" << k;
    os << ",e_norm,delta_norm,pairwise_dev\n";
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        const Vector& x = traj.states[s];
        os << format_double(traj.times[s]);
        for (Eigen::Index k = 0; k < x.size(); ++k) os << ',' << format_double(x(k));
        // samples on a switch boundary belong to the dwell that just ended
        double t = traj.times[s];
        int g = sig.graph_at(s == 0 ? t : std::nextafter(t, -1.0));
        os << ',' << format_double(sync_error(x, n).norm()) << ',' << format_double((projectors.at(g) * x).norm())
           << ',' << format_double(pairwise_deviation(x, n)) << '\n';
    }
    return os.str();
}

std::string switch_events_csv(const Trajectory& traj) {
    std::ostringstream os;
    os << "t,graph_id\n";
    for (const auto& e : traj.switch_events) os << format_double(e.t) << ',' << e.graph + 1 << '\n';
    return os.str();
}

}  // namespace syncnet
