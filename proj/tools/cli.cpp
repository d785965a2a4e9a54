#include "cli.hpp"

#include "syncnet/conditions.hpp"
#include "syncnet/errors.hpp"
#include "syncnet/io.hpp"
#include "syncnet/linalg.hpp"
#include "syncnet/scenarios.hpp"
#include "syncnet/svg.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

namespace syncnet::cli {

namespace {

namespace fs = std::filesystem;

constexpr std::size_t kMaxCsvRows = 4000;

std::optional<std::uint64_t> resolve_seed(const RunConfig& cfg) {
    if (cfg.seed) return cfg.seed;
    const char* env = std::getenv("SYNCNET_SEED");
    if (!env || !*env) return std::nullopt;
    try {
        std::size_t used = 0;
        unsigned long long v = std::stoull(env, &used);
        if (used != std::string(env).size()) throw std::invalid_argument(env);
        return static_cast<std::uint64_t>(v);
    } catch (const std::exception&) {
        throw InputError(std::string("SYNCNET_SEED is not an unsigned integer: '") + env + "'");
    }
}

void check_overrides(const RunConfig& cfg) {
    auto positive = [](const std::optional<double>& v, const char* name) {
        if (v && !(*v > 0.0 && std::isfinite(*v))) throw InputError(std::string("--") + name + " must be positive");
    };
    positive(cfg.dt, "dt");
    positive(cfg.horizon, "horizon");
    positive(cfg.phi, "phi");
    positive(cfg.gamma, "gamma");
    if (cfg.jobs < 1) throw InputError("--jobs must be at least 1");
    for (double p : cfg.phis)
        if (!(p > 0.0 && std::isfinite(p))) throw InputError("sweep grid values must be positive");
    if (cfg.config && !fs::exists(*cfg.config)) throw InputError("config file '" + cfg.config->string() + "' does not exist");
}

void prepare_out(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw InputError("cannot create output directory '" + dir.string() + "'");
}

Scenario load_scenario(const RunConfig& cfg) {
    Scenario s;
    if (cfg.config) {
        s = scenario_from_json(read_json_file(*cfg.config));
    } else if (!cfg.target.empty()) {
        s = preset(cfg.target);
    } else {
        throw InputError(cfg.command + " needs --config PATH or a preset name (" + [] {
            std::string names;
            for (const auto& n : preset_names()) names += (names.empty() ? "" : ", ") + n;
            return names;
        }() + ")");
    }
    if (cfg.phi) s.set_phi(*cfg.phi);
    return s;
}

std::string fixed(double v, int prec = 6) {
    std::ostringstream os;
    os << std::setprecision(prec) << v;
    return os.str();
}

Json one_based(const std::vector<int>& nodes) {
    Json out = Json::array();
    for (int v : nodes) out.push_back(v + 1);
    return out;
}

// ---- analyze-graph ----

Json analyze_one(const WeightedDigraph& g, int id, std::ostream& log) {
    Matrix L = laplacian(g);
    auto rd = reach_decomposition(g);
    auto es = eigenstructure(L);
    auto kb = kernel_basis_by_reaches(L, rd);
    auto sccs = strongly_connected_components(g);

    Json reaches = Json::array();
    for (std::size_t r = 0; r < rd.reaches.size(); ++r)
        reaches.push_back({{"nodes", one_based(rd.reaches[r])},
                           {"exclusive", one_based(rd.exclusive[r])},
                           {"common", one_based(rd.common[r])},
                           {"root", one_based(rd.roots[r])}});
    Json eig = Json::array();
    for (Eigen::Index k = 0; k < es.eigenvalues.size(); ++k)
        eig.push_back({es.eigenvalues(k).real(), es.eigenvalues(k).imag()});
    Json kernel = Json::array();
    for (const auto& v : kb.vectors) kernel.push_back(vector_to_json(v));
    Json comps = Json::array();
    for (const auto& c : sccs) {
        auto sorted = c;
        std::sort(sorted.begin(), sorted.end());
        comps.push_back(one_based(sorted));
    }

    log << "graph " << id << ": n = " << g.n() << ", edges = " << g.edges().size()
        << ", spanning tree = " << (has_directed_spanning_tree(g) ? "yes" : "no") << "\n";
    log << "  reaches " << rd.reaches.size() << ", zero eigenvalue alg/geo = " << es.zero_alg_mult << "/"
        << es.zero_geo_mult << "\n";
    for (std::size_t r = 0; r < rd.reaches.size(); ++r) {
        log << "  R" << r + 1 << " = {";
        for (std::size_t k = 0; k < rd.reaches[r].size(); ++k) log << (k ? "," : "") << rd.reaches[r][k] + 1;
        log << "}  gamma = [";
        for (Eigen::Index k = 0; k < kb.vectors[r].size(); ++k) log << (k ? ", " : "") << fixed(kb.vectors[r](k), 4);
        log << "]\n";
    }
    log << "  spectrum:";
    for (Eigen::Index k = 0; k < es.eigenvalues.size(); ++k) {
        auto z = es.eigenvalues(k);
        log << " " << fixed(z.real(), 4);
        if (std::abs(z.imag()) > 1e-12) log << (z.imag() > 0 ? "+" : "-") << fixed(std::abs(z.imag()), 4) << "i";
    }
    log << "\n";

    return Json{{"graph", id},
                {"n", g.n()},
                {"edges", graph_to_json(g)["edges"]},
                {"has_spanning_tree", has_directed_spanning_tree(g)},
                {"sccs", comps},
                {"reaches", reaches},
                {"chi", rd.chi},
                {"zero_alg_mult", es.zero_alg_mult},
                {"zero_geo_mult", es.zero_geo_mult},
                {"semisimple", es.zero_alg_mult == es.zero_geo_mult},
                {"eigenvalues", eig},
                {"kernel_basis", kernel}};
}

int cmd_analyze(const RunConfig& cfg, std::ostream& log) {
    std::vector<WeightedDigraph> gs;
    if (cfg.config) {
        Json j = read_json_file(*cfg.config);
        if (j.is_object() && j.contains("graphs")) {
            if (!j["graphs"].is_array() || j["graphs"].empty()) throw InputError("graphs: expected a non-empty array");
            for (const auto& g : j["graphs"]) gs.push_back(graph_from_json(g));
        } else {
            gs.push_back(graph_from_json(j));
        }
    } else {
        gs = load_scenario(cfg).graphs();
    }
    for (const auto& g : gs)
        if (g.n() != gs.front().n()) throw InputError("graphs have different node counts");

    prepare_out(cfg.out);
    Json report = Json::array();
    for (std::size_t k = 0; k < gs.size(); ++k) report.push_back(analyze_one(gs[k], static_cast<int>(k) + 1, log));
    auto U = union_graph(gs);
    const int N = gs.front().n();
    Matrix stacked(0, N - 1);
    for (const auto& g : gs) {
        Matrix r = reduced_laplacian(laplacian(g));
        Matrix grown(stacked.rows() + r.rows(), N - 1);
        grown << stacked, r;
        stacked = grown;
    }
    int stacked_rank = N > 1 ? rank(stacked) : 0;
    Json out{{"graphs", report},
             {"union", {{"has_spanning_tree", has_directed_spanning_tree(U)}, {"stacked_reduced_rank", stacked_rank}}}};
    log << "union: spanning tree = " << (has_directed_spanning_tree(U) ? "yes" : "no")
        << ", stacked reduced Laplacian rank = " << stacked_rank << " of " << N - 1 << "\n";
    write_text_file(cfg.out / "analysis.json", out.dump(2) + "\n");
    return kOk;
}

// ---- check-condition ----

int cmd_check(const RunConfig& cfg, std::ostream& log) {
    Scenario s = load_scenario(cfg);
    if (!s.is_linear()) throw InputError("check-condition applies to linear systems (system.type = linear)");
    const auto& sys = std::get<LinearNetworkSystem>(s.system);
    auto report = theorem1_check(sys.A, sys.B, sys.K, sys.phi, sys.sig, sys.graphs, cfg.gamma);
    prepare_out(cfg.out);
    write_text_file(cfg.out / "condition.json", condition_report_to_json(report).dump(2) + "\n");
    log << condition_report_table(report);
    return report.satisfied ? kOk : kUnsatisfied;
}

// ---- simulate / reproduce ----

struct RunOutcome {
    Trajectory traj;
    bool diverged = false;
    std::string divergence;
    double dt = 0.0;
    double horizon = 0.0;
};

RunOutcome simulate_scenario(const Scenario& s, const Vector& x0, std::optional<double> dt_override,
                             std::optional<double> horizon_override, bool thin) {
    RunOutcome r;
    r.dt = dt_override ? *dt_override : (s.dt > 0 ? s.dt : s.signal().t_min() / 50.0);
    r.horizon = horizon_override ? *horizon_override : (s.horizon > 0 ? s.horizon : s.signal().horizon());
    int every = 1;
    if (thin) {
        double steps = r.horizon / r.dt;
        every = std::max(1, static_cast<int>(std::ceil(steps / static_cast<double>(kMaxCsvRows))));
    }
    try {
        r.traj = std::visit([&](const auto& sys) { return integrate(sys, x0, r.dt, r.horizon, every); }, s.system);
    } catch (const DivergenceError& e) {
        r.traj = e.partial();
        r.diverged = true;
        r.divergence = e.what();
    }
    return r;
}

std::string trajectory_svg(const Trajectory& traj, const std::string& title) {
    SvgSeries e{"e_norm", traj.times, metric_series(traj, Metric::SyncError)};
    SvgSeries p{"pairwise_dev", traj.times, metric_series(traj, Metric::Pairwise)};
    std::vector<double> marks;
    for (const auto& ev : traj.switch_events) marks.push_back(ev.t);
    return render_svg({e, p}, marks, title);
}

double safe_rate(const Trajectory& traj) {
    try {
        return convergence_rate(traj, Metric::Pairwise);
    } catch (const ParameterError&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

int cmd_simulate(const RunConfig& cfg, std::ostream& log, bool reproduce) {
    Scenario s = load_scenario(cfg);
    auto seed = resolve_seed(cfg);
    Vector x0 = s.x0.draw(s.agents(), seed);
    prepare_out(cfg.out);
    RunOutcome r = simulate_scenario(s, x0, cfg.dt, cfg.horizon, true);
    const auto& traj = r.traj;

    write_text_file(cfg.out / "trajectory.csv", trajectory_csv(traj, s.graphs(), s.signal()));
    write_text_file(cfg.out / "switch_events.csv", switch_events_csv(traj));
    write_text_file(cfg.out / "scenario.json", scenario_to_json(s).dump(2) + "\n");
    write_text_file(cfg.out / "trajectory.svg", trajectory_svg(traj, s.name));

    const double dev0 = pairwise_deviation(traj.states.front(), traj.n);
    const double dev1 = pairwise_deviation(traj.states.back(), traj.n);
    const double rate = safe_rate(traj);
    Verdict verdict = r.diverged ? Verdict::NoSync : judge(traj);
    Json summary{{"scenario", s.name},
                 {"seed", seed ? Json(*seed) : Json(s.x0.explicit_x0 ? Json(nullptr) : Json(s.x0.seed))},
                 {"phi", s.phi()},
                 {"dt", r.dt},
                 {"horizon", r.horizon},
                 {"t_end", traj.times.back()},
                 {"initial_pairwise_dev", dev0},
                 {"final_pairwise_dev", dev1},
                 {"final_e_norm", sync_error(traj.states.back(), traj.n).norm()},
                 {"rate", number_or_null(rate)},
                 {"verdict", to_string(verdict)},
                 {"diverged", r.diverged}};
    if (reproduce) summary["expected"] = to_string(s.expected);
    if (r.diverged) summary["divergence"] = r.divergence;
    if (!s.notes.empty()) summary["notes"] = s.notes;
    write_text_file(cfg.out / "summary.json", summary.dump(2) + "\n");

    log << s.name << ": t_end = " << fixed(traj.times.back()) << ", pairwise deviation " << fixed(dev0) << " -> "
        << fixed(dev1) << ", rate " << fixed(rate) << "/s, verdict " << to_string(verdict);
    if (reproduce) log << " (expected " << to_string(s.expected) << ")";
    log << "\n";
    if (r.diverged) {
        log << "diverged: " << r.divergence << "\n";
        return kDiverged;
    }
    if (reproduce && verdict != s.expected) return kUnsatisfied;
    return kOk;
}

// ---- sweep ----

int cmd_sweep(const RunConfig& cfg, std::ostream& log) {
    Scenario base = load_scenario(cfg);
    auto seed = resolve_seed(cfg);
    Vector x0 = base.x0.draw(base.agents(), seed);
    std::vector<double> grid = cfg.phis;
    if (grid.empty()) grid = {0.5, 1.0, 2.0, 5.0, 10.0};
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    prepare_out(cfg.out);

    struct Row {
        double rate = 0.0, final_dev = 0.0, t_end = 0.0;
        bool diverged = false;
        std::string error;
    };
    std::vector<Row> rows(grid.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < grid.size(); k = next++) {
            Row& row = rows[k];
            try {
                Scenario s = base;
                s.set_phi(grid[k]);
                RunOutcome r = simulate_scenario(s, x0, cfg.dt, cfg.horizon, false);
                row.rate = safe_rate(r.traj);
                row.final_dev = pairwise_deviation(r.traj.states.back(), r.traj.n);
                row.t_end = r.traj.times.back();
                row.diverged = r.diverged;
            } catch (const std::exception& e) {
                row.error = e.what();
            }
        }
    };
    const int jobs = std::min<int>(cfg.jobs, static_cast<int>(grid.size()));
    std::vector<std::thread> pool;
    for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    for (std::size_t k = 0; k < grid.size(); ++k)
        if (!rows[k].error.empty()) throw InputError("sweep at phi = " + format_double(grid[k]) + ": " + rows[k].error);

    std::ostringstream csv;
    csv << "phi,rate,final_pairwise_dev,t_end,diverged\n";
    log << "phi         rate          final_dev     diverged\n";
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const Row& row = rows[k];
        csv << format_double(grid[k]) << ',' << (std::isnan(row.rate) ? std::string() : format_double(row.rate))
            << ',' << format_double(row.final_dev) << ',' << format_double(row.t_end) << ','
            << (row.diverged ? 1 : 0) << '\n';
        log << std::left << std::setw(12) << fixed(grid[k]) << std::setw(14) << fixed(row.rate) << std::setw(14)
            << fixed(row.final_dev) << (row.diverged ? "yes" : "no") << "\n";
    }
    write_text_file(cfg.out / "sweep.csv", csv.str());
    return kOk;
}

}  // namespace

std::vector<std::string> command_names() {
    return {"analyze-graph", "check-condition", "simulate", "reproduce", "sweep"};
}

int run(const RunConfig& cfg, std::ostream& log, std::ostream& err) {
    try {
        check_overrides(cfg);
        if (cfg.command == "analyze-graph") return cmd_analyze(cfg, log);
        if (cfg.command == "check-condition") return cmd_check(cfg, log);
        if (cfg.command == "simulate") return cmd_simulate(cfg, log, false);
        if (cfg.command == "reproduce") {
            if (cfg.target.empty() && !cfg.config) throw InputError("reproduce needs a preset name or --config");
            return cmd_simulate(cfg, log, true);
        }
        if (cfg.command == "sweep") return cmd_sweep(cfg, log);
        throw InputError("unknown command '" + cfg.command + "'");
    } catch (const DivergenceError& e) {
        err << "error: " << e.what() << "\n";
        return kDiverged;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }
}

}  // namespace syncnet::cli
