#include "syncnet/scenarios.hpp"

#include "syncnet/errors.hpp"
#include "syncnet/linalg.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace syncnet {

namespace examples {

WeightedDigraph example1_a() { return WeightedDigraph::from_one_based(4, {{2, 1, 1.0}}); }
WeightedDigraph example1_b() { return WeightedDigraph::from_one_based(4, {{3, 1, 1.0}, {4, 3, 1.0}}); }
WeightedDigraph example3_a() { return WeightedDigraph::from_one_based(4, {{2, 1, 1.0}, {4, 1, 1.0}}); }
WeightedDigraph example3_b() { return WeightedDigraph::from_one_based(4, {{3, 1, 1.0}, {4, 3, 1.0}}); }
WeightedDigraph example4() { return WeightedDigraph::from_one_based(3, {{3, 1, 1.0}, {3, 2, 1.0}}); }
WeightedDigraph example5_a() { return WeightedDigraph::from_one_based(4, {{2, 1, 1.2}, {4, 2, 0.7}}); }
WeightedDigraph example5_b() { return WeightedDigraph::from_one_based(4, {{3, 1, 0.5}, {4, 3, 1.3}}); }

Matrix example5_A() {
    Matrix a(3, 3);
    a << 0, 1, 0, 1, 0, 0, 0, 0, -2;
    return a;
}
Matrix example5_B() {
    Matrix b(3, 2);
    b << 1, 0, 0, 1, 0, 0;
    return b;
}
Matrix example5_K() {
    Matrix k(2, 3);
    k << 1, 0, 0, 0, 1, 0;
    return k;
}
Matrix counterexample_A() {
    Matrix a(3, 3);
    a << -1, 1, 0, 1, -1, 0, 0, 0, -2;
    return a;
}
Matrix counterexample_B() {
    Matrix b(3, 2);
    b << 1, 0, 0, 0, 0, 0;
    return b;
}
Matrix counterexample_K() {
    Matrix k(2, 3);
    k << 1, 1, 0, 0, 1, 0;
    return k;
}
Matrix example7_Gamma() {
    Matrix g = Matrix::Zero(2, 2);
    g(0, 0) = 0.5;
    g(1, 1) = 0.9;
    return g;
}

}  // namespace examples

namespace {

Matrix scalar(double v) { return Matrix::Constant(1, 1, v); }

Scenario integrator_scenario(const std::string& name, std::vector<WeightedDigraph> graphs, SwitchingSignal sig,
                             Verdict expected) {
    Scenario s;
    s.name = name;
    LinearNetworkSystem sys{scalar(0.0), scalar(1.0), scalar(1.0), 1.0, std::move(graphs), std::move(sig)};
    s.system = std::move(sys);
    s.expected = expected;
    s.x0.box = Box::cube(1, 0.0, 50.0);
    return s;
}

std::vector<WeightedDigraph> draw_collection(std::mt19937_64& rng, int n_nodes, int n_graphs) {
    std::bernoulli_distribution edge(0.3);
    std::uniform_real_distribution<double> weight(0.5, 2.0);
    std::vector<WeightedDigraph> out;
    for (int g = 0; g < n_graphs; ++g) {
        std::vector<Edge> edges;
        for (int i = 0; i < n_nodes; ++i)
            for (int j = 0; j < n_nodes; ++j) {
                if (i == j) continue;
                if (edge(rng)) edges.push_back({i, j, weight(rng)});
            }
        out.emplace_back(n_nodes, std::move(edges));
    }
    return out;
}

}  // namespace

std::string to_string(Verdict v) { return v == Verdict::Sync ? "sync" : "no-sync"; }

Verdict parse_verdict(const std::string& s) {
    if (s == "sync") return Verdict::Sync;
    if (s == "no-sync") return Verdict::NoSync;
    throw InputError("unknown verdict '" + s + "' (expected sync or no-sync)");
}

Vector InitialSpec::draw(int N, std::optional<std::uint64_t> seed_override) const {
    if (explicit_x0) return *explicit_x0;
    std::mt19937_64 rng(seed_override ? *seed_override : seed);
    return sample_stacked(box, N, rng);
}

const std::vector<WeightedDigraph>& Scenario::graphs() const {
    return std::visit([](const auto& s) -> const std::vector<WeightedDigraph>& { return s.graphs; }, system);
}

const SwitchingSignal& Scenario::signal() const {
    return std::visit([](const auto& s) -> const SwitchingSignal& { return s.sig; }, system);
}

int Scenario::agent_dim() const {
    return std::visit([](const auto& s) { return s.agent_dim(); }, system);
}

int Scenario::agents() const {
    return std::visit([](const auto& s) { return s.agents(); }, system);
}

double Scenario::phi() const {
    return std::visit([](const auto& s) { return s.phi; }, system);
}

void Scenario::set_phi(double phi) {
    if (!(phi > 0.0)) throw ParameterError("coupling strength phi must be positive");
    std::visit([phi](auto& s) { s.phi = phi; }, system);
}

void Scenario::set_signal(SwitchingSignal sig) {
    std::visit([&sig](auto& s) { s.sig = sig; }, system);
}

std::vector<std::string> preset_names() {
    return {"example1",        "example3", "example4", "example5-positive", "example5-counterexample",
            "example7-vanderpol", "two-agent-integrator"};
}

Scenario preset(const std::string& name) {
    if (name == "example1" || name == "example3") {
        bool one = name == "example1";
        std::vector<WeightedDigraph> gs = one ? std::vector{examples::example1_a(), examples::example1_b()}
                                              : std::vector{examples::example3_a(), examples::example3_b()};
        Scenario s = integrator_scenario(name, std::move(gs), SwitchingSignal::periodic({0, 1}, 1.0, 20.0), Verdict::Sync);
        s.description = one ? "Scalar integrators over the two 4-node graphs whose kernels meet in span{1}"
                            : "Scalar integrators over the two 4-node graphs of the refinement example";
        s.horizon = 20.0;
        return s;
    }
    if (name == "example4") {
        Scenario s = integrator_scenario(name, {examples::example4()}, SwitchingSignal({{0.0, 0}}, 20.0, 20.0, 20.0),
                                         Verdict::NoSync);
        s.description = "Single 3-node graph with two reaches sharing node 3; the two roots never agree";
        s.horizon = 20.0;
        s.dt = 0.02;
        return s;
    }
    if (name == "example5-positive" || name == "example5-counterexample") {
        bool positive = name == "example5-positive";
        Scenario s;
        s.name = name;
        double horizon = positive ? 30.0 : 50.0;
        LinearNetworkSystem sys;
        sys.A = positive ? examples::example5_A() : examples::counterexample_A();
        sys.B = positive ? examples::example5_B() : examples::counterexample_B();
        sys.K = positive ? examples::example5_K() : examples::counterexample_K();
        sys.phi = positive ? 5.0 : 50.0;
        sys.graphs = {examples::example5_a(), examples::example5_b()};
        sys.sig = SwitchingSignal::periodic({0, 1}, 1.0, horizon);
        s.system = std::move(sys);
        s.x0.box = Box::cube(3, 0.0, 50.0);
        s.horizon = horizon;
        s.expected = positive ? Verdict::Sync : Verdict::NoSync;
        s.description = positive ? "Partial-state coupled 3-state agents, 1 s alternation of the two 4-node graphs"
                                 : "Marginally stable agents with the alternative B, K; expected not to synchronize";
        if (!positive)
            s.notes.push_back("uses the same 4-node graph pair as example5-positive");
        return s;
    }
    if (name == "example7-vanderpol") {
        Scenario s;
        s.name = name;
        NonlinearNetworkSystem sys;
        auto dyn = dynamics_by_name("vanderpol");
        sys.f = dyn.f;
        sys.jac = dyn.jac;
        sys.Gamma = examples::example7_Gamma();
        sys.phi = 5.0;
        sys.graphs = {examples::example5_a(), examples::example5_b()};
        sys.sig = SwitchingSignal::periodic({0, 1}, 0.5, 50.0);
        const double edge = 50.0;
        Vector corner(2);
        corner << edge, 0.0;
        sys.rho = norm2(dyn.jac(0.0, corner));
        s.system = std::move(sys);
        s.dynamics = "vanderpol";
        s.x0.box = Box::cube(2, -edge, edge);
        s.dt = 5e-4;
        s.horizon = 50.0;
        s.expected = Verdict::Sync;
        s.description = "Driven damped Van der Pol oscillators, 0.5 s periodic switching of the 4-node graphs";
        s.notes.push_back("topology is the 4-node graph pair of example5-positive");
        s.notes.push_back("agents are 2-dimensional, so initial states are drawn from [-50, 50]^2");
        return s;
    }
    if (name == "two-agent-integrator") {
        WeightedDigraph g(2, {{0, 1, 1.0}, {1, 0, 1.0}});
        Scenario s = integrator_scenario(name, {g}, SwitchingSignal({{0.0, 0}}, 5.0, 5.0, 5.0), Verdict::Sync);
        Vector x0(2);
        x0 << 1.0, -1.0;
        s.x0.explicit_x0 = x0;
        s.dt = 0.01;
        s.horizon = 5.0;
        s.expected_rate = -2.0;
        s.description = "Two scalar integrators on a symmetric unit-weight edge; e(t) = e(0) exp(-2 phi t)";
        return s;
    }
    std::ostringstream os;
    os << "unknown preset '" << name << "'; valid presets:";
    for (const auto& n : preset_names()) os << ' ' << n;
    throw InputError(os.str());
}

std::vector<WeightedDigraph> random_graphs(std::uint64_t seed, int n_nodes, int n_graphs, bool require_joint_tree) {
    if (n_nodes < 2) throw ParameterError("random_instance needs at least two nodes");
    if (n_graphs < 1) throw ParameterError("random_instance needs at least one graph");
    std::mt19937_64 rng(seed);
    constexpr int kMaxDraws = 100000;
    for (int draw = 0; draw < kMaxDraws; ++draw) {
        auto gs = draw_collection(rng, n_nodes, n_graphs);
        if (!require_joint_tree || has_directed_spanning_tree(union_graph(gs))) return gs;
    }
    throw GenerationError("no jointly connected collection found within 1e5 draws");
}

Scenario random_instance(std::uint64_t seed, int n_nodes, int n_graphs, bool require_joint_tree) {
    auto gs = random_graphs(seed, n_nodes, n_graphs, require_joint_tree);
    std::vector<int> ids;
    for (int g = 0; g < n_graphs; ++g) ids.push_back(g);
    bool joint = has_directed_spanning_tree(union_graph(gs));
    Scenario s = integrator_scenario("random-" + std::to_string(seed), std::move(gs),
                                     SwitchingSignal::periodic(ids, 1.0, 10.0 * n_graphs),
                                     joint ? Verdict::Sync : Verdict::NoSync);
    s.x0.box = Box::cube(1, 0.0, 1.0);
    s.x0.seed = seed;
    s.horizon = 10.0 * n_graphs;
    s.description = "random instance";
    return s;
}

NamedDynamics dynamics_by_name(const std::string& name) {
    if (name == "vanderpol") {
        NamedDynamics d;
        d.dim = 2;
        d.f = [](double t, const Vector& x) {
            Vector out(2);
            out << x(1) - x(0) * x(0) * x(0) / 3.0 - x(0), -x(0) + std::sin(t);
            return out;
        };
        d.jac = [](double, const Vector& x) {
            Matrix j(2, 2);
            j << -x(0) * x(0) - 1.0, 1.0, -1.0, 0.0;
            return j;
        };
        return d;
    }
    if (name == "doubling") {
        return {[](double, const Vector& x) { return Vector(2.0 * x); },
                [](double, const Vector& x) { return Matrix(2.0 * Matrix::Identity(x.size(), x.size())); }, 0};
    }
    if (name == "zero") {
        return {[](double, const Vector& x) { return Vector(Vector::Zero(x.size())); },
                [](double, const Vector& x) { return Matrix(Matrix::Zero(x.size(), x.size())); }, 0};
    }
    std::ostringstream os;
    os << "unknown dynamics '" << name << "'; valid names:";
    for (const auto& n : dynamics_names()) os << ' ' << n;
    throw InputError(os.str());
}

std::vector<std::string> dynamics_names() { return {"vanderpol", "doubling", "zero"}; }

Verdict judge(const Trajectory& traj) {
    if (traj.states.empty()) throw ParameterError("cannot judge an empty trajectory");
    double d0 = pairwise_deviation(traj.states.front(), traj.n);
    double d1 = pairwise_deviation(traj.states.back(), traj.n);
    return d1 <= 1e-3 * std::max(1.0, d0) ? Verdict::Sync : Verdict::NoSync;
}

}  // namespace syncnet
