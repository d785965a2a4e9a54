#include "oracles.hpp"

#include "syncnet/conditions.hpp"
#include "syncnet/errors.hpp"
#include "syncnet/linalg.hpp"
#include "syncnet/scenarios.hpp"
#include "syncnet/simulate.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace syncnet;
using Catch::Matchers::WithinAbs;

namespace {

Matrix scalar(double v) { return Matrix::Constant(1, 1, v); }

LinearNetworkSystem two_agents(double phi = 1.0, double horizon = 5.0) {
    WeightedDigraph g(2, {{0, 1, 1.0}, {1, 0, 1.0}});
    return {scalar(0), scalar(1), scalar(1), phi, {g}, SwitchingSignal({{0.0, 0}}, horizon, horizon, horizon)};
}

std::size_t index_at(const Trajectory& tr, double t) {
    for (std::size_t k = 0; k < tr.times.size(); ++k)
        if (std::abs(tr.times[k] - t) < 1e-9) return k;
    FAIL("no sample at t = " << t);
    return 0;
}

}  // namespace

TEST_CASE("two scalar integrators decay at rate 2 phi", "[simulate]") {
    auto sys = two_agents();
    Vector x0(2);
    x0 << 1.0, -1.0;
    auto tr = integrate(sys, x0, 0.01);
    double e1 = sync_error(tr.states[index_at(tr, 1.0)], 1).norm();
    CHECK_THAT(e1, WithinAbs(2.0 * std::exp(-2.0), 1e-6));
    CHECK_THAT(convergence_rate(tr, Metric::SyncError), WithinAbs(-2.0, 0.05));
    CHECK_THAT(convergence_rate(tr, Metric::Pairwise), WithinAbs(-2.0, 0.05));
}

TEST_CASE("states on the synchronization manifold stay there", "[simulate]") {
    auto s = preset("example5-positive");
    auto sys = std::get<LinearNetworkSystem>(s.system);
    Vector u(3);
    u << 0.3, -0.2, 0.1;
    Vector x0 = kron(Vector::Ones(4), u);
    auto tr = integrate(sys, x0, 0.02, 5.0);
    for (const auto& x : tr.states) CHECK(sync_error(x, 3).norm() <= 1e-9 * std::max(1.0, x.norm()));
}

TEST_CASE("integrator argument checks", "[simulate]") {
    auto sys = two_agents();
    CHECK_THROWS_AS(integrate(sys, Vector::Ones(3)), DimensionError);
    CHECK_THROWS_AS(integrate(sys, Vector::Ones(2), 1.0), ParameterError);
    Vector bad = Vector::Ones(2);
    bad(0) = std::nan("");
    CHECK_THROWS_AS(integrate(sys, bad), ValidationError);
    sys.phi = 0.0;
    CHECK_THROWS_AS(integrate(sys, Vector::Ones(2)), ParameterError);
}

TEST_CASE("divergence carries the partial trajectory", "[simulate]") {
    WeightedDigraph g(2, {{0, 1, 1.0}});
    LinearNetworkSystem sys{scalar(3.0), scalar(1), scalar(1), 1.0, {g}, SwitchingSignal({{0.0, 0}}, 20.0, 20.0, 20.0)};
    try {
        integrate(sys, Vector::Ones(2), 0.01);
        FAIL("expected divergence");
    } catch (const DivergenceError& e) {
        CHECK(e.partial().states.back().norm() > kDivergenceNorm);
        CHECK(e.partial().times.back() < 20.0);
        CHECK(e.partial().times.back() > 8.0);
    }
}

TEST_CASE("switch events and step alignment", "[simulate]") {
    auto s = preset("example1");
    auto sys = std::get<LinearNetworkSystem>(s.system);
    auto tr = integrate(sys, s.x0.draw(4), 0.03, 3.0);
    REQUIRE(tr.switch_events.size() == 3);
    CHECK(tr.switch_events[1].t == 1.0);
    CHECK(tr.switch_events[1].graph == 1);
    index_at(tr, 1.0);
    index_at(tr, 2.0);
    CHECK(tr.times.back() == 3.0);
}

TEST_CASE("error signals", "[simulate]") {
    Vector x(2);
    x << 3.0, 1.0;
    CHECK(sync_error(x, 1)(0) == 2.0);
    CHECK(pairwise_deviation(x, 1) == 2.0);
    CHECK(pairwise_deviation(Vector::Constant(6, 4.0), 2) == 0.0);
    CHECK(sync_error(Vector::Constant(6, 4.0), 2).norm() == 0.0);

    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 50; ++trial) {
        Vector y = oracle::random_vector(rng, 12);
        CHECK_THAT(pairwise_deviation(y, 3), WithinAbs(oracle::pairwise(y, 3), 1e-12));
        Vector e = sync_error(y, 3);
        for (int j = 1; j < 4; ++j)
            for (int k = 0; k < 3; ++k) CHECK(e((j - 1) * 3 + k) == y(k) - y(j * 3 + k));
    }
    CHECK_THROWS_AS(sync_error(Vector::Ones(5), 2), DimensionError);
}

TEST_CASE("delta error", "[simulate]") {
    auto g = examples::example4();
    Matrix L = laplacian(g);
    auto rd = reach_decomposition(g);
    Vector x(3);
    x << 2.0, -4.0, 7.0;
    Vector d = delta_error(x, L, rd, 1);
    CHECK_THAT(d(0), WithinAbs(0.0, 1e-12));
    CHECK_THAT(d(1), WithinAbs(0.0, 1e-12));
    CHECK_THAT(d(2), WithinAbs(7.0 - 0.5 * 2.0 - 0.5 * -4.0, 1e-12));
    CHECK(delta_error(Vector::Constant(3, 1.5), L, rd, 1).norm() < 1e-12);

    std::mt19937_64 rng(67);
    for (int trial = 0; trial < 50; ++trial) {
        auto r = oracle::random_graph(rng, 5);
        Matrix Lr = laplacian(r);
        Vector y = oracle::random_vector(rng, 10);
        Vector dy = delta_error(y, Lr, reach_decomposition(r), 2);
        CHECK((dy - kron(oracle::delta_matrix(r), Matrix::Identity(2, 2)) * y).norm() < 1e-9);
    }
}

TEST_CASE("linearized delta step", "[simulate]") {
    auto g = examples::example5_a();
    Matrix L = laplacian(g);
    Matrix Gamma = examples::example7_Gamma();
    std::mt19937_64 rng(71);
    Vector x = oracle::random_vector(rng, 8), delta = oracle::random_vector(rng, 8);

    Matrix A(2, 2);
    A << 0.0, 1.0, -2.0, -0.3;
    AgentMap lin = [A](double, const Vector& v) { return Vector(A * v); };
    auto step = linearized_delta_step(x, delta, L, lin, {}, Gamma, 2.0, 10.0);
    Vector direct = -2.0 * kron(L, Gamma) * delta;
    for (int i = 0; i < 4; ++i) direct.segment(i * 2, 2) += A * delta.segment(i * 2, 2);
    CHECK((step.value - direct).norm() < 1e-6);

    CHECK(linearized_delta_step(x, Vector::Zero(8), L, lin, {}, Gamma, 2.0, 10.0).value.norm() == 0.0);

    auto vdp = dynamics_by_name("vanderpol");
    Vector origin = Vector::Zero(8);
    Vector d = Vector::Zero(8);
    d(0) = 1.0;
    auto s0 = linearized_delta_step(origin, d, L, vdp.f, vdp.jac, Gamma, 1.0, 100.0);
    // D_f(0) = [[-1, 1], [-1, 0]], node 1 has no in-neighbours
    CHECK_THAT(s0.value(0), WithinAbs(-1.0, 1e-12));
    CHECK_THAT(s0.value(1), WithinAbs(-1.0, 1e-12));
    // node 2 listens to node 1 with weight 1.2: coupling term +1.2 * 0.5 on its first state
    CHECK_THAT(s0.value(2), WithinAbs(1.2 * 0.5, 1e-12));
    auto fd = linearized_delta_step(origin, d, L, vdp.f, {}, Gamma, 1.0, 100.0);
    CHECK((fd.value - s0.value).norm() < 1e-6);
}

TEST_CASE("convergence rate of a constant metric is zero", "[simulate]") {
    Trajectory tr;
    tr.n = 1;
    for (int k = 0; k <= 10; ++k) {
        tr.times.push_back(k);
        Vector x(2);
        x << 1.0, 0.0;
        tr.states.push_back(x);
    }
    CHECK_THAT(convergence_rate(tr, Metric::Pairwise), WithinAbs(0.0, 1e-12));
    tr.states.back() = Vector::Zero(2);
    CHECK(std::isinf(convergence_rate(tr, Metric::Pairwise)));
    CHECK_THROWS_AS(parse_metric("bogus"), ParameterError);
}

TEST_CASE("RK4 matches matrix-exponential flows on every dwell", "[simulate][property]") {
    for (const char* name : {"example1", "example3", "example5-positive"}) {
        auto s = preset(name);
        auto sys = std::get<LinearNetworkSystem>(s.system);
        Vector x = s.x0.draw(sys.agents(), 3);
        auto tr = integrate(sys, x, 0.01, 6.0);
        for (const auto& seg : sys.sig.segments()) {
            if (seg.t1 > 6.0 + 1e-9) break;
            Vector a = tr.states[index_at(tr, seg.t0)];
            Vector b = tr.states[index_at(tr, seg.t1)];
            Vector exact = expm(linear_system_matrix(sys, seg.graph) * (seg.t1 - seg.t0)) * a;
            CHECK((b - exact).norm() <= 1e-6 * exact.norm());
        }
    }
}

TEST_CASE("halving the step changes little", "[simulate][property]") {
    for (const auto& name : preset_names()) {
        auto s = preset(name);
        Vector x0 = s.x0.draw(s.agents());
        double dt = s.dt > 0 ? s.dt : s.signal().t_min() / 50.0;
        double horizon = std::min(s.horizon > 0 ? s.horizon : s.signal().horizon(), 5.0);
        auto run = [&](double h) {
            return std::visit([&](const auto& sys) { return integrate(sys, x0, h, horizon); }, s.system);
        };
        Vector a = run(dt).states.back(), b = run(dt / 2).states.back();
        INFO(name);
        CHECK((a - b).norm() <= 1e-6 * std::max(1.0, b.norm()));
    }
}

TEST_CASE("shifting along the manifold adds the agent flow", "[simulate][property]") {
    auto s = preset("example5-positive");
    auto sys = std::get<LinearNetworkSystem>(s.system);
    Vector x0 = s.x0.draw(4, 5);
    Vector u(3);
    u << 1.0, -2.0, 0.5;
    auto base = integrate(sys, x0, 0.02, 4.0);
    auto shifted = integrate(sys, x0 + kron(Vector::Ones(4), u), 0.02, 4.0);
    Vector flow = expm(sys.A * 4.0) * u;
    Vector expect = base.states.back() + kron(Vector::Ones(4), flow);
    CHECK((shifted.states.back() - expect).norm() <= 1e-7 * expect.norm());
    CHECK_THAT(sync_error(shifted.states.back(), 3).norm(),
               WithinAbs(sync_error(base.states.back(), 3).norm(), 1e-7 * base.states.back().norm()));
}

TEST_CASE("relabeling agents permutes the trajectory", "[simulate][property]") {
    const std::vector<int> perm{2, 0, 3, 1};  // new index of old agent k
    auto relabel = [&](const WeightedDigraph& g) {
        std::vector<Edge> es;
        for (const auto& e : g.edges()) es.push_back({perm[e.target], perm[e.source], e.weight});
        return WeightedDigraph(g.n(), es);
    };
    auto permute = [&](const Vector& x, int n) {
        Vector y(x.size());
        for (int k = 0; k < 4; ++k) y.segment(perm[k] * n, n) = x.segment(k * n, n);
        return y;
    };
    for (const char* name : {"example5-positive", "example7-vanderpol"}) {
        auto s = preset(name);
        auto t = s;
        std::visit(
            [&](auto& sys) {
                for (auto& g : sys.graphs) g = relabel(g);
            },
            t.system);
        const int n = s.agent_dim();
        Vector x0 = s.x0.draw(4, 9);
        auto run = [&](const Scenario& sc, const Vector& x) {
            return std::visit([&](const auto& sys) { return integrate(sys, x, 5e-4, 2.0); }, sc.system);
        };
        Vector a = run(s, x0).states.back();
        Vector b = run(t, permute(x0, n)).states.back();
        INFO(name);
        CHECK((permute(a, n) - b).norm() <= 1e-9 * std::max(1.0, a.norm()));
    }
}

TEST_CASE("delta identities at every switch instant", "[simulate][property]") {
    auto s = preset("example7-vanderpol");
    auto sys = std::get<NonlinearNetworkSystem>(s.system);
    auto tr = integrate(sys, s.x0.draw(4, 2), 5e-4, 5.0);
    for (const auto& ev : tr.switch_events) {
        const Vector& x = tr.states[index_at(tr, ev.t)];
        Matrix L = laplacian(sys.graphs[ev.graph]);
        auto rd = reach_decomposition(sys.graphs[ev.graph]);
        Matrix M = kron(delta_projector(L, rd), Matrix::Identity(2, 2));
        Vector d = delta_error(x, L, rd, 2);
        const double scale = std::max(1.0, x.norm());
        CHECK((M * M - M).cwiseAbs().maxCoeff() < 1e-8);
        CHECK((M * x - d).norm() < 1e-8 * scale);
        for (const auto& beta : beta_vectors(L, rd))
            CHECK((kron(beta.transpose(), Matrix::Identity(2, 2)) * d).norm() < 1e-8 * scale);
        Matrix coupled = kron(L, sys.Gamma) * (Matrix::Identity(8, 8) - M);
        CHECK(coupled.cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("nonlinear growth bound along dwell intervals", "[simulate][property]") {
    auto s = preset("example7-vanderpol");
    auto sys = std::get<NonlinearNetworkSystem>(s.system);
    auto nc = nonlinear_constants(sys.graphs, sys.Gamma);
    const double lam_min = sys.Gamma.diagonal().minCoeff();
    auto tr = integrate(sys, s.x0.draw(4, 4), 5e-4, 5.0);
    for (const auto& seg : sys.sig.segments()) {
        if (seg.t1 > 5.0 + 1e-9) break;
        Matrix L = laplacian(sys.graphs[seg.graph]);
        auto rd = reach_decomposition(sys.graphs[seg.graph]);
        std::size_t k0 = index_at(tr, seg.t0);
        const Vector d0 = delta_error(tr.states[k0], L, rd, 2);
        // empirical Lipschitz constant of f over the states visited on this dwell
        double rho_bar = 0.0;
        for (std::size_t k = k0; k < tr.times.size() && tr.times[k] <= seg.t1 + 1e-9; ++k)
            for (int i = 0; i < 4; ++i) rho_bar = std::max(rho_bar, norm2(sys.jac(tr.times[k], tr.states[k].segment(i * 2, 2))));
        const double rate = -sys.phi * nc.alpha_per_graph[seg.graph] / 2.0 * lam_min + rho_bar * nc.c;
        for (int p = 1; p <= 20; ++p) {
            double t = seg.t0 + (seg.t1 - seg.t0) * p / 20.0;
            const Vector d = delta_error(tr.states[index_at(tr, t)], L, rd, 2);
            CHECK(d.norm() <= std::sqrt(nc.c) * std::exp(rate * (t - seg.t0)) * d0.norm() * (1.0 + 1e-9) + 1e-12);
        }
    }
}
