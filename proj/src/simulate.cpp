#include "syncnet/simulate.hpp"

#include "syncnet/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace syncnet {

namespace {

void validate_graphs(const std::vector<WeightedDigraph>& graphs, const SwitchingSignal& sig) {
    if (graphs.empty()) throw DimensionError("system has no graphs");
    for (const auto& g : graphs)
        if (g.n() != graphs.front().n()) throw DimensionError("graphs have different node counts");
    if (sig.schedule().empty()) throw ValidationError("system has no switching signal");
    if (sig.max_graph_index() >= static_cast<int>(graphs.size()))
        throw DimensionError("switching signal references a missing graph");
}

using Rhs = std::function<Vector(double, const Vector&, int)>;

Trajectory run_rk4(const Rhs& rhs, const SwitchingSignal& sig, int n, const Vector& x0, double dt, double horizon,
                   int record_every) {
    if (!x0.allFinite()) throw ValidationError("initial state has non-finite entries");
    if (dt <= 0.0) dt = sig.t_min() / 50.0;
    if (dt > sig.t_min() / 10.0 * (1.0 + 1e-12))
        throw ParameterError("dt must not exceed t_min / 10 so that every dwell is resolved");
    if (horizon <= 0.0) horizon = sig.horizon();
    if (!std::isfinite(horizon)) throw ParameterError("horizon must be finite");
    if (record_every < 1) record_every = 1;

    std::vector<double> bounds;
    std::vector<int> graphs;
    for (const auto& e : sig.schedule())
        if (e.t < horizon) {
            bounds.push_back(e.t);
            graphs.push_back(e.graph);
        }
    bounds.push_back(horizon);

    Trajectory tr;
    tr.n = n;
    tr.times.push_back(0.0);
    tr.states.push_back(x0);
    Vector x = x0;
    long step_count = 0;
    for (std::size_t s = 0; s + 1 < bounds.size(); ++s) {
        const double a = bounds[s], b = bounds[s + 1];
        const int g = graphs[s];
        tr.switch_events.push_back({a, g});
        for (long k = 0;; ++k) {
            double t = a + static_cast<double>(k) * dt;
            if (t >= b - 1e-12 * std::max(1.0, b)) break;
            double t_next = std::min(a + static_cast<double>(k + 1) * dt, b);
            if (b - t_next < 1e-9 * dt) t_next = b;
            double h = t_next - t;
            Vector k1 = rhs(t, x, g);
            Vector k2 = rhs(t + 0.5 * h, x + 0.5 * h * k1, g);
            Vector k3 = rhs(t + 0.5 * h, x + 0.5 * h * k2, g);
            Vector k4 = rhs(t + h, x + h * k3, g);
            x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            ++step_count;
            bool boundary = t_next == b;
            if (!x.allFinite() || x.norm() > kDivergenceNorm) {
                tr.times.push_back(t_next);
                tr.states.push_back(x);
                std::ostringstream os;
                os << "state norm exceeded " << kDivergenceNorm << " at t = " << t_next;
                throw DivergenceError(os.str(), std::move(tr));
            }
            if (boundary || step_count % record_every == 0) {
                tr.times.push_back(t_next);
                tr.states.push_back(x);
            }
            if (boundary) break;
        }
    }
    return tr;
}

}  // namespace

void LinearNetworkSystem::validate() const {
    const auto n = A.rows();
    if (A.cols() != n || n == 0) throw DimensionError("A must be square and non-empty");
    if (B.rows() != n || K.cols() != n || K.rows() != B.cols()) throw DimensionError("A, B, K have incompatible shapes");
    if (!(phi > 0.0)) throw ParameterError("coupling strength phi must be positive");
    validate_graphs(graphs, sig);
}

void NonlinearNetworkSystem::validate() const {
    if (!f) throw ValidationError("nonlinear system has no dynamics");
    if (Gamma.rows() != Gamma.cols() || Gamma.rows() == 0) throw DimensionError("Gamma must be square and non-empty");
    Matrix off = Gamma;
    off.diagonal().setZero();
    if (off.cwiseAbs().maxCoeff() > 0.0 || !(Gamma.diagonal().minCoeff() > 0.0))
        throw ValidationError("Gamma must be diagonal with strictly positive entries");
    if (!(rho > 0.0)) throw ParameterError("Lipschitz constant rho must be positive");
    if (!(phi > 0.0)) throw ParameterError("coupling strength phi must be positive");
    validate_graphs(graphs, sig);
}

Matrix linear_system_matrix(const LinearNetworkSystem& sys, int graph) {
    const int N = sys.agents();
    Matrix L = laplacian(sys.graphs.at(graph));
    return kron(Matrix::Identity(N, N), sys.A) - sys.phi * kron(L, sys.B * sys.K);
}

Trajectory integrate(const LinearNetworkSystem& sys, const Vector& x0, double dt, double horizon, int record_every) {
    sys.validate();
    const int n = sys.agent_dim(), N = sys.agents();
    if (x0.size() != static_cast<Eigen::Index>(n) * N) throw DimensionError("x0 must have N * n entries");
    std::vector<Matrix> H;
    for (std::size_t g = 0; g < sys.graphs.size(); ++g) H.push_back(linear_system_matrix(sys, static_cast<int>(g)));
    Rhs rhs = [&](double, const Vector& x, int g) -> Vector { return H[g] * x; };
    return run_rk4(rhs, sys.sig, n, x0, dt, horizon, record_every);
}

Trajectory integrate(const NonlinearNetworkSystem& sys, const Vector& x0, double dt, double horizon, int record_every) {
    sys.validate();
    const int n = sys.agent_dim(), N = sys.agents();
    if (x0.size() != static_cast<Eigen::Index>(n) * N) throw DimensionError("x0 must have N * n entries");
    std::vector<Matrix> C;
    for (const auto& g : sys.graphs) C.push_back(sys.phi * kron(laplacian(g), sys.Gamma));
    Rhs rhs = [&](double t, const Vector& x, int g) -> Vector {
        Vector out = -(C[g] * x);
        for (int i = 0; i < N; ++i) {
            Vector fi = sys.f(t, x.segment(static_cast<Eigen::Index>(i) * n, n));
            if (fi.size() != n) throw DimensionError("agent dynamics returned a vector of the wrong size");
            out.segment(static_cast<Eigen::Index>(i) * n, n) += fi;
        }
        return out;
    };
    return run_rk4(rhs, sys.sig, n, x0, dt, horizon, record_every);
}

Vector sync_error(const Vector& x, int n) {
    if (n <= 0 || x.size() % n != 0) throw DimensionError("state length is not a multiple of the agent dimension");
    const auto N = x.size() / n;
    if (N == 0) return Vector(0);
    Vector e((N - 1) * n);
    for (Eigen::Index j = 1; j < N; ++j) e.segment((j - 1) * n, n) = x.head(n) - x.segment(j * n, n);
    return e;
}

Vector delta_error(const Vector& x, const Matrix& L, const ReachDecomposition& rd, int n) {
    const auto N = L.rows();
    if (n <= 0 || x.size() != N * n) throw DimensionError("state length does not match the Laplacian and n");
    Matrix M = delta_projector(L, rd);
    Matrix big = kron(M, Matrix::Identity(n, n));
    Vector d = big * x;
    const double scale = std::max(1.0, x.norm());
    for (const auto& beta : beta_vectors(L, rd)) {
        Vector proj = kron(beta.transpose(), Matrix::Identity(n, n)) * d;
        if (proj.norm() > 1e-8 * scale) throw NumericalError("delta error has a component along a kernel direction");
    }
    if ((big * d - d).norm() > 1e-8 * scale) throw NumericalError("delta projector is not idempotent");
    return d;
}

double pairwise_deviation(const Vector& x, int n) {
    if (n <= 0 || x.size() % n != 0) throw DimensionError("state length is not a multiple of the agent dimension");
    const auto N = x.size() / n;
    double worst = 0.0;
    for (Eigen::Index i = 0; i < N; ++i)
        for (Eigen::Index j = i + 1; j < N; ++j) worst = std::max(worst, (x.segment(i * n, n) - x.segment(j * n, n)).norm());
    return worst;
}

LinearizedStep linearized_delta_step(const Vector& x, const Vector& delta, const Matrix& L, const AgentMap& f,
                                     const AgentJacobian& jac, const Matrix& Gamma, double phi, double rho, double t) {
    const auto N = L.rows();
    const auto n = Gamma.rows();
    if (x.size() != N * n || delta.size() != N * n) throw DimensionError("state length does not match L and Gamma");
    LinearizedStep out;
    out.value = -phi * (kron(L, Gamma) * delta);
    for (Eigen::Index i = 0; i < N; ++i) {
        Matrix J = jacobian(f, jac, t, x.segment(i * n, n));
        out.jac_norm = std::max(out.jac_norm, norm2(J));
        out.value.segment(i * n, n) += J * delta.segment(i * n, n);
    }
    out.exceeds_rho = out.jac_norm > rho;
    return out;
}

Metric parse_metric(const std::string& s) {
    if (s == "sync_error" || s == "e_norm") return Metric::SyncError;
    if (s == "pairwise" || s == "pairwise_dev") return Metric::Pairwise;
    throw ParameterError("unknown metric '" + s + "' (expected sync_error or pairwise)");
}

std::vector<double> metric_series(const Trajectory& traj, Metric metric) {
    std::vector<double> out;
    out.reserve(traj.states.size());
    for (const auto& x : traj.states)
        out.push_back(metric == Metric::SyncError ? sync_error(x, traj.n).norm() : pairwise_deviation(x, traj.n));
    return out;
}

double convergence_rate(const Trajectory& traj, Metric metric) {
    if (traj.times.size() < 2) throw ParameterError("convergence_rate needs at least two samples");
    auto values = metric_series(traj, metric);
    const double t0 = traj.times.front(), t1 = traj.times.back();
    const double mid = t0 + 0.5 * (t1 - t0);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (traj.times[k] < mid) continue;
        if (values[k] < 1e-14) return -std::numeric_limits<double>::infinity();
        double tx = traj.times[k], ly = std::log(values[k]);
        sx += tx;
        sy += ly;
        sxx += tx * tx;
        sxy += tx * ly;
        ++count;
    }
    if (count < 2) throw ParameterError("convergence_rate needs at least two samples in the trailing half");
    double den = count * sxx - sx * sx;
    if (den <= 0.0) throw ParameterError("trailing samples share a single time stamp");
    return (count * sxy - sx * sy) / den;
}

}  // namespace syncnet
