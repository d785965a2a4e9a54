#pragma once

#include "syncnet/dynamics.hpp"
#include "syncnet/errors.hpp"
#include "syncnet/graph.hpp"
#include "syncnet/switching.hpp"

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace syncnet {

/// ẋ_i = A x_i + φ B K Σ_j a_ij (x_j − x_i)
struct LinearNetworkSystem {
    Matrix A, B, K;
    double phi = 1.0;
    std::vector<WeightedDigraph> graphs;
    SwitchingSignal sig;

    int agent_dim() const { return static_cast<int>(A.rows()); }
    int agents() const { return graphs.empty() ? 0 : graphs.front().n(); }
    /// Throws DimensionError / ParameterError on inconsistent data.
    void validate() const;
};

/// ẋ_i = f(t, x_i) + φ Γ Σ_j a_ij (x_j − x_i)
struct NonlinearNetworkSystem {
    AgentMap f;
    AgentJacobian jac;  ///< optional
    double rho = 1.0;   ///< claimed Lipschitz constant of f
    Matrix Gamma;
    double phi = 1.0;
    std::vector<WeightedDigraph> graphs;
    SwitchingSignal sig;

    int agent_dim() const { return static_cast<int>(Gamma.rows()); }
    int agents() const { return graphs.empty() ? 0 : graphs.front().n(); }
    void validate() const;
};

struct SwitchEvent {
    double t = 0.0;
    int graph = 0;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Vector> states;
    std::vector<SwitchEvent> switch_events;
    int n = 1;  ///< agent state dimension
};

/// Raised when |x| exceeds the divergence cutoff; carries the samples computed so far.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, Trajectory partial) : Error(what), partial_(std::move(partial)) {}
    const Trajectory& partial() const { return partial_; }

private:
    Trajectory partial_;
};

constexpr double kDivergenceNorm = 1e12;

/// Fixed-step RK4; steps never straddle a switch. dt <= 0 selects T_min / 50; dt must not exceed
/// T_min / 10. horizon <= 0 uses the signal's horizon. `record_every` thins stored samples (switch
/// instants and the final time are always stored).
Trajectory integrate(const LinearNetworkSystem& sys, const Vector& x0, double dt = -1.0, double horizon = -1.0,
                     int record_every = 1);
Trajectory integrate(const NonlinearNetworkSystem& sys, const Vector& x0, double dt = -1.0, double horizon = -1.0,
                     int record_every = 1);

/// Stacked (x_1 − x_j), j = 2..N.
Vector sync_error(const Vector& x, int n);

/// δ = (M ⊗ I_n) x with M = I − Σ_j γ_j β_jᵀ.
Vector delta_error(const Vector& x, const Matrix& L, const ReachDecomposition& rd, int n);

/// max_{i<j} |x_i − x_j|.
double pairwise_deviation(const Vector& x, int n);

struct LinearizedStep {
    Vector value;          ///< D_f δ − φ (L ⊗ Γ) δ
    double jac_norm = 0.0; ///< largest ‖D_f‖ over agents
    bool exceeds_rho = false;
};

LinearizedStep linearized_delta_step(const Vector& x, const Vector& delta, const Matrix& L, const AgentMap& f,
                                     const AgentJacobian& jac, const Matrix& Gamma, double phi, double rho,
                                     double t = 0.0);

enum class Metric { SyncError, Pairwise };

Metric parse_metric(const std::string& s);

/// Least-squares slope of ln(metric) over the trailing half; −inf if the metric underflows 1e-14.
double convergence_rate(const Trajectory& traj, Metric metric);

/// Metric series sampled along a trajectory.
std::vector<double> metric_series(const Trajectory& traj, Metric metric);

/// Stacked system matrix I ⊗ A − φ L ⊗ BK.
Matrix linear_system_matrix(const LinearNetworkSystem& sys, int graph);

}  // namespace syncnet
