#pragma once

#include "syncnet/dynamics.hpp"
#include "syncnet/graph.hpp"
#include "syncnet/linalg.hpp"
#include "syncnet/switching.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace syncnet {

enum class BoundMethod { LogNorm, EigenConditioning };

std::string to_string(BoundMethod m);
/// Accepts "log-norm" and "eigen-conditioning".
BoundMethod parse_bound_method(const std::string& s);

/// Certifies |exp(Ht)| <= upsilon * exp(xi * t) for t >= 0.
struct ExpGrowthBound {
    double upsilon = 1.0;
    double xi = 0.0;
    BoundMethod method = BoundMethod::LogNorm;
};

/// Validates the bound on 64 points of [0, t_grid_max]; a violated sample throws NumericalError.
/// EigenConditioning on a (numerically) defective H throws MethodError.
ExpGrowthBound exp_growth_bound(const Matrix& H, BoundMethod method, double t_grid_max);

/// Eigen-conditioning when it applies, log-norm otherwise.
ExpGrowthBound best_growth_bound(const Matrix& H, double t_grid_max);

struct ConditionRow {
    int window = 0;
    int subspace = 0;
    double lhs = 0.0;
    double threshold = 0.0;  ///< ln γ
    bool ok = false;
};

/// Per-graph data from the range/kernel split of the reduced Laplacian.
struct GraphBounds {
    int graph = 0;
    int ran_dim = 0;
    ExpGrowthBound h1;       ///< on the range part
    double basis_cond = 1.0; ///< conditioning of the range basis in which h1 was computed
    ExpGrowthBound h2;       ///< I ⊗ A
    double split_factor = 1.0;
    bool hurwitz = true;
};

struct ConditionReport {
    bool satisfied = false;
    double gamma = 0.0;
    double gamma_ceiling = 0.0;  ///< 1 / (N * worst projection factor over windows)
    std::vector<ConditionRow> per_window;
    std::vector<double> hbar_values;  ///< ħ per (window, subspace, piece), row-major
    std::vector<GraphBounds> graphs;
    std::vector<std::string> diagnosis;
};

/// Convergence condition for the linear network under sig. gamma defaults to 90% of the ceiling.
ConditionReport theorem1_check(const Matrix& A, const Matrix& B, const Matrix& K, double phi,
                               const SwitchingSignal& sig, const std::vector<WeightedDigraph>& gs,
                               std::optional<double> gamma = std::nullopt);

/// (Σ ln ħ − ln γ) / (−λ).
double dwell_time_lower_bound(const std::vector<double>& hbar_terms, double lambda_neg, double gamma);

struct Assumption5Result {
    bool ok = false;
    double lyapunov_max_eig = 0.0;  ///< λ_max(AᵀP + PA)
    int observability = 0;
    int n = 0;
};

/// Throws ValidationError when P is not symmetric positive definite.
Assumption5Result check_assumption5(const Matrix& A, const Matrix& B, const Matrix& P, double tol = 1e-9);

struct AlphaResult {
    double alpha = 0.0;
    bool unconstrained = false;  ///< trivial constraint: alpha is +inf
};

/// Largest α with δᵀ[(ΞL + LᵀΞ) ⊗ I]δ >= α δᵀ[Ξ ⊗ Γ]δ for δ in `constraint`.
AlphaResult alpha_for_constrained_subspace(const Matrix& L, const Matrix& Xi, const Matrix& Gamma,
                                           const Subspace& constraint);

struct SampleCheck {
    bool ok = true;
    double worst = 0.0;  ///< worst observed ratio or margin
    std::optional<Vector> witness_x;
    std::optional<Vector> witness_y;
    int samples = 0;
};

/// Falsification test for |M F(x)| <= rho_bar |M x| with x sampled per agent from `box` (f at t = 0).
SampleCheck lipschitz_projection_check(const AgentMap& f, const Matrix& M, int sample_count, const Box& box,
                                       double rho_bar, std::uint64_t seed);

/// Falsification test for (x−y)ᵀQ(f(x)−f(y)−Σ(x−y)) >= 0; `worst` is the smallest observed value.
SampleCheck quad_inverse_check(const AgentMap& f, const Matrix& Q, const Matrix& Sigma, int sample_count,
                               const Box& box, std::uint64_t seed);

/// Sufficient test: λ_min(QJ + JᵀQ − 2QΣ) >= 0 at sampled points. Missing jac means finite differences.
SampleCheck quad_inverse_jacobian_check(const AgentMap& f, const AgentJacobian& jac, const Matrix& Q,
                                        const Matrix& Sigma, int sample_count, const Box& box, std::uint64_t seed);

/// Largest ‖Df‖₂ seen on the sampled box; an empirical Lipschitz constant.
double sampled_lipschitz(const AgentMap& f, const AgentJacobian& jac, int sample_count, const Box& box,
                         std::uint64_t seed);

struct PhiThreshold {
    double phi_star = 0.0;
    double alpha = 0.0;
    double c = 0.0;
    double c_prime = 0.0;
    double rho = 0.0;
    double rho_bar = 0.0;
    double gamma_min = 0.0;
    double t_min = 0.0;
    double t_max = 0.0;
    double hbar = 1.0;
    double gamma = 0.0;
};

/// Smallest φ with (Tmax/Tmin) ln ħ − (φα/2) γ_min Tmin + max(ρc + c′, ρ̄) Tmax < ln γ (equality at φ*).
PhiThreshold phi_threshold(double alpha, double c, double c_prime, double rho, double rho_bar, double gamma_min,
                           double t_min, double t_max, double hbar, double gamma);

/// Left-hand side of the inequality above, for algebraic checks.
double phi_inequality_lhs(const PhiThreshold& p, double phi);

/// α, c and c′ over a graph set for the Lyapunov weights Xi (identity when empty).
struct NonlinearConstants {
    double alpha = 0.0;
    double c = 1.0;
    double c_prime = 0.0;
    std::vector<double> alpha_per_graph;
};

NonlinearConstants nonlinear_constants(const std::vector<WeightedDigraph>& gs, const Matrix& Gamma,
                                       const std::vector<Matrix>& Xi = {});

/// Coupling below which the QUAD-inverse network cannot synchronize: 2ε / (α γ_max), with
/// ε = min_i Σ_ii / Q_ii and α = max over graphs of λ_max(Ξ^{-1/2}(ΞL̃ + L̃ᵀΞ)Ξ^{-1/2}).
struct DesyncThreshold {
    double phi_star = std::numeric_limits<double>::infinity();
    double epsilon = 0.0;
    double alpha = 0.0;
    double gamma_max = 0.0;
};

DesyncThreshold desync_phi_threshold(const std::vector<WeightedDigraph>& gs, const Matrix& Gamma, const Matrix& Q,
                                     const Matrix& Sigma, const std::vector<Matrix>& Xi = {});

}  // namespace syncnet
