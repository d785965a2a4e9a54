#pragma once

#include "syncnet/dynamics.hpp"
#include "syncnet/simulate.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace syncnet {

enum class Verdict { Sync, NoSync };

std::string to_string(Verdict v);
Verdict parse_verdict(const std::string& s);

/// Initial condition: an explicit stacked vector, or independent per-agent draws from a box.
struct InitialSpec {
    std::optional<Vector> explicit_x0;
    Box box;
    std::uint64_t seed = 1;

    /// Explicit vector if present, else a box draw with `seed_override` (or `seed`).
    Vector draw(int N, std::optional<std::uint64_t> seed_override = std::nullopt) const;
};

struct Scenario {
    std::string name;
    std::string description;
    std::variant<LinearNetworkSystem, NonlinearNetworkSystem> system;
    std::string dynamics;  ///< registry name for nonlinear systems
    InitialSpec x0;
    Verdict expected = Verdict::Sync;
    std::optional<double> expected_rate;
    double dt = -1.0;
    double horizon = -1.0;
    std::vector<std::string> notes;

    bool is_linear() const { return std::holds_alternative<LinearNetworkSystem>(system); }
    const std::vector<WeightedDigraph>& graphs() const;
    const SwitchingSignal& signal() const;
    int agent_dim() const;
    int agents() const;
    double phi() const;
    void set_phi(double phi);
    void set_signal(SwitchingSignal sig);
};

std::vector<std::string> preset_names();

/// Throws InputError listing the valid names when `name` is unknown.
Scenario preset(const std::string& name);

/// Uniform random digraphs (edge probability 0.3, weights U(0.5, 2)) driving a scalar integrator
/// network with 1 s periodic dwell. With require_joint_tree, collections are redrawn until their
/// union has a directed spanning tree (at most 1e5 draws).
Scenario random_instance(std::uint64_t seed, int n_nodes, int n_graphs, bool require_joint_tree);

/// Just the random graphs of random_instance.
std::vector<WeightedDigraph> random_graphs(std::uint64_t seed, int n_nodes, int n_graphs, bool require_joint_tree);

struct NamedDynamics {
    AgentMap f;
    AgentJacobian jac;
    int dim = 0;  ///< 0 means any dimension
};

/// "vanderpol" (driven damped oscillator, n = 2), "doubling" (f = 2x), "zero" (f = 0).
NamedDynamics dynamics_by_name(const std::string& name);
std::vector<std::string> dynamics_names();

/// Verdict rule for a finished run: sync iff the final pairwise deviation is at most
/// 1e-3 * max(1, initial deviation).
Verdict judge(const Trajectory& traj);

/// Matrices and graphs of the preset examples.
namespace examples {
WeightedDigraph example1_a();
WeightedDigraph example1_b();
WeightedDigraph example3_a();
WeightedDigraph example3_b();
WeightedDigraph example4();
WeightedDigraph example5_a();
WeightedDigraph example5_b();
Matrix example5_A();
Matrix example5_B();
Matrix example5_K();
Matrix counterexample_A();
Matrix counterexample_B();
Matrix counterexample_K();
Matrix example7_Gamma();
}  // namespace examples

}  // namespace syncnet
