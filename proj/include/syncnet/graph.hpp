#pragma once

#include <Eigen/Dense>

#include <vector>

namespace syncnet {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Directed edge j -> i with weight a_ij. Indices are 0-based internally.
struct Edge {
    int target = 0;
    int source = 0;
    double weight = 0.0;
};

/// Immutable weighted digraph on nodes 0..n-1.
class WeightedDigraph {
public:
    WeightedDigraph() = default;
    /// Validates weights (> 0, finite), indices and self-loops; duplicate edges are rejected.
    WeightedDigraph(int n_nodes, std::vector<Edge> edges);

    /// Same as the constructor but takes (target, source) in 1-based numbering.
    static WeightedDigraph from_one_based(int n_nodes, const std::vector<Edge>& edges);

    int n() const { return n_; }
    const std::vector<Edge>& edges() const { return edges_; }

    /// W with W(i, j) = a_ij.
    Matrix adjacency() const;

    /// out_neighbors()[j] lists the targets of edges leaving j.
    std::vector<std::vector<int>> out_neighbors() const;

private:
    int n_ = 0;
    std::vector<Edge> edges_;
};

/// L = diag(row sums of W) - W.
Matrix laplacian(const WeightedDigraph& g);

/// Edge-set union; weights of edges present in several graphs are summed.
WeightedDigraph union_graph(const std::vector<WeightedDigraph>& gs);

bool has_directed_spanning_tree(const WeightedDigraph& g);

struct ReachDecomposition {
    std::vector<std::vector<int>> reaches;    ///< R_i, sorted node lists
    std::vector<std::vector<int>> exclusive;  ///< H_i
    std::vector<std::vector<int>> common;     ///< C_i
    std::vector<std::vector<int>> roots;      ///< closed SCC that generates R_i
    std::vector<int> scc_order;               ///< closed SCCs first, rest topological
    std::vector<int> block_sizes;
    int chi = 0;
};

ReachDecomposition reach_decomposition(const WeightedDigraph& g);

/// Tarjan's algorithm; components are returned in reverse topological order of the condensation.
std::vector<std::vector<int>> strongly_connected_components(const WeightedDigraph& g);

}  // namespace syncnet
