#include "syncnet/graph.hpp"

#include "syncnet/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <utility>

namespace syncnet {

WeightedDigraph::WeightedDigraph(int n_nodes, std::vector<Edge> edges) : n_(n_nodes), edges_(std::move(edges)) {
    if (n_ < 1) throw ValidationError("graph must have at least one node, got " + std::to_string(n_));
    std::set<std::pair<int, int>> seen;
    for (const auto& e : edges_) {
        if (e.target < 0 || e.target >= n_ || e.source < 0 || e.source >= n_)
            throw ValidationError("edge index out of range for graph with " + std::to_string(n_) + " nodes");
        if (e.target == e.source) throw ValidationError("self-loop on node " + std::to_string(e.target + 1));
        if (!(e.weight > 0.0) || !std::isfinite(e.weight))
            throw ValidationError("edge weights must be finite and strictly positive");
        if (!seen.insert({e.target, e.source}).second)
            throw ValidationError("duplicate edge " + std::to_string(e.target + 1) + "<-" + std::to_string(e.source + 1));
    }
}

WeightedDigraph WeightedDigraph::from_one_based(int n_nodes, const std::vector<Edge>& edges) {
    std::vector<Edge> shifted;
    shifted.reserve(edges.size());
    for (const auto& e : edges) shifted.push_back({e.target - 1, e.source - 1, e.weight});
    return WeightedDigraph(n_nodes, std::move(shifted));
}

Matrix WeightedDigraph::adjacency() const {
    Matrix w = Matrix::Zero(n_, n_);
    for (const auto& e : edges_) w(e.target, e.source) = e.weight;
    return w;
}

std::vector<std::vector<int>> WeightedDigraph::out_neighbors() const {
    std::vector<std::vector<int>> out(n_);
    for (const auto& e : edges_) out[e.source].push_back(e.target);
    for (auto& v : out) std::sort(v.begin(), v.end());
    return out;
}

Matrix laplacian(const WeightedDigraph& g) {
    Matrix w = g.adjacency();
    Matrix l = -w;
    for (int i = 0; i < g.n(); ++i) l(i, i) = w.row(i).sum();
    return l;
}

WeightedDigraph union_graph(const std::vector<WeightedDigraph>& gs) {
    if (gs.empty()) throw DimensionError("union of an empty graph collection");
    const int n = gs.front().n();
    std::map<std::pair<int, int>, double> acc;
    for (const auto& g : gs) {
        if (g.n() != n) throw DimensionError("union_graph: graphs have different node counts");
        for (const auto& e : g.edges()) acc[{e.target, e.source}] += e.weight;
    }
    std::vector<Edge> edges;
    for (const auto& [key, w] : acc) edges.push_back({key.first, key.second, w});
    return WeightedDigraph(n, std::move(edges));
}

namespace {

std::vector<char> bfs_from(const std::vector<std::vector<int>>& out, int start) {
    std::vector<char> seen(out.size(), 0);
    std::queue<int> q;
    q.push(start);
    seen[start] = 1;
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int v : out[u])
            if (!seen[v]) {
                seen[v] = 1;
                q.push(v);
            }
    }
    return seen;
}

}  // namespace

bool has_directed_spanning_tree(const WeightedDigraph& g) {
    auto out = g.out_neighbors();
    for (int r = 0; r < g.n(); ++r) {
        auto seen = bfs_from(out, r);
        if (std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; })) return true;
    }
    return false;
}

std::vector<std::vector<int>> strongly_connected_components(const WeightedDigraph& g) {
    const int n = g.n();
    auto out = g.out_neighbors();
    std::vector<int> index(n, -1), low(n, 0);
    std::vector<char> on_stack(n, 0);
    std::vector<int> stack;
    std::vector<std::vector<int>> comps;
    int counter = 0;

    // iterative Tarjan: frame = (node, next neighbour position)
    std::vector<std::pair<int, std::size_t>> call;
    for (int s = 0; s < n; ++s) {
        if (index[s] != -1) continue;
        call.push_back({s, 0});
        index[s] = low[s] = counter++;
        stack.push_back(s);
        on_stack[s] = 1;
        while (!call.empty()) {
            auto& [u, pos] = call.back();
            if (pos < out[u].size()) {
                int v = out[u][pos++];
                if (index[v] == -1) {
                    index[v] = low[v] = counter++;
                    stack.push_back(v);
                    on_stack[v] = 1;
                    call.push_back({v, 0});
                } else if (on_stack[v]) {
                    low[u] = std::min(low[u], index[v]);
                }
                continue;
            }
            int done = u;
            call.pop_back();
            if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
            if (low[done] == index[done]) {
                std::vector<int> comp;
                int w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    comp.push_back(w);
                } while (w != done);
                std::sort(comp.begin(), comp.end());
                comps.push_back(std::move(comp));
            }
        }
    }
    return comps;
}

ReachDecomposition reach_decomposition(const WeightedDigraph& g) {
    const int n = g.n();
    auto comps = strongly_connected_components(g);
    std::reverse(comps.begin(), comps.end());  // topological order of the condensation

    std::vector<int> comp_of(n);
    for (std::size_t c = 0; c < comps.size(); ++c)
        for (int v : comps[c]) comp_of[v] = static_cast<int>(c);

    std::vector<char> has_incoming(comps.size(), 0);
    for (const auto& e : g.edges())
        if (comp_of[e.source] != comp_of[e.target]) has_incoming[comp_of[e.target]] = 1;

    ReachDecomposition rd;
    auto out = g.out_neighbors();
    // closed components ordered by their smallest node, so reach ids do not depend on Tarjan's visit order
    std::vector<std::size_t> closed;
    for (std::size_t c = 0; c < comps.size(); ++c)
        if (!has_incoming[c]) closed.push_back(c);
    std::sort(closed.begin(), closed.end(),
              [&](std::size_t a, std::size_t b) { return comps[a].front() < comps[b].front(); });
    for (std::size_t c : closed) {
        auto seen = bfs_from(out, comps[c].front());
        std::vector<int> reach;
        for (int v = 0; v < n; ++v)
            if (seen[v]) reach.push_back(v);
        rd.reaches.push_back(std::move(reach));
        rd.roots.push_back(comps[c]);
    }
    rd.chi = static_cast<int>(rd.roots.size());

    std::vector<int> membership(n, 0);
    for (const auto& r : rd.reaches)
        for (int v : r) ++membership[v];
    for (const auto& r : rd.reaches) {
        std::vector<int> h, c;
        for (int v : r) (membership[v] == 1 ? h : c).push_back(v);
        rd.exclusive.push_back(std::move(h));
        rd.common.push_back(std::move(c));
    }

    for (std::size_t c : closed) {
        rd.scc_order.insert(rd.scc_order.end(), comps[c].begin(), comps[c].end());
        rd.block_sizes.push_back(static_cast<int>(comps[c].size()));
    }
    for (std::size_t c = 0; c < comps.size(); ++c) {
        if (!has_incoming[c]) continue;
        rd.scc_order.insert(rd.scc_order.end(), comps[c].begin(), comps[c].end());
        rd.block_sizes.push_back(static_cast<int>(comps[c].size()));
    }
    return rd;
}

}  // namespace syncnet
