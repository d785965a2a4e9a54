#include "oracles.hpp"

#include "syncnet/errors.hpp"
#include "syncnet/graph.hpp"
#include "syncnet/linalg.hpp"
#include "syncnet/scenarios.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

using namespace syncnet;

namespace {

Matrix mat4(std::initializer_list<double> v) {
    Matrix m(4, 4);
    auto it = v.begin();
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) m(r, c) = *it++;
    return m;
}

std::set<int> as_set(const std::vector<int>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_CASE("construction rejects invalid graphs", "[graph]") {
    CHECK_THROWS_AS(WeightedDigraph(0, {}), ValidationError);
    CHECK_THROWS_AS(WeightedDigraph(2, {{0, 0, 1.0}}), ValidationError);
    CHECK_THROWS_AS(WeightedDigraph(2, {{0, 2, 1.0}}), ValidationError);
    CHECK_THROWS_AS(WeightedDigraph(2, {{0, 1, 0.0}}), ValidationError);
    CHECK_THROWS_AS(WeightedDigraph(2, {{0, 1, -1.0}}), ValidationError);
    CHECK_THROWS_AS(WeightedDigraph(2, {{0, 1, std::nan("")}}), ValidationError);
    CHECK_THROWS_AS(WeightedDigraph(2, {{0, 1, 1.0}, {0, 1, 2.0}}), ValidationError);
    CHECK_THROWS_AS(WeightedDigraph::from_one_based(2, {{0, 1, 1.0}}), ValidationError);
}

TEST_CASE("laplacian of the two-edge 4-node graph", "[graph]") {
    auto g = WeightedDigraph::from_one_based(4, {{2, 1, 1.2}, {4, 2, 0.7}});
    Matrix expected = mat4({0, 0, 0, 0, -1.2, 1.2, 0, 0, 0, 0, 0, 0, 0, -0.7, 0, 0.7});
    CHECK((laplacian(g) - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("laplacian of an edgeless graph is zero", "[graph]") {
    CHECK(laplacian(WeightedDigraph(5, {})).isZero(0.0));
}

TEST_CASE("laplacians of the kernel-intersection pair", "[graph]") {
    Matrix La = mat4({0, 0, 0, 0, -1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0});
    Matrix Lb = mat4({0, 0, 0, 0, 0, 0, 0, 0, -1, 0, 1, 0, 0, 0, -1, 1});
    CHECK(laplacian(examples::example1_a()) == La);
    CHECK(laplacian(examples::example1_b()) == Lb);
    CHECK(laplacian(union_graph({examples::example1_a(), examples::example1_b()})) == La + Lb);
}

TEST_CASE("union graph", "[graph]") {
    auto g = examples::example5_a();
    CHECK(laplacian(union_graph({g, g})) == 2.0 * laplacian(g));
    CHECK(has_directed_spanning_tree(union_graph({examples::example5_a(), examples::example5_b()})));
    CHECK(has_directed_spanning_tree(union_graph({examples::example1_a(), examples::example1_b()})));
    CHECK_THROWS_AS(union_graph({WeightedDigraph(3, {}), WeightedDigraph(4, {})}), DimensionError);
    CHECK_THROWS_AS(union_graph({}), DimensionError);
}

TEST_CASE("spanning tree edge cases", "[graph]") {
    CHECK_FALSE(has_directed_spanning_tree(WeightedDigraph(2, {})));
    CHECK(has_directed_spanning_tree(WeightedDigraph(1, {})));
    CHECK_FALSE(has_directed_spanning_tree(examples::example1_a()));
}

TEST_CASE("reach decomposition of the two-root 3-node graph", "[graph]") {
    auto rd = reach_decomposition(examples::example4());
    REQUIRE(rd.reaches.size() == 2);
    CHECK(rd.chi == 2);
    CHECK(rd.reaches[0] == std::vector<int>{0, 2});
    CHECK(rd.reaches[1] == std::vector<int>{1, 2});
    CHECK(rd.exclusive[0] == std::vector<int>{0});
    CHECK(rd.exclusive[1] == std::vector<int>{1});
    CHECK(rd.common[0] == std::vector<int>{2});
    CHECK(rd.common[1] == std::vector<int>{2});
}

TEST_CASE("reach decomposition of strongly connected and edgeless graphs", "[graph]") {
    WeightedDigraph cycle(3, {{1, 0, 1.0}, {2, 1, 1.0}, {0, 2, 1.0}});
    auto rd = reach_decomposition(cycle);
    REQUIRE(rd.reaches.size() == 1);
    CHECK(rd.reaches[0] == std::vector<int>{0, 1, 2});
    CHECK(rd.common[0].empty());

    auto rd0 = reach_decomposition(WeightedDigraph(3, {}));
    REQUIRE(rd0.reaches.size() == 3);
    for (int i = 0; i < 3; ++i) CHECK(rd0.reaches[i] == std::vector<int>{i});
}

TEST_CASE("strongly connected components", "[graph]") {
    // 1 <-> 2, 3 <- 2, 4 isolated
    WeightedDigraph g(4, {{1, 0, 1.0}, {0, 1, 1.0}, {2, 1, 1.0}});
    auto comps = strongly_connected_components(g);
    std::set<std::vector<int>> got(comps.begin(), comps.end());
    CHECK(got == std::set<std::vector<int>>{{0, 1}, {2}, {3}});
}

TEST_CASE("graph invariants on random graphs", "[graph][property]") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> size(1, 8);
    for (int trial = 0; trial < 200; ++trial) {
        auto g = oracle::random_graph(rng, size(rng));
        Matrix L = laplacian(g);
        const int N = g.n();
        CHECK((L * Vector::Ones(N)).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK((L - oracle::edge_laplacian(g)).cwiseAbs().maxCoeff() <= 1e-12);
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j)
                if (i != j) CHECK(L(i, j) <= 0.0);

        auto rd = reach_decomposition(g);
        CHECK(static_cast<int>(rd.reaches.size()) == N - oracle::gauss_rank(L));
        std::set<std::vector<int>> got(rd.reaches.begin(), rd.reaches.end());
        CHECK(got == oracle::reaches(g));
        CHECK(has_directed_spanning_tree(g) == (rd.reaches.size() == 1));
        CHECK(has_directed_spanning_tree(g) == oracle::spanning_tree(g));

        // H_i disjoint, C_i = R_i \ H_i, every node covered, no strict containment
        std::set<int> covered, excl_seen;
        for (std::size_t r = 0; r < rd.reaches.size(); ++r) {
            auto R = as_set(rd.reaches[r]);
            covered.insert(R.begin(), R.end());
            for (int v : rd.exclusive[r]) CHECK(excl_seen.insert(v).second);
            std::set<int> rebuilt = as_set(rd.exclusive[r]);
            for (int v : rd.common[r]) CHECK(rebuilt.insert(v).second);
            CHECK(rebuilt == R);
            for (int v : rd.exclusive[r])
                for (std::size_t s = 0; s < rd.reaches.size(); ++s)
                    if (s != r) CHECK_FALSE(as_set(rd.reaches[s]).count(v));
            for (std::size_t s = 0; s < rd.reaches.size(); ++s)
                if (s != r) {
                    auto S = as_set(rd.reaches[s]);
                    CHECK_FALSE(std::includes(S.begin(), S.end(), R.begin(), R.end()));
                }
        }
        CHECK(static_cast<int>(covered.size()) == N);

        // permuted Laplacian: block lower triangular, closed blocks first
        std::vector<int> perm = rd.scc_order;
        REQUIRE(static_cast<int>(perm.size()) == N);
        Matrix P(N, N);
        for (int a = 0; a < N; ++a)
            for (int b = 0; b < N; ++b) P(a, b) = L(perm[a], perm[b]);
        int offset = 0;
        std::vector<int> block_start;
        for (int size_b : rd.block_sizes) {
            block_start.push_back(offset);
            offset += size_b;
        }
        CHECK(offset == N);
        for (std::size_t b = 0; b < rd.block_sizes.size(); ++b) {
            int s0 = block_start[b], s1 = s0 + rd.block_sizes[b];
            CHECK(P.block(s0, s1, rd.block_sizes[b], N - s1).isZero(0.0));
            if (static_cast<int>(b) < rd.chi) {
                CHECK(P.block(s0, 0, rd.block_sizes[b], s0).isZero(0.0));
            } else {
                // a non-closed block has at least one incoming edge from an earlier block
                CHECK(P.block(s0, 0, rd.block_sizes[b], s0).minCoeff() < 0.0);
            }
        }
    }
}
