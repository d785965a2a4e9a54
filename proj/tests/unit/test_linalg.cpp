#include "oracles.hpp"

#include "syncnet/errors.hpp"
#include "syncnet/linalg.hpp"
#include "syncnet/scenarios.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace syncnet;
using Catch::Matchers::WithinAbs;

namespace {

Matrix L(const WeightedDigraph& g) { return laplacian(g); }

Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index k = 0;
    for (double x : v) out(k++) = x;
    return out;
}

}  // namespace

TEST_CASE("rank", "[linalg]") {
    Matrix La = L(examples::example1_a()), Lb = L(examples::example1_b());
    CHECK(syncnet::rank(La) == 1);
    CHECK(syncnet::rank(La) == oracle::gauss_rank(La));
    CHECK(syncnet::rank(Matrix::Zero(3, 3)) == 0);
    CHECK(syncnet::rank(La + Lb) == 3);
    CHECK(oracle::gauss_rank(La + Lb) == 3);
    CHECK(syncnet::rank(Matrix(0, 0)) == 0);
}

TEST_CASE("nullspace", "[linalg]") {
    Subspace kb = nullspace(L(examples::example1_b()));
    CHECK(kb.dim() == 2);
    CHECK(kb.contains(vec({0, 1, 0, 0})));
    CHECK(kb.contains(vec({0.5774, 0, 0.5774, 0.5774}), 1e-4));
    CHECK(kb.contains(vec({1, 0, 1, 1})));

    CHECK(nullspace(Matrix::Identity(4, 4)).trivial());

    Matrix La3 = L(examples::example3_a());
    Subspace ka = nullspace(La3);
    Subspace brute = Subspace::span(oracle::gauss_nullspace(La3));
    CHECK(ka.equals(brute));
    CHECK(ka.dim() == 2);
}

TEST_CASE("kernel basis by reaches", "[linalg]") {
    SECTION("two reaches sharing node 3") {
        auto g = examples::example4();
        auto kb = kernel_basis_by_reaches(L(g), reach_decomposition(g));
        REQUIRE(kb.vectors.size() == 2);
        CHECK((kb.vectors[0] - vec({1, 0, 0.5})).cwiseAbs().maxCoeff() < 1e-9);
        CHECK((kb.vectors[1] - vec({0, 1, 0.5})).cwiseAbs().maxCoeff() < 1e-9);
    }
    SECTION("strongly connected graph") {
        WeightedDigraph g(3, {{1, 0, 1.0}, {2, 1, 2.0}, {0, 2, 0.5}});
        auto kb = kernel_basis_by_reaches(L(g), reach_decomposition(g));
        REQUIRE(kb.vectors.size() == 1);
        CHECK((kb.vectors[0] - Vector::Ones(3)).cwiseAbs().maxCoeff() < 1e-12);
    }
    SECTION("three reaches spanning the listed kernel") {
        auto g = examples::example1_a();
        auto kb = kernel_basis_by_reaches(L(g), reach_decomposition(g));
        REQUIRE(kb.vectors.size() == 3);
        Matrix mine(4, 3), listed(4, 3);
        for (int k = 0; k < 3; ++k) mine.col(k) = kb.vectors[k];
        listed << 0, 0, 0.7071, 0, 0, 0.7071, 1, 0, 0, 0, 1, 0;
        CHECK(Subspace::span(mine).equals(Subspace::span(listed), 1e-4));
    }
}

TEST_CASE("kernel basis clauses on random graphs", "[linalg][property]") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> size(1, 8);
    for (int trial = 0; trial < 100; ++trial) {
        auto g = oracle::random_graph(rng, size(rng));
        Matrix Lg = L(g);
        auto rd = reach_decomposition(g);
        auto kb = kernel_basis_by_reaches(Lg, rd);
        Vector total = Vector::Zero(g.n());
        for (std::size_t r = 0; r < kb.vectors.size(); ++r) {
            const Vector& v = kb.vectors[r];
            CHECK((Lg * v).norm() < 1e-9);
            CHECK(v.minCoeff() >= -1e-12);
            for (int u : rd.exclusive[r]) CHECK_THAT(v(u), WithinAbs(1.0, 1e-9));
            for (std::size_t s = 0; s < kb.vectors.size(); ++s)
                if (s != r)
                    for (int u : rd.exclusive[s]) CHECK_THAT(v(u), WithinAbs(0.0, 1e-9));
            for (int u = 0; u < g.n(); ++u)
                if (!std::binary_search(rd.reaches[r].begin(), rd.reaches[r].end(), u))
                    CHECK_THAT(v(u), WithinAbs(0.0, 1e-9));
            total += v;
        }
        CHECK((total - Vector::Ones(g.n())).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("left null unit vector", "[linalg]") {
    CHECK(left_null_unit(Matrix::Zero(1, 1)) == Vector::Ones(1));
    Matrix two(2, 2);
    two << 1, -1, -1, 1;
    CHECK((left_null_unit(two) - vec({0.5, 0.5})).norm() < 1e-12);

    // cycle 1 -> 2 -> 3 -> 1 with weights 1, 2, 4
    WeightedDigraph cyc(3, {{1, 0, 1.0}, {2, 1, 2.0}, {0, 2, 4.0}});
    Matrix Lc = L(cyc);
    Vector w = left_null_unit(Lc);
    Vector brute = oracle::gauss_nullspace(Lc.transpose()).col(0);
    brute /= brute.sum();
    CHECK((w - brute).norm() < 1e-12);
    CHECK(w.minCoeff() > 0.0);
    CHECK_THAT(w.sum(), WithinAbs(1.0, 1e-12));

    CHECK_THROWS_AS(left_null_unit(L(examples::example4())), ValidationError);
}

TEST_CASE("reduced laplacian", "[linalg]") {
    WeightedDigraph g(2, {{1, 0, 2.5}});
    Matrix r = reduced_laplacian(L(g));
    REQUIRE(r.rows() == 1);
    CHECK_THAT(r(0, 0), WithinAbs(2.5, 1e-15));
    CHECK(reduced_laplacian(Matrix::Zero(4, 4)).isZero(0.0));

    Matrix La = L(examples::example5_a());
    Matrix D(4, 4);
    D << 1, 0, 0, 0, 1, -1, 0, 0, 1, 0, -1, 0, 1, 0, 0, -1;
    Matrix full = D * La * D;
    CHECK(full.block(1, 0, 3, 1).isZero(1e-14));
    CHECK((reduced_laplacian(La) - full.block(1, 1, 3, 3)).cwiseAbs().maxCoeff() < 1e-14);

    Matrix bad = Matrix::Zero(3, 3);
    bad(1, 0) = 1.0;  // row sum 1
    CHECK_THROWS(reduced_laplacian(bad));
}

TEST_CASE("eigenstructure", "[linalg]") {
    auto es = eigenstructure(Matrix::Identity(3, 3));
    CHECK(es.zero_alg_mult == 0);
    CHECK(es.nonzero_invariant_space.dim() == 3);

    Matrix nil(2, 2);
    nil << 0, 1, 0, 0;
    auto en = eigenstructure(nil);
    CHECK(en.zero_alg_mult == 2);
    CHECK(en.zero_geo_mult == 1);

    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        auto g = oracle::random_graph(rng, 6);
        auto e = eigenstructure(L(g));
        CHECK(e.zero_alg_mult == e.zero_geo_mult);
        CHECK(e.zero_generalized_space.dim() + e.nonzero_invariant_space.dim() == 6);
    }
}

TEST_CASE("projection constants", "[linalg]") {
    CHECK_THAT(projection_constants(Matrix::Identity(3, 3), {1, 2}).theta(1.7), WithinAbs(1.7, 1e-12));
    Matrix rot(2, 2);
    rot << std::cos(0.3), -std::sin(0.3), std::sin(0.3), std::cos(0.3);
    CHECK_THAT(projection_constants(rot, {1, 1}).theta(2.0), WithinAbs(2.0, 1e-12));
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 2.0;
    d(1, 1) = 0.5;
    CHECK_THAT(projection_constants(d, {1, 1}).theta(1.0), WithinAbs(4.0, 1e-12));
    CHECK_THAT(projection_constants(d, {1, 1}).phi(1.0, 3.0), WithinAbs(12.0, 1e-12));
    CHECK_THROWS_AS(projection_constants(Matrix::Zero(2, 2), {1, 1}), NumericalError);
    CHECK_THROWS_AS(projection_constants(Matrix::Identity(2, 2), {1}), DimensionError);
}

TEST_CASE("observability rank", "[linalg]") {
    std::mt19937_64 rng(5);
    Matrix A = oracle::random_matrix(rng, 4, 4);
    CHECK(observability_rank(Matrix::Identity(4, 4), A) == 4);
    CHECK(observability_rank(Matrix::Zero(2, 4), A) == 0);

    // (B^T P, A) with P = I for the partial-state agent model
    Matrix A5 = examples::example5_A(), B5 = examples::example5_B();
    Matrix C = B5.transpose();
    Matrix O(6, 3);
    O << C, C * A5, C * A5 * A5;
    CHECK(observability_rank(C, A5) == oracle::gauss_rank(O));
    CHECK(observability_rank(C, A5) == 2);
}

TEST_CASE("matrix exponential and norms", "[linalg]") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        Matrix m = oracle::random_matrix(rng, 5, 5, -2.0, 2.0);
        Matrix ref = oracle::expm(m);
        CHECK((expm(m) - ref).norm() <= 1e-10 * ref.norm());
    }
    Matrix m(2, 2);
    m << 1, 2, 0, 3;
    Eigen::JacobiSVD<Matrix> svd(m);
    CHECK_THAT(norm2(m), WithinAbs(svd.singularValues()(0), 1e-12));
    CHECK_THAT(log_norm(-Matrix::Identity(3, 3)), WithinAbs(-1.0, 1e-12));
    Matrix k = kron(Matrix::Identity(2, 2), m);
    CHECK(k.rows() == 4);
    CHECK(k.block(2, 2, 2, 2) == m);
    CHECK(k.block(0, 2, 2, 2).isZero(0.0));
}

TEST_CASE("delta projector against a brute-force assembly", "[linalg]") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 50; ++trial) {
        auto g = oracle::random_graph(rng, 6);
        Matrix M = delta_projector(L(g), reach_decomposition(g));
        CHECK((M - oracle::delta_matrix(g)).cwiseAbs().maxCoeff() < 1e-9);
        CHECK((M * M - M).cwiseAbs().maxCoeff() < 1e-9);
    }
}
