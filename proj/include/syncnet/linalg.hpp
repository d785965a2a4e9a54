#pragma once

#include "syncnet/graph.hpp"
#include "syncnet/subspace.hpp"

#include <complex>
#include <vector>

namespace syncnet {

using ComplexVector = Eigen::VectorXcd;

constexpr double kRankTol = 1e-10;

/// Numerical rank: singular values above tol * sigma_max. Empty matrices have rank 0.
int rank(const Matrix& m, double tol = kRankTol);

/// Orthonormal basis of the right null space (same threshold rule as rank).
Subspace nullspace(const Matrix& m, double tol = kRankTol);

/// Orthonormal basis of the column space.
Subspace range_space(const Matrix& m, double tol = kRankTol);

/// Default zero-eigenvalue threshold: 1e-8 * max(1, sigma_max(m)).
double zero_eig_tol(const Matrix& m);

struct EigenStructure {
    ComplexVector eigenvalues;
    int zero_alg_mult = 0;
    int zero_geo_mult = 0;
    Subspace zero_generalized_space;   ///< invariant subspace of eigenvalues with |λ| < tol
    Subspace nonzero_invariant_space;  ///< invariant subspace of the remaining eigenvalues
};

/// tol <= 0 selects zero_eig_tol(m).
EigenStructure eigenstructure(const Matrix& m, double tol = -1.0);

/// Real Schur form Q T Qᵀ = m with the eigenvalues satisfying |λ| < tol (select_small) or
/// |λ| >= tol (otherwise) moved to the leading block. Returns Q and the size of that block.
struct OrderedSchur {
    Matrix Q;
    Matrix T;
    int leading = 0;
};
OrderedSchur ordered_schur(const Matrix& m, double tol, bool select_small);

struct KernelBasis {
    std::vector<Vector> vectors;  ///< one per reach, aligned with reach_ids
    std::vector<int> reach_ids;
};

KernelBasis kernel_basis_by_reaches(const Matrix& L, const ReachDecomposition& rd);

/// Positive left null vector of an irreducible Laplacian block, normalized to sum 1.
Vector left_null_unit(const Matrix& Lblock);

/// β_j: left null vector of L supported on the closed SCC generating reach j, entries summing to 1.
std::vector<Vector> beta_vectors(const Matrix& L, const ReachDecomposition& rd);

/// M = I_N − Σ_j γ_j β_jᵀ at graph level (agents use M ⊗ I_n).
Matrix delta_projector(const Matrix& L, const ReachDecomposition& rd);

/// {δ ∈ R^{Nn} : (β_jᵀ ⊗ I_n) δ = 0 for every j}.
Subspace delta_constraint_space(const Matrix& L, const ReachDecomposition& rd, int n);

/// Lower-right (N-1)x(N-1) block of Δ L Δ with Δ = [[1, 0], [1, -I]].
Matrix reduced_laplacian(const Matrix& L);

/// Δ̄ = [1_{N-1}, -I_{N-1}], the (N-1) x N difference operator.
Matrix difference_operator(int N);

struct ProjectionConstants {
    /// max_i σ_max(M_i T⁻¹) / σ_min(T⁻¹); never below 1.
    double factor = 1.0;
    double theta(double psi) const { return factor * psi; }
    /// `ratio` is the caller's bound on max_i |x0| / |x_i^UB(0)|.
    double phi(double psi, double ratio = 1.0) const { return factor * psi * ratio; }
};

ProjectionConstants projection_constants(const Matrix& T, const std::vector<int>& block_dims);

/// Rank of [C; CA; ...; CA^{n-1}].
int observability_rank(const Matrix& C, const Matrix& A);

/// Matrix exponential.
Matrix expm(const Matrix& m);

/// Spectral norm.
double norm2(const Matrix& m);

/// Largest eigenvalue of the symmetric part (H + Hᵀ)/2.
double log_norm(const Matrix& m);

Matrix kron(const Matrix& a, const Matrix& b);

}  // namespace syncnet
