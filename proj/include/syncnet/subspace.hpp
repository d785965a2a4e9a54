#pragma once

#include "syncnet/graph.hpp"

#include <vector>

namespace syncnet {

/// Linear subspace of R^m held as an orthonormal basis (m x d, d may be 0).
class Subspace {
public:
    Subspace() = default;
    /// Trivial subspace of R^m.
    explicit Subspace(int ambient_dim);

    /// Column span of `cols`; directions with singular value below tol * sigma_max are dropped.
    static Subspace span(const Matrix& cols, double tol = 1e-10);
    /// Takes ownership of a basis that must already be orthonormal (checked to 1e-10).
    static Subspace from_orthonormal(Matrix basis);
    static Subspace whole(int ambient_dim);

    int ambient_dim() const { return m_; }
    int dim() const { return static_cast<int>(basis_.cols()); }
    bool trivial() const { return dim() == 0; }
    const Matrix& basis() const { return basis_; }
    Matrix projector() const { return basis_ * basis_.transpose(); }

    /// Projection residual of v, relative to max(1, |v|), below tol.
    bool contains(const Vector& v, double tol = 1e-9) const;
    bool contains(const Subspace& other, double tol = 1e-9) const;
    bool equals(const Subspace& other, double tol = 1e-9) const;

    Subspace intersect(const Subspace& other) const;
    Subspace sum(const Subspace& other) const;
    /// Orthogonal complement of *this inside `parent` (parent ∩ this^⊥).
    Subspace complement_in(const Subspace& parent) const;
    Subspace orthogonal_complement() const;

private:
    int m_ = 0;
    Matrix basis_;
};

/// Orthogonal projection of x onto S.
Vector project(const Vector& x, const Subspace& S);

/// Span of the union of all spaces.
Subspace span_of(const std::vector<Subspace>& spaces);

/// Splits the inputs into pieces with pairwise trivial intersections whose dimensions add up to
/// the dimension of the joint span; every piece lies inside at least one input.
std::vector<Subspace> refine_to_direct_sum(const std::vector<Subspace>& spaces);

}  // namespace syncnet
