#include "syncnet/subspace.hpp"

#include "syncnet/errors.hpp"
#include "syncnet/linalg.hpp"

#include <algorithm>
#include <utility>

namespace syncnet {

namespace {

// Directions whose principal angle to both spaces is below this count as shared.
constexpr double kIntersectTol = 1e-8;

void same_ambient(const Subspace& a, const Subspace& b) {
    if (a.ambient_dim() != b.ambient_dim()) throw DimensionError("subspaces live in different ambient spaces");
}

}  // namespace

Subspace::Subspace(int ambient_dim) : m_(ambient_dim), basis_(ambient_dim, 0) {
    if (ambient_dim < 0) throw DimensionError("negative ambient dimension");
}

Subspace Subspace::span(const Matrix& cols, double tol) { return range_space(cols, tol); }

Subspace Subspace::from_orthonormal(Matrix basis) {
    Subspace s;
    s.m_ = static_cast<int>(basis.rows());
    if (basis.cols() > basis.rows()) throw DimensionError("basis has more columns than rows");
    if (basis.cols() > 0) {
        Matrix gram = basis.transpose() * basis;
        if ((gram - Matrix::Identity(basis.cols(), basis.cols())).cwiseAbs().maxCoeff() > 1e-10)
            throw ValidationError("subspace basis is not orthonormal");
    }
    s.basis_ = std::move(basis);
    return s;
}

Subspace Subspace::whole(int ambient_dim) { return from_orthonormal(Matrix::Identity(ambient_dim, ambient_dim)); }

bool Subspace::contains(const Vector& v, double tol) const {
    if (v.size() != m_) throw DimensionError("vector and subspace dimensions differ");
    Vector r = v - basis_ * (basis_.transpose() * v);
    return r.norm() <= tol * std::max(1.0, v.norm());
}

bool Subspace::contains(const Subspace& other, double tol) const {
    same_ambient(*this, other);
    for (Eigen::Index k = 0; k < other.basis_.cols(); ++k)
        if (!contains(Vector(other.basis_.col(k)), tol)) return false;
    return true;
}

bool Subspace::equals(const Subspace& other, double tol) const {
    return dim() == other.dim() && contains(other, tol) && other.contains(*this, tol);
}

Subspace Subspace::intersect(const Subspace& other) const {
    same_ambient(*this, other);
    if (trivial() || other.trivial()) return Subspace(m_);
    Matrix eye = Matrix::Identity(m_, m_);
    Matrix stacked(2 * m_, m_);
    stacked << eye - projector(), eye - other.projector();
    Eigen::JacobiSVD<Matrix> svd(stacked, Eigen::ComputeFullV);
    const Vector& s = svd.singularValues();
    int r = 0;
    for (Eigen::Index k = 0; k < s.size(); ++k)
        if (s(k) > kIntersectTol) ++r;
    return from_orthonormal(svd.matrixV().rightCols(m_ - r));
}

Subspace Subspace::sum(const Subspace& other) const {
    same_ambient(*this, other);
    Matrix cols(m_, dim() + other.dim());
    cols << basis_, other.basis_;
    return span(cols);
}

Subspace Subspace::complement_in(const Subspace& parent) const {
    same_ambient(*this, parent);
    if (parent.trivial()) return Subspace(m_);
    if (trivial()) return parent;
    // coordinates c with (parent * c) ⟂ this
    Matrix coupling = basis_.transpose() * parent.basis_;
    Eigen::JacobiSVD<Matrix> svd(coupling, Eigen::ComputeFullV);
    const Vector& s = svd.singularValues();
    int r = 0;
    for (Eigen::Index k = 0; k < s.size(); ++k)
        if (s(k) > kIntersectTol) ++r;
    Matrix coords = svd.matrixV().rightCols(parent.dim() - r);
    return from_orthonormal(parent.basis_ * coords);
}

Subspace Subspace::orthogonal_complement() const { return complement_in(whole(m_)); }

Vector project(const Vector& x, const Subspace& S) {
    if (x.size() != S.ambient_dim()) throw DimensionError("project: vector and subspace dimensions differ");
    return S.basis() * (S.basis().transpose() * x);
}

Subspace span_of(const std::vector<Subspace>& spaces) {
    if (spaces.empty()) throw DimensionError("span of an empty collection");
    Subspace acc(spaces.front().ambient_dim());
    for (const auto& s : spaces) acc = acc.sum(s);
    return acc;
}

std::vector<Subspace> refine_to_direct_sum(const std::vector<Subspace>& spaces) {
    if (spaces.empty()) return {};
    const int m = spaces.front().ambient_dim();
    for (const auto& s : spaces)
        if (s.ambient_dim() != m) throw DimensionError("refine_to_direct_sum: mixed ambient dimensions");

    std::vector<Subspace> pieces;
    for (const auto& S : spaces) {
        if (S.trivial()) continue;
        std::vector<Subspace> next;
        for (const auto& P : pieces) {
            Subspace shared = P.intersect(S);
            if (shared.trivial()) {
                next.push_back(P);
                continue;
            }
            next.push_back(shared);
            Subspace rest = shared.complement_in(P);
            if (!rest.trivial()) next.push_back(std::move(rest));
        }
        pieces = std::move(next);
        Subspace covered = pieces.empty() ? Subspace(m) : S.intersect(span_of(pieces));
        Subspace residual = covered.complement_in(S);
        if (!residual.trivial()) pieces.push_back(std::move(residual));
    }
    return pieces;
}

}  // namespace syncnet
