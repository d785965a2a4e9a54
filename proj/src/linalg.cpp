#include "syncnet/linalg.hpp"

#include "syncnet/errors.hpp"

#include <lapacke.h>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace syncnet {

namespace {

int rank_from_singular(const Vector& s, double tol) {
    if (s.size() == 0) return 0;
    double smax = s.maxCoeff();
    if (!(smax > 0.0)) return 0;
    int r = 0;
    for (Eigen::Index k = 0; k < s.size(); ++k)
        if (s(k) > tol * smax) ++r;
    return r;
}

void require_finite(const Matrix& m, const char* what) {
    if (!m.allFinite()) throw ValidationError(std::string(what) + ": matrix has non-finite entries");
}

// dgees takes a plain function pointer, so the threshold travels through thread-local state.
thread_local double g_select_tol = 0.0;
thread_local bool g_select_small = true;

lapack_logical select_eig(const double* wr, const double* wi) {
    bool small = std::hypot(*wr, *wi) < g_select_tol;
    return (small == g_select_small) ? 1 : 0;
}

}  // namespace

int rank(const Matrix& m, double tol) {
    if (!(tol > 0.0)) throw ParameterError("rank tolerance must be positive");
    if (m.size() == 0) return 0;
    require_finite(m, "rank");
    Eigen::JacobiSVD<Matrix> svd(m);
    return rank_from_singular(svd.singularValues(), tol);
}

Subspace nullspace(const Matrix& m, double tol) {
    if (!(tol > 0.0)) throw ParameterError("nullspace tolerance must be positive");
    const int n = static_cast<int>(m.cols());
    if (n == 0) return Subspace(0);
    if (m.rows() == 0) return Subspace::whole(n);
    require_finite(m, "nullspace");
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
    int r = rank_from_singular(svd.singularValues(), tol);
    return Subspace::from_orthonormal(svd.matrixV().rightCols(n - r));
}

Subspace range_space(const Matrix& m, double tol) {
    const int rows = static_cast<int>(m.rows());
    if (m.cols() == 0) return Subspace(rows);
    require_finite(m, "range_space");
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
    int r = rank_from_singular(svd.singularValues(), tol);
    return Subspace::from_orthonormal(svd.matrixU().leftCols(r));
}

double zero_eig_tol(const Matrix& m) { return 1e-8 * std::max(1.0, m.size() ? norm2(m) : 0.0); }

OrderedSchur ordered_schur(const Matrix& m, double tol, bool select_small) {
    if (m.rows() != m.cols()) throw DimensionError("ordered_schur: matrix must be square");
    const lapack_int n = static_cast<lapack_int>(m.rows());
    OrderedSchur out;
    if (n == 0) return out;
    require_finite(m, "ordered_schur");
    Matrix a = m;  // column major, overwritten with T
    Matrix vs(n, n);
    Vector wr(n), wi(n);
    lapack_int sdim = 0;
    g_select_tol = tol;
    g_select_small = select_small;
    lapack_int info = LAPACKE_dgees(LAPACK_COL_MAJOR, 'V', 'S', select_eig, n, a.data(), n, &sdim, wr.data(),
                                    wi.data(), vs.data(), n);
    if (info != 0) throw NumericalError("dgees failed with info = " + std::to_string(info));
    out.Q = std::move(vs);
    out.T = std::move(a);
    out.leading = static_cast<int>(sdim);
    return out;
}

EigenStructure eigenstructure(const Matrix& m, double tol) {
    if (m.rows() != m.cols()) throw DimensionError("eigenstructure: matrix must be square");
    const int n = static_cast<int>(m.rows());
    if (tol <= 0.0) tol = zero_eig_tol(m);
    EigenStructure es;
    if (n == 0) return es;
    require_finite(m, "eigenstructure");
    Eigen::EigenSolver<Matrix> solver(m, false);
    if (solver.info() != Eigen::Success) throw NumericalError("eigenvalue computation did not converge");
    es.eigenvalues = solver.eigenvalues();
    for (Eigen::Index k = 0; k < es.eigenvalues.size(); ++k)
        if (std::abs(es.eigenvalues(k)) < tol) ++es.zero_alg_mult;
    es.zero_geo_mult = nullspace(m).dim();

    auto zero = ordered_schur(m, tol, true);
    auto rest = ordered_schur(m, tol, false);
    es.zero_generalized_space = Subspace::from_orthonormal(zero.Q.leftCols(zero.leading));
    es.nonzero_invariant_space = Subspace::from_orthonormal(rest.Q.leftCols(rest.leading));
    if (zero.leading + rest.leading != n)
        throw NumericalError("eigenstructure: invariant subspaces do not split the space");
    return es;
}

KernelBasis kernel_basis_by_reaches(const Matrix& L, const ReachDecomposition& rd) {
    const int n = static_cast<int>(L.rows());
    if (L.cols() != n) throw DimensionError("kernel_basis_by_reaches: Laplacian must be square");
    KernelBasis kb;
    Vector total = Vector::Zero(n);
    const double scale = std::max(1.0, L.cwiseAbs().maxCoeff());

    for (std::size_t i = 0; i < rd.reaches.size(); ++i) {
        const auto& H = rd.exclusive[i];
        const auto& C = rd.common[i];
        Vector v = Vector::Zero(n);
        for (int h : H) {
            if (h < 0 || h >= n) throw DimensionError("reach decomposition does not match the Laplacian");
            v(h) = 1.0;
        }
        if (!C.empty()) {
            const auto nc = static_cast<Eigen::Index>(C.size());
            Matrix lcc(nc, nc);
            Vector rhs = Vector::Zero(nc);
            for (Eigen::Index a = 0; a < nc; ++a) {
                for (Eigen::Index b = 0; b < nc; ++b) lcc(a, b) = L(C[a], C[b]);
                for (int h : H) rhs(a) -= L(C[a], h);
            }
            Eigen::ColPivHouseholderQR<Matrix> qr(lcc);
            if (qr.rank() < nc) throw NumericalError("common-part system is singular for reach " + std::to_string(i + 1));
            Vector vc = qr.solve(rhs);
            for (Eigen::Index a = 0; a < nc; ++a) v(C[a]) = vc(a);
        }

        std::vector<char> in_reach(n, 0);
        for (int s : rd.reaches[i]) in_reach[s] = 1;
        for (int s = 0; s < n; ++s)
            if (!in_reach[s] && std::abs(v(s)) > 1e-9) throw NumericalError("kernel vector nonzero outside its reach");
        for (int c : C)
            if (!(v(c) > -1e-9 && v(c) < 1.0 + 1e-9))
                throw NumericalError("kernel vector entry on a common node lies outside (0, 1)");
        if ((L * v).cwiseAbs().maxCoeff() > 1e-9 * scale) throw NumericalError("kernel vector is not in Ker(L)");
        total += v;
        kb.vectors.push_back(std::move(v));
        kb.reach_ids.push_back(static_cast<int>(i));
    }
    if (n > 0 && (total - Vector::Ones(n)).cwiseAbs().maxCoeff() > 1e-9)
        throw NumericalError("kernel vectors do not sum to the all-ones vector");
    return kb;
}

Vector left_null_unit(const Matrix& Lblock) {
    if (Lblock.rows() == 0 || Lblock.rows() != Lblock.cols())
        throw DimensionError("left_null_unit: block must be square and non-empty");
    Subspace ns = nullspace(Lblock.transpose());
    if (ns.dim() != 1)
        throw ValidationError("left_null_unit: block has a " + std::to_string(ns.dim()) +
                              "-dimensional left null space; it is not irreducible");
    Vector v = ns.basis().col(0);
    double s = v.sum();
    if (std::abs(s) < 1e-14) throw ValidationError("left_null_unit: null vector cannot be normalized");
    v /= s;
    if (v.minCoeff() <= 1e-12) throw ValidationError("left_null_unit: null vector is not strictly positive");
    return v;
}

std::vector<Vector> beta_vectors(const Matrix& L, const ReachDecomposition& rd) {
    const auto n = L.rows();
    std::vector<Vector> out;
    for (const auto& root : rd.roots) {
        const auto k = static_cast<Eigen::Index>(root.size());
        Matrix block(k, k);
        for (Eigen::Index a = 0; a < k; ++a)
            for (Eigen::Index b = 0; b < k; ++b) block(a, b) = L(root[a], root[b]);
        Vector local = left_null_unit(block);
        Vector beta = Vector::Zero(n);
        for (Eigen::Index a = 0; a < k; ++a) beta(root[a]) = local(a);
        out.push_back(std::move(beta));
    }
    return out;
}

Matrix delta_projector(const Matrix& L, const ReachDecomposition& rd) {
    const auto n = L.rows();
    auto gammas = kernel_basis_by_reaches(L, rd).vectors;
    auto betas = beta_vectors(L, rd);
    Matrix M = Matrix::Identity(n, n);
    for (std::size_t j = 0; j < gammas.size(); ++j) M -= gammas[j] * betas[j].transpose();
    return M;
}

Subspace delta_constraint_space(const Matrix& L, const ReachDecomposition& rd, int n) {
    auto betas = beta_vectors(L, rd);
    const auto N = L.rows();
    Matrix stacked(static_cast<Eigen::Index>(betas.size()) * n, N * n);
    Matrix eye = Matrix::Identity(n, n);
    for (std::size_t j = 0; j < betas.size(); ++j)
        stacked.middleRows(static_cast<Eigen::Index>(j) * n, n) = kron(betas[j].transpose(), eye);
    return nullspace(stacked);
}

Matrix difference_operator(int N) {
    if (N < 1) throw DimensionError("difference operator needs N >= 1");
    Matrix d(N - 1, N);
    d.col(0).setOnes();
    d.rightCols(N - 1) = -Matrix::Identity(N - 1, N - 1);
    return d;
}

Matrix reduced_laplacian(const Matrix& L) {
    const int N = static_cast<int>(L.rows());
    if (L.cols() != N) throw DimensionError("reduced_laplacian: Laplacian must be square");
    if (N < 2) throw DimensionError("reduced_laplacian needs N >= 2");
    Matrix delta = Matrix::Zero(N, N);
    delta(0, 0) = 1.0;
    delta.bottomRows(N - 1) = difference_operator(N);
    Matrix dld = delta * L * delta;
    double scale = std::max(1.0, L.cwiseAbs().maxCoeff());
    if (dld.bottomLeftCorner(N - 1, 1).cwiseAbs().maxCoeff() > 1e-9 * scale)
        throw NumericalError("reduced_laplacian: lower-left block of the transformed Laplacian is not zero");
    return dld.bottomRightCorner(N - 1, N - 1);
}

ProjectionConstants projection_constants(const Matrix& T, const std::vector<int>& block_dims) {
    const int n = static_cast<int>(T.rows());
    if (T.cols() != n || n == 0) throw DimensionError("projection_constants: T must be square and non-empty");
    int total = 0;
    for (int d : block_dims) {
        if (d <= 0) throw DimensionError("projection_constants: block sizes must be positive");
        total += d;
    }
    if (total != n) throw DimensionError("projection_constants: block sizes do not add up to the size of T");
    Eigen::JacobiSVD<Matrix> svd(T);
    const Vector& s = svd.singularValues();
    if (!(s(n - 1) > 1e-12 * s(0))) throw NumericalError("projection_constants: T is singular");
    Matrix tinv = T.inverse();
    double smin_inv = 1.0 / s(0);  // σ_min(T⁻¹) = 1 / σ_max(T)
    double best = 0.0;
    int offset = 0;
    for (int d : block_dims) {
        best = std::max(best, norm2(tinv.middleRows(offset, d)));
        offset += d;
    }
    return ProjectionConstants{best / smin_inv};
}

int observability_rank(const Matrix& C, const Matrix& A) {
    const auto n = A.rows();
    if (A.cols() != n) throw DimensionError("observability_rank: A must be square");
    if (C.cols() != n) throw DimensionError("observability_rank: C and A are incompatible");
    if (C.rows() == 0 || n == 0) return 0;
    Matrix obs(C.rows() * n, n);
    Matrix block = C;
    for (Eigen::Index k = 0; k < n; ++k) {
        obs.middleRows(k * C.rows(), C.rows()) = block;
        block = block * A;
    }
    return rank(obs);
}

Matrix expm(const Matrix& m) {
    if (m.rows() != m.cols()) throw DimensionError("expm: matrix must be square");
    if (m.size() == 0) return m;
    Matrix out = m.exp();
    if (!out.allFinite()) throw NumericalError("matrix exponential overflowed");
    return out;
}

double norm2(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

double log_norm(const Matrix& m) {
    if (m.rows() != m.cols()) throw DimensionError("log_norm: matrix must be square");
    Matrix sym = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

}  // namespace syncnet
