#include "syncnet/conditions.hpp"

#include "syncnet/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

namespace syncnet {

namespace {

constexpr int kGridPoints = 64;
constexpr double kDefectiveCond = 1e10;
constexpr double kBasisCondLimit = 1e8;

void require_square(const Matrix& m, const char* what) {
    if (m.rows() != m.cols()) throw DimensionError(std::string(what) + " must be square");
}

void require_positive_diagonal(const Matrix& m, const char* what) {
    require_square(m, what);
    Matrix off = m;
    off.diagonal().setZero();
    if (off.cwiseAbs().maxCoeff() > 0.0) throw ValidationError(std::string(what) + " must be diagonal");
    if (m.rows() == 0 || !(m.diagonal().minCoeff() > 0.0))
        throw ValidationError(std::string(what) + " must have strictly positive diagonal entries");
}

double spectral_abscissa(const Matrix& H) {
    if (H.size() == 0) return -std::numeric_limits<double>::infinity();
    Eigen::EigenSolver<Matrix> es(H, false);
    if (es.info() != Eigen::Success) throw NumericalError("eigenvalue computation did not converge");
    return es.eigenvalues().real().maxCoeff();
}

void validate_bound(const Matrix& H, const ExpGrowthBound& b, double t_grid_max) {
    for (int k = 0; k < kGridPoints; ++k) {
        double t = t_grid_max * k / (kGridPoints - 1);
        double lhs = norm2(expm(H * t));
        double rhs = b.upsilon * std::exp(b.xi * t) * (1.0 + 1e-6);
        if (lhs > rhs) {
            std::ostringstream os;
            os << "growth bound violated at t = " << t << ": |exp(Ht)| = " << lhs << " > " << rhs;
            throw NumericalError(os.str());
        }
    }
}

double cond2(const Matrix& m) {
    Eigen::JacobiSVD<Matrix> svd(m);
    const Vector& s = svd.singularValues();
    return s(s.size() - 1) > 0.0 ? s(0) / s(s.size() - 1) : std::numeric_limits<double>::infinity();
}

Matrix column_block(const std::vector<Subspace>& spaces) {
    int rows = spaces.empty() ? 0 : spaces.front().ambient_dim();
    int cols = 0;
    for (const auto& s : spaces) cols += s.dim();
    Matrix out(rows, cols);
    int c = 0;
    for (const auto& s : spaces) {
        out.middleCols(c, s.dim()) = s.basis();
        c += s.dim();
    }
    return out;
}

std::vector<int> dims_of(const std::vector<Subspace>& spaces) {
    std::vector<int> d;
    for (const auto& s : spaces)
        if (s.dim() > 0) d.push_back(s.dim());
    return d;
}

/// Projection factor of a decomposition given by `spaces`; `coords` maps ambient vectors to the
/// coordinates of the host space (identity when the host is the whole ambient space).
double decomposition_factor(const std::vector<Subspace>& spaces, const Matrix& coords) {
    std::vector<Subspace> nonempty;
    for (const auto& s : spaces)
        if (!s.trivial()) nonempty.push_back(s);
    if (nonempty.empty()) return 1.0;
    Matrix T = coords * column_block(nonempty);
    if (T.rows() != T.cols()) throw NumericalError("decomposition does not match the dimension of its host space");
    return projection_constants(T, dims_of(nonempty)).factor;
}

struct RangeModel {
    Subspace ran;
    Subspace ker;
    GraphBounds bounds;
};

RangeModel model_graph(int id, const Matrix& Lt, const Matrix& A, const Matrix& BK, double phi, double t_grid) {
    const int m = static_cast<int>(Lt.rows());
    const auto n = A.rows();
    RangeModel rm;
    rm.bounds.graph = id;
    double tol = zero_eig_tol(Lt);
    auto es = eigenstructure(Lt, tol);
    rm.ran = es.nonzero_invariant_space;
    rm.ker = es.zero_generalized_space;
    const int r = rm.ran.dim();
    rm.bounds.ran_dim = r;

    rm.bounds.h2 = best_growth_bound(A, t_grid);
    if (r == 0) {
        rm.bounds.h1 = rm.bounds.h2;
        rm.bounds.hurwitz = false;
        return rm;
    }

    auto h1_for = [&](const Matrix& Lhat) {
        Matrix eye_r = Matrix::Identity(Lhat.rows(), Lhat.rows());
        return Matrix(kron(eye_r, A) - phi * kron(Lhat, BK));
    };

    // orthonormal Schur basis of the range
    const Matrix& W = rm.ran.basis();
    Matrix H1 = h1_for(W.transpose() * Lt * W);
    ExpGrowthBound best = best_growth_bound(H1, t_grid);
    double best_cond = 1.0;

    // eigenvector basis when the nonzero spectrum is real and well conditioned
    Eigen::EigenSolver<Matrix> eig(Lt, true);
    if (eig.info() == Eigen::Success) {
        std::vector<Eigen::Index> keep;
        bool real = true;
        for (Eigen::Index k = 0; k < m; ++k) {
            auto lam = eig.eigenvalues()(k);
            if (std::abs(lam) < tol) continue;
            keep.push_back(k);
            if (std::abs(lam.imag()) > 1e-12 * std::max(1.0, std::abs(lam))) real = false;
        }
        if (real && static_cast<int>(keep.size()) == r) {
            Matrix V(m, r);
            Vector lam(r);
            for (int c = 0; c < r; ++c) {
                V.col(c) = eig.eigenvectors().col(keep[c]).real().normalized();
                lam(c) = eig.eigenvalues()(keep[c]).real();
            }
            double kv = cond2(V);
            if (kv < kBasisCondLimit && rm.ran.equals(Subspace::span(V), 1e-7)) {
                ExpGrowthBound diag = best_growth_bound(h1_for(lam.asDiagonal().toDenseMatrix()), t_grid);
                bool better = diag.xi < best.xi - 1e-9 ||
                              (std::abs(diag.xi - best.xi) <= 1e-9 && diag.upsilon * kv < best.upsilon * best_cond);
                if (better) {
                    best = diag;
                    best_cond = kv;
                }
            }
        }
    }
    rm.bounds.h1 = best;
    rm.bounds.basis_cond = best_cond;
    rm.bounds.hurwitz = spectral_abscissa(H1) < 0.0;
    rm.bounds.split_factor = decomposition_factor({rm.ran, rm.ker}, Matrix::Identity(m, m));
    (void)n;
    return rm;
}

struct WindowModel {
    std::vector<Subspace> pieces;
    double factor = 1.0;
    bool spans = false;
    /// [subspace][piece] -> (ħ, λ)
    std::vector<std::vector<std::pair<double, double>>> terms;
};

WindowModel model_window(const std::vector<int>& seq, const std::vector<RangeModel>& models, int m) {
    WindowModel wm;
    std::vector<int> distinct;
    for (int g : seq)
        if (std::find(distinct.begin(), distinct.end(), g) == distinct.end()) distinct.push_back(g);
    std::vector<Subspace> rans;
    for (int g : distinct) rans.push_back(models[g].ran);
    wm.pieces = refine_to_direct_sum(rans);
    int total = 0;
    for (const auto& p : wm.pieces) total += p.dim();
    wm.spans = total == m;
    const Matrix eye = Matrix::Identity(m, m);
    wm.factor = wm.spans ? decomposition_factor(wm.pieces, eye) : 1.0;

    for (std::size_t i = 0; i < wm.pieces.size(); ++i) {
        const Subspace& S = wm.pieces[i];
        std::vector<std::pair<double, double>> row;
        for (int g : seq) {
            const RangeModel& rm = models[g];
            const GraphBounds& gb = rm.bounds;
            double psi1 = gb.h1.upsilon * gb.basis_cond;
            if (rm.ran.dim() > 0 && rm.ran.contains(S)) {
                Matrix coords = rm.ran.basis().transpose();
                double f1 = decomposition_factor({S, S.complement_in(rm.ran)}, coords);
                std::vector<Subspace> inside;
                for (const auto& p : wm.pieces)
                    if (rm.ran.contains(p)) inside.push_back(p);
                Subspace rest = span_of(inside).complement_in(rm.ran);
                inside.push_back(rest);
                f1 = std::min(f1, decomposition_factor(inside, coords));
                row.emplace_back(f1 * psi1, gb.h1.xi);
            } else {
                double psi = rm.ran.dim() > 0 ? std::max(psi1, gb.h2.upsilon) : gb.h2.upsilon;
                double lam = rm.ran.dim() > 0 ? std::max(gb.h1.xi, gb.h2.xi) : gb.h2.xi;
                double f2 = decomposition_factor({S, S.orthogonal_complement()}, eye);
                if (wm.spans) f2 = std::min(f2, wm.factor);
                row.emplace_back(f2 * gb.split_factor * psi, lam);
            }
        }
        wm.terms.push_back(std::move(row));
    }
    return wm;
}

}  // namespace

std::string to_string(BoundMethod m) { return m == BoundMethod::LogNorm ? "log-norm" : "eigen-conditioning"; }

BoundMethod parse_bound_method(const std::string& s) {
    if (s == "log-norm") return BoundMethod::LogNorm;
    if (s == "eigen-conditioning") return BoundMethod::EigenConditioning;
    throw ParameterError("unknown bound method '" + s + "' (expected log-norm or eigen-conditioning)");
}

ExpGrowthBound exp_growth_bound(const Matrix& H, BoundMethod method, double t_grid_max) {
    require_square(H, "H");
    if (!(t_grid_max > 0.0)) throw ParameterError("t_grid_max must be positive");
    if (!H.allFinite()) throw ValidationError("H has non-finite entries");
    ExpGrowthBound b;
    b.method = method;
    if (H.size() == 0) return b;
    if (method == BoundMethod::LogNorm) {
        b.upsilon = 1.0;
        b.xi = log_norm(H);
    } else {
        Eigen::EigenSolver<Matrix> es(H, true);
        if (es.info() != Eigen::Success) throw NumericalError("eigen decomposition did not converge");
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(es.eigenvectors());
        const auto& s = svd.singularValues();
        double kappa = s(s.size() - 1) > 0.0 ? s(0) / s(s.size() - 1) : std::numeric_limits<double>::infinity();
        if (!std::isfinite(kappa) || kappa > kDefectiveCond)
            throw MethodError("matrix is defective or nearly so; eigen-conditioning bound does not apply");
        b.upsilon = std::max(1.0, kappa);
        b.xi = es.eigenvalues().real().maxCoeff();
    }
    validate_bound(H, b, t_grid_max);
    return b;
}

ExpGrowthBound best_growth_bound(const Matrix& H, double t_grid_max) {
    try {
        return exp_growth_bound(H, BoundMethod::EigenConditioning, t_grid_max);
    } catch (const MethodError&) {
    } catch (const NumericalError&) {
    }
    return exp_growth_bound(H, BoundMethod::LogNorm, t_grid_max);
}

ConditionReport theorem1_check(const Matrix& A, const Matrix& B, const Matrix& K, double phi,
                               const SwitchingSignal& sig, const std::vector<WeightedDigraph>& gs,
                               std::optional<double> gamma) {
    require_square(A, "A");
    const auto n = A.rows();
    if (B.rows() != n || K.cols() != n || K.rows() != B.cols()) throw DimensionError("A, B, K have incompatible shapes");
    if (!(phi > 0.0)) throw ParameterError("coupling strength phi must be positive");
    if (gamma && !(*gamma > 0.0 && *gamma < 1.0)) throw ParameterError("gamma must lie in (0, 1)");
    if (gs.empty()) throw DimensionError("no graphs supplied");
    const int N = gs.front().n();
    for (const auto& g : gs)
        if (g.n() != N) throw DimensionError("graphs have different node counts");
    if (N < 2) throw DimensionError("at least two agents are required");
    const int m = N - 1;
    const Matrix BK = B * K;
    const double t_grid = sig.t_max();

    ConditionReport rep;
    std::vector<RangeModel> models;
    for (std::size_t g = 0; g < gs.size(); ++g) {
        models.push_back(model_graph(static_cast<int>(g), reduced_laplacian(laplacian(gs[g])), A, BK, phi, t_grid));
        rep.graphs.push_back(models.back().bounds);
    }
    bool fatal = false;
    std::vector<char> used(gs.size(), 0);
    for (const auto& e : sig.schedule()) used.at(e.graph) = 1;
    for (const auto& rm : models) {
        if (!used[rm.bounds.graph] || rm.bounds.ran_dim == 0) continue;
        if (!rm.bounds.hurwitz) {
            fatal = true;
            std::ostringstream os;
            os << "graph " << rm.bounds.graph + 1 << ": I⊗A − φL̂⊗BK is not Hurwitz (xi = " << rm.bounds.h1.xi
               << "); choose K or phi so that the range dynamics are stable";
            rep.diagnosis.push_back(os.str());
        }
    }

    auto windows = sig.windows(gs);
    std::map<std::vector<int>, WindowModel> cache;
    struct Pending {
        int k;
        const WindowModel* wm;
        const Window* w;
    };
    std::vector<Pending> pending;
    double worst_factor = 1.0;
    for (std::size_t k = 0; k < windows.size(); ++k) {
        const Window& w = windows[k];
        if (!w.connected) {
            std::ostringstream os;
            os << "window " << k + 1 << " [" << w.start << ", " << w.end << "): union has no directed spanning tree";
            if (k + 1 == windows.size() && k > 0) {
                os << " (trailing remainder, skipped)";
            } else {
                fatal = true;
            }
            rep.diagnosis.push_back(os.str());
            continue;
        }
        std::vector<int> seq;
        for (const auto& p : w.pieces) seq.push_back(p.graph);
        auto it = cache.find(seq);
        if (it == cache.end()) it = cache.emplace(seq, model_window(seq, models, m)).first;
        const WindowModel& wm = it->second;
        if (!wm.spans) {
            fatal = true;
            std::ostringstream os;
            os << "window " << k + 1 << ": range spaces do not span the error space";
            rep.diagnosis.push_back(os.str());
        }
        worst_factor = std::max(worst_factor, wm.factor);
        pending.push_back({static_cast<int>(k), &wm, &w});
    }
    if (pending.empty()) {
        fatal = true;
        rep.diagnosis.push_back("no complete joint-connectivity window within the horizon");
    }

    rep.gamma_ceiling = 1.0 / (N * worst_factor);
    rep.gamma = gamma ? *gamma : 0.9 * rep.gamma_ceiling;
    if (gamma && *gamma >= rep.gamma_ceiling) {
        std::ostringstream os;
        os << "note: gamma = " << *gamma << " is above the admissible ceiling " << rep.gamma_ceiling;
        rep.diagnosis.push_back(os.str());
    }
    const double ln_gamma = std::log(rep.gamma);

    bool all_ok = true;
    for (const auto& p : pending) {
        for (std::size_t i = 0; i < p.wm->pieces.size(); ++i) {
            double lhs = 0.0;
            for (std::size_t j = 0; j < p.w->pieces.size(); ++j) {
                auto [hbar, lam] = p.wm->terms[i][j];
                const Segment& seg = p.w->pieces[j];
                lhs += std::log(hbar) + lam * (seg.t1 - seg.t0);
                rep.hbar_values.push_back(hbar);
            }
            ConditionRow row{p.k, static_cast<int>(i), lhs, ln_gamma, lhs < ln_gamma};
            all_ok = all_ok && row.ok;
            rep.per_window.push_back(row);
        }
    }
    rep.satisfied = all_ok && !fatal;
    return rep;
}

double dwell_time_lower_bound(const std::vector<double>& hbar_terms, double lambda_neg, double gamma) {
    if (!(lambda_neg < 0.0)) throw ParameterError("dwell-time bound needs a negative decay rate");
    if (!(gamma > 0.0 && gamma < 1.0)) throw ParameterError("gamma must lie in (0, 1)");
    double s = 0.0;
    for (double h : hbar_terms) {
        if (!(h > 0.0)) throw ParameterError("hbar terms must be positive");
        s += std::log(h);
    }
    return (s - std::log(gamma)) / (-lambda_neg);
}

Assumption5Result check_assumption5(const Matrix& A, const Matrix& B, const Matrix& P, double tol) {
    require_square(A, "A");
    require_square(P, "P");
    const auto n = A.rows();
    if (P.rows() != n || B.rows() != n) throw DimensionError("A, B, P have incompatible shapes");
    if ((P - P.transpose()).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, P.cwiseAbs().maxCoeff()))
        throw ValidationError("P is not symmetric");
    Eigen::LLT<Matrix> llt(P);
    if (llt.info() != Eigen::Success) throw ValidationError("P is not positive definite");
    Matrix lyap = A.transpose() * P + P * A;
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (lyap + lyap.transpose()), Eigen::EigenvaluesOnly);
    Assumption5Result r;
    r.n = static_cast<int>(n);
    r.lyapunov_max_eig = es.eigenvalues().maxCoeff();
    r.observability = observability_rank(B.transpose() * P, A);
    double scale = std::max(1.0, norm2(P) * norm2(A));
    r.ok = r.lyapunov_max_eig <= tol * scale && r.observability == r.n;
    return r;
}

AlphaResult alpha_for_constrained_subspace(const Matrix& L, const Matrix& Xi, const Matrix& Gamma,
                                           const Subspace& constraint) {
    require_square(L, "L");
    require_positive_diagonal(Xi, "Xi");
    require_positive_diagonal(Gamma, "Gamma");
    const auto N = L.rows();
    const auto n = Gamma.rows();
    if (Xi.rows() != N) throw DimensionError("Xi and L differ in size");
    if (constraint.ambient_dim() != N * n) throw DimensionError("constraint subspace has the wrong ambient dimension");
    if (constraint.trivial()) return {std::numeric_limits<double>::infinity(), true};
    const Matrix& U = constraint.basis();
    Matrix S = kron(Xi * L + L.transpose() * Xi, Matrix::Identity(n, n));
    Matrix G = kron(Xi, Gamma);
    Matrix Sr = U.transpose() * S * U;
    Matrix Gr = U.transpose() * G * U;
    Sr = 0.5 * (Sr + Sr.transpose());
    Gr = 0.5 * (Gr + Gr.transpose());
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> ges(Sr, Gr, Eigen::EigenvaluesOnly);
    if (ges.info() != Eigen::Success) throw NumericalError("generalized eigenproblem failed");
    return {ges.eigenvalues().minCoeff(), false};
}

SampleCheck lipschitz_projection_check(const AgentMap& f, const Matrix& M, int sample_count, const Box& box,
                                       double rho_bar, std::uint64_t seed) {
    require_square(M, "M");
    if (!(rho_bar > 0.0)) throw ParameterError("rho_bar must be positive");
    if (sample_count <= 0) throw ParameterError("sample_count must be positive");
    const int n = box.dim();
    if (n == 0 || M.rows() % n != 0) throw DimensionError("projector size is not a multiple of the agent dimension");
    if ((M * M - M).cwiseAbs().maxCoeff() > 1e-9) throw ValidationError("M is not a projector (M² ≠ M)");
    const int N = static_cast<int>(M.rows() / n);
    std::mt19937_64 rng(seed);
    SampleCheck out;
    for (int s = 0; s < sample_count; ++s) {
        Vector x = sample_stacked(box, N, rng);
        Vector F(x.size());
        for (int i = 0; i < N; ++i) F.segment(i * n, n) = f(0.0, x.segment(i * n, n));
        double den = (M * x).norm();
        ++out.samples;
        if (den <= 1e-12) continue;
        double ratio = (M * F).norm() / den;
        if (ratio > out.worst) out.worst = ratio;
        if (ratio > rho_bar * (1.0 + 1e-12) && out.ok) {
            out.ok = false;
            out.witness_x = x;
        }
    }
    return out;
}

SampleCheck quad_inverse_check(const AgentMap& f, const Matrix& Q, const Matrix& Sigma, int sample_count,
                               const Box& box, std::uint64_t seed) {
    require_positive_diagonal(Q, "Q");
    require_positive_diagonal(Sigma, "Sigma");
    const int n = box.dim();
    if (Q.rows() != n || Sigma.rows() != n) throw DimensionError("Q, Sigma and the box differ in dimension");
    if (sample_count <= 0) throw ParameterError("sample_count must be positive");
    std::mt19937_64 rng(seed);
    SampleCheck out;
    out.worst = std::numeric_limits<double>::infinity();
    for (int s = 0; s < sample_count; ++s) {
        Vector x = box.sample(rng), y = box.sample(rng);
        Vector d = x - y;
        double dd = d.squaredNorm();
        ++out.samples;
        if (dd <= 1e-24) continue;
        double v = d.dot(Q * (f(0.0, x) - f(0.0, y) - Sigma * d)) / dd;
        out.worst = std::min(out.worst, v);
        if (v < -1e-12 && out.ok) {
            out.ok = false;
            out.witness_x = x;
            out.witness_y = y;
        }
    }
    return out;
}

SampleCheck quad_inverse_jacobian_check(const AgentMap& f, const AgentJacobian& jac, const Matrix& Q,
                                        const Matrix& Sigma, int sample_count, const Box& box, std::uint64_t seed) {
    require_positive_diagonal(Q, "Q");
    require_positive_diagonal(Sigma, "Sigma");
    const int n = box.dim();
    if (Q.rows() != n || Sigma.rows() != n) throw DimensionError("Q, Sigma and the box differ in dimension");
    if (sample_count <= 0) throw ParameterError("sample_count must be positive");
    std::mt19937_64 rng(seed);
    SampleCheck out;
    out.worst = std::numeric_limits<double>::infinity();
    for (int s = 0; s < sample_count; ++s) {
        Vector x = box.sample(rng);
        Matrix J = jacobian(f, jac, 0.0, x);
        Matrix S = Q * J + J.transpose() * Q - 2.0 * Q * Sigma;
        Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (S + S.transpose()), Eigen::EigenvaluesOnly);
        double lmin = es.eigenvalues().minCoeff();
        ++out.samples;
        out.worst = std::min(out.worst, lmin);
        if (lmin < -1e-9 && out.ok) {
            out.ok = false;
            out.witness_x = x;
        }
    }
    return out;
}

double sampled_lipschitz(const AgentMap& f, const AgentJacobian& jac, int sample_count, const Box& box,
                         std::uint64_t seed) {
    if (sample_count <= 0) throw ParameterError("sample_count must be positive");
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (int s = 0; s < sample_count; ++s) worst = std::max(worst, norm2(jacobian(f, jac, 0.0, box.sample(rng))));
    return worst;
}

PhiThreshold phi_threshold(double alpha, double c, double c_prime, double rho, double rho_bar, double gamma_min,
                           double t_min, double t_max, double hbar, double gamma) {
    if (!(alpha > 0.0)) throw ParameterError("alpha must be positive");
    if (!(gamma_min > 0.0)) throw ParameterError("gamma_min must be positive");
    if (!(gamma > 0.0 && gamma < 1.0)) throw ParameterError("gamma must lie in (0, 1)");
    if (!(t_min > 0.0) || !(t_max >= t_min)) throw ParameterError("need 0 < t_min <= t_max");
    if (!(hbar > 0.0)) throw ParameterError("hbar must be positive");
    PhiThreshold p{0.0, alpha, c, c_prime, rho, rho_bar, gamma_min, t_min, t_max, hbar, gamma};
    double growth = std::max(rho * c + c_prime, rho_bar);
    p.phi_star = 2.0 * ((t_max / t_min) * std::log(hbar) + growth * t_max - std::log(gamma)) / (alpha * gamma_min * t_min);
    return p;
}

double phi_inequality_lhs(const PhiThreshold& p, double phi) {
    double growth = std::max(p.rho * p.c + p.c_prime, p.rho_bar);
    return (p.t_max / p.t_min) * std::log(p.hbar) - 0.5 * phi * p.alpha * p.gamma_min * p.t_min + growth * p.t_max;
}

NonlinearConstants nonlinear_constants(const std::vector<WeightedDigraph>& gs, const Matrix& Gamma,
                                       const std::vector<Matrix>& Xi) {
    if (gs.empty()) throw DimensionError("no graphs supplied");
    require_positive_diagonal(Gamma, "Gamma");
    if (!Xi.empty() && Xi.size() != gs.size()) throw DimensionError("one Xi per graph is required");
    const int n = static_cast<int>(Gamma.rows());
    NonlinearConstants out;
    out.alpha = std::numeric_limits<double>::infinity();
    out.c = 0.0;
    out.c_prime = -std::numeric_limits<double>::infinity();
    for (std::size_t g = 0; g < gs.size(); ++g) {
        Matrix L = laplacian(gs[g]);
        const auto N = L.rows();
        Matrix xi = Xi.empty() ? Matrix(Matrix::Identity(N, N)) : Xi[g];
        require_positive_diagonal(xi, "Xi");
        auto rd = reach_decomposition(gs[g]);
        auto a = alpha_for_constrained_subspace(L, xi, Gamma, delta_constraint_space(L, rd, n));
        out.alpha_per_graph.push_back(a.alpha);
        out.alpha = std::min(out.alpha, a.alpha);
        double xmax = xi.diagonal().maxCoeff(), xmin = xi.diagonal().minCoeff();
        out.c = std::max(out.c, xmax / xmin);
        Matrix sym = kron(xi * L + L.transpose() * xi, Gamma);
        Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (sym + sym.transpose()), Eigen::EigenvaluesOnly);
        out.c_prime = std::max(out.c_prime, es.eigenvalues().maxCoeff() / xmin);
    }
    return out;
}

DesyncThreshold desync_phi_threshold(const std::vector<WeightedDigraph>& gs, const Matrix& Gamma, const Matrix& Q,
                                     const Matrix& Sigma, const std::vector<Matrix>& Xi) {
    if (gs.empty()) throw DimensionError("no graphs supplied");
    require_positive_diagonal(Gamma, "Gamma");
    require_positive_diagonal(Q, "Q");
    require_positive_diagonal(Sigma, "Sigma");
    if (Q.rows() != Gamma.rows() || Sigma.rows() != Gamma.rows()) throw DimensionError("Gamma, Q, Sigma differ in size");
    if (!Xi.empty() && Xi.size() != gs.size()) throw DimensionError("one Xi per graph is required");
    DesyncThreshold d;
    d.epsilon = (Sigma.diagonal().array() / Q.diagonal().array()).minCoeff();
    d.gamma_max = Gamma.diagonal().maxCoeff();
    d.alpha = -std::numeric_limits<double>::infinity();
    for (std::size_t g = 0; g < gs.size(); ++g) {
        Matrix Lt = reduced_laplacian(laplacian(gs[g]));
        const auto m = Lt.rows();
        Matrix xi = Xi.empty() ? Matrix(Matrix::Identity(m, m)) : Xi[g];
        require_positive_diagonal(xi, "Xi");
        if (xi.rows() != m) throw DimensionError("Xi must match the reduced Laplacian size");
        Vector s = xi.diagonal().cwiseSqrt().cwiseInverse();
        Matrix W = s.asDiagonal() * (xi * Lt + Lt.transpose() * xi) * s.asDiagonal();
        Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (W + W.transpose()), Eigen::EigenvaluesOnly);
        d.alpha = std::max(d.alpha, es.eigenvalues().maxCoeff());
    }
    d.phi_star = d.alpha > 0.0 ? 2.0 * d.epsilon / (d.alpha * d.gamma_max) : std::numeric_limits<double>::infinity();
    return d;
}

}  // namespace syncnet
