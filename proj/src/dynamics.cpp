#include "syncnet/dynamics.hpp"

#include "syncnet/errors.hpp"

namespace syncnet {

Matrix finite_difference_jacobian(const AgentMap& f, double t, const Vector& x) {
    const double h = 1e-6 * (1.0 + x.norm());
    const auto n = x.size();
    Matrix J(n, n);
    Vector xp = x, xm = x;
    for (Eigen::Index k = 0; k < n; ++k) {
        xp(k) = x(k) + h;
        xm(k) = x(k) - h;
        Vector fp = f(t, xp), fm = f(t, xm);
        if (fp.size() != n) throw DimensionError("agent map returned a vector of the wrong size");
        J.col(k) = (fp - fm) / (2.0 * h);
        xp(k) = xm(k) = x(k);
    }
    return J;
}

Matrix jacobian(const AgentMap& f, const AgentJacobian& jac, double t, const Vector& x) {
    if (!jac) return finite_difference_jacobian(f, t, x);
    Matrix J = jac(t, x);
    if (J.rows() != x.size() || J.cols() != x.size()) throw DimensionError("Jacobian has the wrong shape");
    return J;
}

Box Box::cube(int n, double lo, double hi) { return Box{Vector::Constant(n, lo), Vector::Constant(n, hi)}; }

Vector Box::sample(std::mt19937_64& rng) const {
    if (lo.size() != hi.size() || lo.size() == 0) throw ParameterError("sampling box has mismatched or empty bounds");
    Vector out(lo.size());
    for (Eigen::Index k = 0; k < lo.size(); ++k) {
        if (!(hi(k) >= lo(k))) throw ParameterError("sampling box has an inverted coordinate range");
        std::uniform_real_distribution<double> u(lo(k), hi(k));
        out(k) = u(rng);
    }
    return out;
}

Vector sample_stacked(const Box& box, int N, std::mt19937_64& rng) {
    const int n = box.dim();
    Vector x(static_cast<Eigen::Index>(n) * N);
    for (int i = 0; i < N; ++i) x.segment(static_cast<Eigen::Index>(i) * n, n) = box.sample(rng);
    return x;
}

}  // namespace syncnet
