#pragma once

#include "syncnet/graph.hpp"

#include <cstdint>
#include <functional>
#include <random>

namespace syncnet {

/// Agent self-dynamics f(t, x_i).
using AgentMap = std::function<Vector(double, const Vector&)>;
using AgentJacobian = std::function<Matrix(double, const Vector&)>;

/// Central differences with step h = 1e-6 * (1 + |x|).
Matrix finite_difference_jacobian(const AgentMap& f, double t, const Vector& x);

/// Analytic Jacobian when supplied, finite differences otherwise.
Matrix jacobian(const AgentMap& f, const AgentJacobian& jac, double t, const Vector& x);

/// Per-agent axis-aligned box.
struct Box {
    Vector lo;
    Vector hi;
    static Box cube(int n, double lo, double hi);
    int dim() const { return static_cast<int>(lo.size()); }
    /// Uniform draw; throws ParameterError for an empty or inverted box.
    Vector sample(std::mt19937_64& rng) const;
};

/// Stacked state of N agents drawn independently from `box`.
Vector sample_stacked(const Box& box, int N, std::mt19937_64& rng);

}  // namespace syncnet
