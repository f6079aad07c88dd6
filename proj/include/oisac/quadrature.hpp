#pragma once

#include <vector>

namespace oisac {

enum class QuadratureKind { hermite, legendre };

/// Immutable node/weight set. Hermite rules use the physicists' weight
/// exp(-t^2) on (-inf, inf); Legendre rules live on [-1, 1].
struct QuadratureRule {
    QuadratureKind kind;
    std::vector<double> nodes;
    std::vector<double> weights;

    int order() const { return static_cast<int>(nodes.size()); }
};

/// Gauss-Hermite rule, 1 <= n <= 200. Nodes found by Newton iteration on
/// the normalized recurrence with asymptotic initial guesses.
QuadratureRule gauss_hermite(int n);

/// Gauss-Legendre rule on [-1, 1], 1 <= n <= 500.
QuadratureRule gauss_legendre(int n);

}  // namespace oisac
