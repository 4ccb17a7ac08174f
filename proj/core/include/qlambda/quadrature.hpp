#pragma once

#include <type_traits>
#include <vector>

namespace qlambda {

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;

    explicit GaussLegendre(int order);

    int order() const { return static_cast<int>(nodes.size()); }

    /// Integrates f over [a, b].
    template <class F>
    auto integrate(F&& f, double a, double b) const {
        using R = std::decay_t<decltype(f(a))>;
        const double half = 0.5 * (b - a);
        const double mid = 0.5 * (a + b);
        R sum = weights[0] * f(mid + half * nodes[0]);
        for (std::size_t i = 1; i < nodes.size(); ++i) sum += weights[i] * f(mid + half * nodes[i]);
        sum *= half;
        return sum;
    }
};

}  // namespace qlambda
