#ifndef XFEM_GAUSS_HPP
#define XFEM_GAUSS_HPP

#include "xfem/error.hpp"
#include "xfem/vec2.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace xfem {

struct Rule1D
{
    std::vector<double> points;  ///< in [0,1]
    std::vector<double> weights; ///< sum to 1
};

/// n-point Gauss-Legendre rule on [0,1], exact for polynomials of degree 2n-1.
inline Rule1D gauss_legendre(int n)
{
    if (n < 1)
        throw Error("gauss_legendre: order must be >= 1");

    Rule1D rule;
    rule.points.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Newton on P_n from the Chebyshev-like initial guess.
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16)
                break;
        }
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        rule.points[i] = 0.5 * (1.0 - z);
        rule.points[n - 1 - i] = 0.5 * (1.0 + z);
        rule.weights[i] = rule.weights[n - 1 - i] = 0.5 * w;
    }
    return rule;
}

struct Rule2D
{
    std::vector<Vec2> points;
    std::vector<double> weights;
};

/// Tensor-product m x m Gauss rule on the unit square.
inline Rule2D tensor_gauss(int m)
{
    const Rule1D r = gauss_legendre(m);
    Rule2D out;
    out.points.reserve(static_cast<std::size_t>(m * m));
    out.weights.reserve(static_cast<std::size_t>(m * m));
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i) {
            out.points.push_back({r.points[i], r.points[j]});
            out.weights.push_back(r.weights[i] * r.weights[j]);
        }
    return out;
}

} // namespace xfem

#endif // XFEM_GAUSS_HPP
