#ifndef XFEM_PROBLEMS_HPP
#define XFEM_PROBLEMS_HPP

#include "xfem/assembly.hpp"
#include "xfem/level_set.hpp"

#include <algorithm>

namespace xfem {

/// Unit disk with the interface at radius 0.5.
inline constexpr double domain_radius = 1.0;
inline constexpr double interface_radius = 0.5;

/// Weak discontinuity: -div(mu grad u) = 1, u = 0 on the boundary, continuous
/// solution and flux across the circle, mu1 = 20 inside, mu2 = 1 outside.
inline ProblemSpec weak_problem()
{
    ProblemSpec p;
    p.mu1 = 20.0;
    p.mu2 = 1.0;
    p.source = [](const Vec2&) { return 1.0; };
    p.dirichlet = [](const Vec2&) { return 0.0; };
    p.kind = EnrichmentKind::Abs;
    p.exact = ExactSolution{
        [](const Vec2& x, Side s) {
            const double r2 = dot(x, x);
            return s == Side::Omega1 ? (-0.25 * r2 + 61.0 / 16.0) / 20.0 : 0.25 * (1.0 - r2);
        },
        [](const Vec2& x, Side s) { return s == Side::Omega1 ? (-0.5 / 20.0) * x : -0.5 * x; },
    };
    return p;
}

/// Strong discontinuity with Robin coupling. Exact solution (2-r)/4 inside and
/// (1-r)/4 outside; the data consistent with it are f = 1/(4r),
/// grad u1 . n1 = u2 - u1 and grad u2 . n2 = u1 - u2.
inline ProblemSpec strong_problem()
{
    ProblemSpec p;
    p.mu1 = 1.0;
    p.mu2 = 1.0;
    p.source = [](const Vec2& x) { return 0.25 / std::max(norm(x), 1e-14); };
    p.dirichlet = [](const Vec2&) { return 0.0; };
    p.coupling = InterfaceCoupling{-1.0, 1.0, 1.0, -1.0};
    p.source_singularity = Vec2{0.0, 0.0};
    p.kind = EnrichmentKind::Sign;
    p.exact = ExactSolution{
        [](const Vec2& x, Side s) { return 0.25 * ((s == Side::Omega1 ? 2.0 : 1.0) - norm(x)); },
        [](const Vec2& x, Side) {
            const double r = std::max(norm(x), 1e-14);
            return (-0.25 / r) * x;
        },
    };
    return p;
}

} // namespace xfem

#endif // XFEM_PROBLEMS_HPP
