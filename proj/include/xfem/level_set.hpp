#ifndef XFEM_LEVEL_SET_HPP
#define XFEM_LEVEL_SET_HPP

#include "xfem/error.hpp"
#include "xfem/vec2.hpp"

#include <cmath>
#include <functional>
#include <optional>
#include <utility>

namespace xfem {

/// Omega1 is where the level set is negative, Omega2 where it is positive.
enum class Side { Omega1, Omega2 };

enum class EnrichmentKind {
    Sign, ///< strong discontinuity (jump in the solution)
    Abs,  ///< weak discontinuity (kink)
};

constexpr double side_sign(Side s) noexcept { return s == Side::Omega1 ? -1.0 : 1.0; }
constexpr Side side_of(double phi) noexcept { return phi < 0.0 ? Side::Omega1 : Side::Omega2; }
constexpr Side opposite(Side s) noexcept { return s == Side::Omega1 ? Side::Omega2 : Side::Omega1; }

/// Scalar level-set field with its gradient.
class LevelSet
{
public:
    using ValueFn = std::function<double(const Vec2&)>;
    using GradientFn = std::function<Vec2(const Vec2&)>;

    LevelSet(ValueFn value, GradientFn gradient) : value_(std::move(value)), gradient_(std::move(gradient)) {}

    /// Signed distance to the circle of radius r0 about the origin.
    static LevelSet circle(double r0)
    {
        return LevelSet([r0](const Vec2& x) { return norm(x) - r0; },
                        [](const Vec2& x) {
                            const double r = norm(x);
                            return r > 0.0 ? (1.0 / r) * x : Vec2{0.0, 0.0};
                        });
    }

    double operator()(const Vec2& x) const { return value_(x); }
    double value(const Vec2& x) const { return value_(x); }
    Vec2 gradient(const Vec2& x) const { return gradient_(x); }

    /// Unit normal pointing from Omega1 into Omega2.
    Vec2 normal(const Vec2& x) const
    {
        const Vec2 g = gradient_(x);
        const double n = norm(g);
        if (n == 0.0)
            throw Error("LevelSet::normal: zero gradient");
        return (1.0 / n) * g;
    }

private:
    ValueFn value_;
    GradientFn gradient_;
};

/// Below this |phi| a point counts as lying on the interface for sign evaluation.
inline constexpr double on_interface_tol = 1e-14;

struct EnrichmentValue
{
    double value = 0.0;
    Vec2 gradient;
};

/// Enrichment function psi (sign or abs of the level set). With a forced side
/// the one-sided branch is used: Sign gives +-1, Abs gives side_sign * phi, so
/// the branch stays smooth across the straight-segment approximation of the
/// interface.
inline EnrichmentValue psi(EnrichmentKind kind, const LevelSet& ls, const Vec2& x,
                           std::optional<Side> side = std::nullopt)
{
    const double phi = ls(x);
    if (kind == EnrichmentKind::Sign) {
        if (side)
            return {side_sign(*side), {}};
        if (std::abs(phi) <= on_interface_tol)
            throw Error("psi: side required on interface");
        return {phi < 0.0 ? -1.0 : 1.0, {}};
    }
    const Vec2 g = ls.gradient(x);
    if (side) {
        const double s = side_sign(*side);
        return {s * phi, s * g};
    }
    if (phi == 0.0)
        return {0.0, {}};
    const double s = phi < 0.0 ? -1.0 : 1.0;
    return {s * phi, s * g};
}

/// Root of phi on the segment a->b, as a parameter t in (0,1), when the
/// (already snapped) end values differ in sign. Bisection to |phi| <= 1e-12.
inline std::optional<double> segment_intersection(const LevelSet& ls, const Vec2& a, const Vec2& b,
                                                  double phi_a, double phi_b)
{
    if ((phi_a < 0.0) == (phi_b < 0.0))
        return std::nullopt;

    const bool a_negative = phi_a < 0.0;
    double lo = 0.0, hi = 1.0, t = 0.5;
    for (int it = 0; it < 60; ++it) {
        t = 0.5 * (lo + hi);
        const double f = ls(a + t * (b - a));
        if (std::abs(f) <= 1e-12)
            break;
        if ((f < 0.0) == a_negative)
            lo = t;
        else
            hi = t;
    }
    return t;
}

/// Values with |phi| below the tolerance are moved to +tol (Omega2).
constexpr double snap_phi(double phi, double tol) noexcept { return (phi < tol && phi > -tol) ? tol : phi; }

/// Interface crossing on the real edge a->b. End values are snapped with
/// snap_tol first; an edge whose both ends lie on the interface is rejected.
inline std::optional<double> edge_intersection(const LevelSet& ls, const Vec2& a, const Vec2& b, double snap_tol)
{
    const double phi_a = ls(a);
    const double phi_b = ls(b);
    if (std::abs(phi_a) < snap_tol && std::abs(phi_b) < snap_tol)
        throw Error("edge_intersection: degenerate edge on interface");
    return segment_intersection(ls, a, b, snap_phi(phi_a, snap_tol), snap_phi(phi_b, snap_tol));
}

} // namespace xfem

#endif // XFEM_LEVEL_SET_HPP
