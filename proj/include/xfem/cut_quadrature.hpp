#ifndef XFEM_CUT_QUADRATURE_HPP
#define XFEM_CUT_QUADRATURE_HPP

#include "xfem/disk_mesh.hpp"
#include "xfem/error.hpp"
#include "xfem/gauss.hpp"
#include "xfem/level_set.hpp"
#include "xfem/vec2.hpp"

#include <array>
#include <cmath>
#include <span>
#include <vector>

namespace xfem {

/// Topology of the interface inside one cut cell, in unit-cell terms.
struct CutConfig
{
    std::array<Side, 4> vertex_sides{};
    std::array<int, 2> cut_edges{};       ///< ascending local edge indices
    std::array<double, 2> cut_params{};   ///< parameter along each cut edge (local orientation)

    Vec2 cut_point(int k) const noexcept
    {
        return unit_edge_point(cut_edges[static_cast<std::size_t>(k)], cut_params[static_cast<std::size_t>(k)]);
    }
    /// Cut edges share a corner (one vertex isolated).
    bool is_corner_cut() const noexcept { return cut_edges[1] - cut_edges[0] != 2; }
};

/// Builds a CutConfig from corner sides; edge_params[e] is read only for the
/// edges whose end sides differ.
inline CutConfig make_cut_config(const std::array<Side, 4>& sides, const std::array<double, 4>& edge_params)
{
    CutConfig cfg;
    cfg.vertex_sides = sides;
    int n = 0;
    for (int e = 0; e < 4; ++e) {
        if (sides[static_cast<std::size_t>(e)] == sides[static_cast<std::size_t>((e + 1) % 4)])
            continue;
        if (n == 2)
            throw Error("ambiguous cut (under-resolved interface)");
        const double t = edge_params[static_cast<std::size_t>(e)];
        if (!(t > 0.0 && t < 1.0))
            throw Error("make_cut_config: cut parameter must lie in (0,1)");
        cfg.cut_edges[static_cast<std::size_t>(n)] = e;
        cfg.cut_params[static_cast<std::size_t>(n)] = t;
        ++n;
    }
    if (n != 2)
        throw Error("make_cut_config: cell is not cut");
    return cfg;
}

struct SubCell
{
    std::array<Vec2, 4> corners; ///< unit-cell coordinates, counterclockwise
    Side side = Side::Omega1;
};

inline double polygon_area(std::span<const Vec2> p) noexcept
{
    double a = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        a += cross(p[i], p[(i + 1) % p.size()]);
    return 0.5 * a;
}

/// Splits the unit cell along the straight cut segment into quadrilaterals.
/// Corner cut: the triangle becomes 3 quads through its edge midpoints and
/// centroid, the pentagon becomes 2 quads joined along the segment from the
/// cut midpoint to the opposite corner. Straight cut: one quad per side.
inline std::vector<SubCell> subdivide(const CutConfig& cfg)
{
    const auto& c = unit_corners;
    const Vec2 p0 = cfg.cut_point(0);
    const Vec2 p1 = cfg.cut_point(1);
    std::vector<SubCell> cells;

    if (!cfg.is_corner_cut()) {
        const auto e = static_cast<std::size_t>(cfg.cut_edges[0]); // 0 or 1; the other cut edge is e+2
        const Vec2 p = p0, q = p1;
        cells.push_back({{c[e], p, q, c[(e + 3) % 4]}, cfg.vertex_sides[e]});
        cells.push_back({{p, c[e + 1], c[e + 2], q}, cfg.vertex_sides[e + 1]});
        return cells;
    }

    // Isolated corner k: cut edges are k (to the next corner) and k-1.
    const std::size_t k = (cfg.cut_edges[0] == 0 && cfg.cut_edges[1] == 3) ? 0 : static_cast<std::size_t>(cfg.cut_edges[1]);
    const Vec2 p = (cfg.cut_edges[0] == static_cast<int>(k)) ? p0 : p1;            // on edge k
    const Vec2 q = (cfg.cut_edges[0] == static_cast<int>(k)) ? p1 : p0;            // on edge k-1
    const Vec2 v = c[k];
    const Vec2 m = midpoint(p, q);
    const Vec2 mvp = midpoint(v, p);
    const Vec2 mqv = midpoint(q, v);
    const Vec2 g = (1.0 / 3.0) * (v + p + q);
    const Side tri = cfg.vertex_sides[k];
    const Side pent = opposite(tri);

    cells.push_back({{v, mvp, g, mqv}, tri});
    cells.push_back({{mvp, p, m, g}, tri});
    cells.push_back({{m, q, mqv, g}, tri});
    cells.push_back({{m, p, c[(k + 1) % 4], c[(k + 2) % 4]}, pent});
    cells.push_back({{m, c[(k + 2) % 4], c[(k + 3) % 4], q}, pent});
    return cells;
}

/// Quadrature on the unit cell with a side tag per point.
struct XfemQuadrature
{
    std::vector<Vec2> points;
    std::vector<double> weights;
    std::vector<Side> sides;
    int base_order = 0;

    std::size_t size() const noexcept { return points.size(); }
};

/// Base m x m Gauss rule for a cell lying entirely on one side.
inline XfemQuadrature build_volume_rule(Side side, int m)
{
    const Rule2D base = tensor_gauss(m);
    XfemQuadrature q;
    q.points = base.points;
    q.weights = base.weights;
    q.sides.assign(base.points.size(), side);
    q.base_order = m;
    return q;
}

/// Duffy rule for an integrand with a 1/r singularity at unit corner k: the
/// square is split into two triangles with apex at the corner, each collapsed
/// from a square so the Jacobian factor s cancels the singularity.
inline XfemQuadrature build_corner_singular_rule(Side side, std::size_t corner, int m)
{
    if (m < 1)
        throw Error("build_corner_singular_rule: base order must be >= 1");
    if (corner > 3)
        throw Error("build_corner_singular_rule: corner index out of range");
    const Rule1D g = gauss_legendre(m);
    const Vec2 apex = unit_corners[corner];
    XfemQuadrature q;
    q.base_order = m;
    for (std::size_t t = 1; t <= 2; ++t) {
        const Vec2 a = unit_corners[(corner + t) % 4] - apex;
        const Vec2 b = unit_corners[(corner + t + 1) % 4] - apex;
        const double area2 = std::abs(cross(a, b));
        for (std::size_t i = 0; i < g.points.size(); ++i)
            for (std::size_t j = 0; j < g.points.size(); ++j) {
                const double s = g.points[i], u = g.points[j];
                q.points.push_back(apex + s * ((1.0 - u) * a + u * b));
                q.weights.push_back(g.weights[i] * g.weights[j] * s * area2);
                q.sides.push_back(side);
            }
    }
    return q;
}

/// Maps the m x m Gauss rule onto every subcell: y = sigma_j(x_i),
/// w = w_i * det(grad sigma_j(x_i)).
inline XfemQuadrature build_volume_rule(const CutConfig& cfg, int m)
{
    if (m < 1)
        throw Error("build_volume_rule: base order must be >= 1");
    const Rule2D base = tensor_gauss(m);
    XfemQuadrature q;
    q.base_order = m;
    for (const SubCell& sc : subdivide(cfg)) {
        const BilinearMap map(sc.corners);
        for (std::size_t i = 0; i < base.points.size(); ++i) {
            q.points.push_back(map.map(base.points[i]));
            q.weights.push_back(base.weights[i] * map.jacobian(base.points[i]).det());
            q.sides.push_back(sc.side);
        }
    }
    return q;
}

/// Quadrature on the straight interface segment of a cut cell.
struct InterfaceRule
{
    std::vector<Vec2> points;      ///< unit-cell coordinates
    std::vector<Vec2> real_points;
    std::vector<double> weights;   ///< carry real arclength
    std::vector<Vec2> normals;     ///< unit, from Omega1 into Omega2

    std::size_t size() const noexcept { return points.size(); }
};

inline InterfaceRule build_interface_rule(const BilinearMap& cell, const CutConfig& cfg, int n, const LevelSet& ls)
{
    const Rule1D base = gauss_legendre(n);
    const Vec2 a = cfg.cut_point(0);
    const Vec2 b = cfg.cut_point(1);
    const Vec2 tangent = b - a;
    InterfaceRule r;
    for (std::size_t i = 0; i < base.points.size(); ++i) {
        const Vec2 p = a + base.points[i] * tangent;
        const Vec2 x = cell.map(p);
        r.points.push_back(p);
        r.real_points.push_back(x);
        r.weights.push_back(base.weights[i] * norm(cell.jacobian(p) * tangent));
        r.normals.push_back(ls.normal(x));
    }
    return r;
}

} // namespace xfem

#endif // XFEM_CUT_QUADRATURE_HPP
