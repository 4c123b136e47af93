#ifndef XFEM_DISK_MESH_HPP
#define XFEM_DISK_MESH_HPP

#include "xfem/error.hpp"
#include "xfem/vec2.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

namespace xfem {

/// Corners of the unit cell in counterclockwise order. Local edge e runs from
/// corner e to corner (e+1)%4.
inline constexpr std::array<Vec2, 4> unit_corners{{{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}}};

/// Point at parameter t on local edge e of the unit cell.
constexpr Vec2 unit_edge_point(int e, double t) noexcept
{
    const Vec2& a = unit_corners[static_cast<std::size_t>(e)];
    const Vec2& b = unit_corners[static_cast<std::size_t>((e + 1) % 4)];
    return a + t * (b - a);
}

/// Bilinear Q1 shape values on the unit cell, in corner order.
constexpr std::array<double, 4> q1_values(const Vec2& p) noexcept
{
    return {(1 - p.x) * (1 - p.y), p.x * (1 - p.y), p.x * p.y, (1 - p.x) * p.y};
}

/// Reference gradients of the Q1 shape functions.
constexpr std::array<Vec2, 4> q1_gradients(const Vec2& p) noexcept
{
    return {{{-(1 - p.y), -(1 - p.x)}, {1 - p.y, -p.x}, {p.y, p.x}, {-p.y, 1 - p.x}}};
}

/// Bilinear map from the unit cell onto a quadrilateral given by 4 corners.
class BilinearMap
{
public:
    explicit BilinearMap(const std::array<Vec2, 4>& corners) noexcept : corners_(corners) {}

    const std::array<Vec2, 4>& corners() const noexcept { return corners_; }

    Vec2 map(const Vec2& p) const noexcept
    {
        const auto n = q1_values(p);
        Vec2 x;
        for (std::size_t i = 0; i < 4; ++i)
            x += n[i] * corners_[i];
        return x;
    }

    Mat2 jacobian(const Vec2& p) const noexcept
    {
        const auto g = q1_gradients(p);
        Mat2 j;
        for (std::size_t i = 0; i < 4; ++i) {
            j.a00 += corners_[i].x * g[i].x;
            j.a01 += corners_[i].x * g[i].y;
            j.a10 += corners_[i].y * g[i].x;
            j.a11 += corners_[i].y * g[i].y;
        }
        return j;
    }

    /// Newton iteration for the unit-cell preimage of a real point.
    Vec2 inverse(const Vec2& x, double tol = 1e-14, int max_iter = 50) const
    {
        Vec2 p{0.5, 0.5};
        for (int it = 0; it < max_iter; ++it) {
            const Vec2 r = map(p) - x;
            const Vec2 dp = jacobian(p).inverse() * r;
            p -= dp;
            if (norm(dp) < tol)
                return p;
        }
        throw Error("BilinearMap::inverse: Newton iteration did not converge");
    }

private:
    std::array<Vec2, 4> corners_;
};

struct Vertex
{
    Vec2 x;
    bool on_boundary = false;
};

struct Cell
{
    std::array<Index, 4> vertex_ids{}; ///< counterclockwise
    int level = 0;
};

/// Conforming quadrilateral mesh of a disk of radius R. Immutable once built.
class Mesh
{
public:
    Mesh(double radius, std::vector<Vertex> vertices, std::vector<Cell> cells, int level)
        : radius_(radius), vertices_(std::move(vertices)), cells_(std::move(cells)), level_(level)
    {}

    double radius() const noexcept { return radius_; }
    int level() const noexcept { return level_; }
    std::span<const Vertex> vertices() const noexcept { return vertices_; }
    std::span<const Cell> active_cells() const noexcept { return cells_; }
    std::size_t n_vertices() const noexcept { return vertices_.size(); }
    std::size_t n_cells() const noexcept { return cells_.size(); }
    const Vertex& vertex(Index i) const { return vertices_[i]; }
    const Cell& cell(Index c) const { return cells_[c]; }

    std::array<Vec2, 4> cell_corners(Index c) const
    {
        const auto& ids = cells_[c].vertex_ids;
        return {vertices_[ids[0]].x, vertices_[ids[1]].x, vertices_[ids[2]].x, vertices_[ids[3]].x};
    }

    BilinearMap cell_map(Index c) const { return BilinearMap(cell_corners(c)); }

    double cell_diameter(Index c) const
    {
        const auto p = cell_corners(c);
        return std::max(norm(p[2] - p[0]), norm(p[3] - p[1]));
    }

    /// Global vertex pair of local edge e.
    std::pair<Index, Index> edge_vertices(Index c, int e) const
    {
        const auto& ids = cells_[c].vertex_ids;
        return {ids[static_cast<std::size_t>(e)], ids[static_cast<std::size_t>((e + 1) % 4)]};
    }

private:
    double radius_;
    std::vector<Vertex> vertices_;
    std::vector<Cell> cells_;
    int level_;
};

/// Default radius ratio of the central square's corners (same as deal.II's hyper_ball).
inline const double default_inner_ratio = 1.0 / (1.0 + std::numbers::sqrt2);

/// Five-cell disk: a central square plus four trapezoids, with corners on the
/// diagonals at radii R and inner_ratio*R.
inline Mesh build_coarse_disk(double radius, double inner_ratio = default_inner_ratio)
{
    if (!(radius > 0.0))
        throw Error("build_coarse_disk: radius must be positive");
    if (!(inner_ratio > 0.0 && inner_ratio < 1.0))
        throw Error("build_coarse_disk: inner ratio must lie in (0,1)");

    const double s = radius / std::numbers::sqrt2;
    const double a = inner_ratio * s;
    std::vector<Vertex> v{
        {{-s, -s}, true}, {{s, -s}, true}, {{s, s}, true}, {{-s, s}, true},
        {{-a, -a}, false}, {{a, -a}, false}, {{a, a}, false}, {{-a, a}, false},
    };
    std::vector<Cell> c{
        {{4, 5, 6, 7}, 0}, {{0, 1, 5, 4}, 0}, {{1, 2, 6, 5}, 0}, {{2, 3, 7, 6}, 0}, {{3, 0, 4, 7}, 0},
    };
    return Mesh(radius, std::move(v), std::move(c), 0);
}

/// Uniform refinement: each cell is split into 4 children. Boundary edge
/// midpoints are projected radially onto the circle; the cell-center vertex is
/// the transfinite center 1/2 sum(edge midpoints) - 1/4 sum(corners), which is
/// the bilinear midpoint whenever the edges are straight.
inline Mesh refine(const Mesh& mesh)
{
    using Edge = std::pair<Index, Index>;
    auto key = [](Index a, Index b) { return a < b ? Edge{a, b} : Edge{b, a}; };

    std::map<Edge, int> edge_use;
    for (Index c = 0; c < mesh.n_cells(); ++c)
        for (int e = 0; e < 4; ++e) {
            const auto [a, b] = mesh.edge_vertices(c, e);
            ++edge_use[key(a, b)];
        }

    std::vector<Vertex> vertices(mesh.vertices().begin(), mesh.vertices().end());
    std::map<Edge, Index> midpoint_of;
    const double radius = mesh.radius();

    auto edge_midpoint = [&](Index a, Index b) {
        const Edge k = key(a, b);
        if (auto it = midpoint_of.find(k); it != midpoint_of.end())
            return it->second;
        Vec2 p = midpoint(vertices[a].x, vertices[b].x);
        const bool boundary = edge_use.at(k) == 1;
        if (boundary)
            p = (radius / norm(p)) * p;
        vertices.push_back({p, boundary});
        midpoint_of.emplace(k, vertices.size() - 1);
        return vertices.size() - 1;
    };

    std::vector<Cell> cells;
    cells.reserve(4 * mesh.n_cells());
    for (Index c = 0; c < mesh.n_cells(); ++c) {
        const auto& v = mesh.cell(c).vertex_ids;
        std::array<Index, 4> m{};
        for (int e = 0; e < 4; ++e) {
            const auto [a, b] = mesh.edge_vertices(c, e);
            m[static_cast<std::size_t>(e)] = edge_midpoint(a, b);
        }
        Vec2 center;
        for (std::size_t i = 0; i < 4; ++i)
            center += 0.5 * vertices[m[i]].x - 0.25 * vertices[v[i]].x;
        vertices.push_back({center, false});
        const Index z = vertices.size() - 1;

        const int lvl = mesh.cell(c).level + 1;
        cells.push_back({{v[0], m[0], z, m[3]}, lvl});
        cells.push_back({{m[0], v[1], m[1], z}, lvl});
        cells.push_back({{z, m[1], v[2], m[2]}, lvl});
        cells.push_back({{m[3], z, m[2], v[3]}, lvl});
    }
    return Mesh(radius, std::move(vertices), std::move(cells), mesh.level() + 1);
}

inline Mesh refine(const Mesh& mesh, int times)
{
    Mesh m = mesh;
    for (int i = 0; i < times; ++i)
        m = refine(m);
    return m;
}

} // namespace xfem

#endif // XFEM_DISK_MESH_HPP
