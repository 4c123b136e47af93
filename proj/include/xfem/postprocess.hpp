#ifndef XFEM_POSTPROCESS_HPP
#define XFEM_POSTPROCESS_HPP

#include "xfem/assembly.hpp"
#include "xfem/cut_quadrature.hpp"
#include "xfem/enriched_space.hpp"
#include "xfem/error.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <span>
#include <string>
#include <vector>

namespace xfem {

struct ErrorNorms
{
    double l2 = 0.0;
    double energy = 0.0; ///< broken H1 seminorm of the error
};

/// L2 and energy errors over Omega1 u Omega2. Cut cells use the XFEM rule,
/// and each point is compared against the exact branch of its side.
inline ErrorNorms measure_errors(const EnrichedSpace& space, std::span<const double> u, const ExactSolution& exact, int order)
{
    const Mesh& mesh = space.mesh();
    const auto uncut = detail::uncut_rules(order);
    XfemQuadrature scratch;
    double l2 = 0.0, h1 = 0.0;
    for (Index c = 0; c < mesh.n_cells(); ++c) {
        const BilinearMap map = mesh.cell_map(c);
        const XfemQuadrature& rule = detail::cell_rule(space, c, order, uncut, scratch);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const Vec2& p = rule.points[q];
            const Side side = rule.sides[q];
            const double jxw = rule.weights[q] * map.jacobian(p).det();
            const Vec2 x = map.map(p);
            const PointValue uh = space.evaluate(u, c, p, side);
            const double e = uh.value - exact.value(x, side);
            const Vec2 ge = uh.grad - exact.gradient(x, side);
            l2 += e * e * jxw;
            h1 += dot(ge, ge) * jxw;
        }
    }
    return {std::sqrt(l2), std::sqrt(h1)};
}

struct CycleResult
{
    int cycle = 0;
    std::size_t active_cells = 0;
    std::size_t dofs = 0;
    double l2 = 0.0;
    double energy = 0.0;
    std::size_t solver_iterations = 0;
    double condition_estimate = 0.0;
};

struct ErrorReport
{
    std::vector<CycleResult> cycles;

    /// log2(e_{k-1} / e_k); defined for k >= 1.
    double l2_rate(std::size_t k) const { return rate(cycles.at(k - 1).l2, cycles.at(k).l2); }
    double energy_rate(std::size_t k) const { return rate(cycles.at(k - 1).energy, cycles.at(k).energy); }

    static double rate(double coarse, double fine) { return std::log2(coarse / fine); }
};

/// Convergence table: errors as 3-digit mantissa/exponent, rates with two
/// decimals, "-" in the first row.
inline std::string rate_table(const ErrorReport& report)
{
    if (report.cycles.size() < 2)
        throw Error("rate_table: need at least two cycles");
    std::ostringstream os;
    os << "       L2          Energy\n";
    auto rate_field = [&](std::size_t k, bool l2) {
        std::ostringstream f;
        if (k == 0)
            f << std::setw(4) << "-";
        else
            f << std::fixed << std::setprecision(2) << std::setw(4) << (l2 ? report.l2_rate(k) : report.energy_rate(k));
        return f.str();
    };
    for (std::size_t k = 0; k < report.cycles.size(); ++k) {
        std::ostringstream row;
        row << std::scientific << std::setprecision(3) << report.cycles[k].l2 << ' ' << rate_field(k, true) << ' '
            << report.cycles[k].energy << ' ' << rate_field(k, false) << '\n';
        os << row.str();
    }
    return os.str();
}

struct VtkStats
{
    std::size_t points = 0;
    std::size_t cells = 0;
};

/// Legacy ASCII VTK unstructured grid. Uncut cells are written as quads on the
/// mesh vertices. Cut cells are written as their quadrature subcells; subcell
/// corners that are not mesh vertices get their own point per subcell with
/// the one-sided value of that subcell, so jumps across the interface show.
inline VtkStats write_vtk(const EnrichedSpace& space, std::span<const double> u, std::ostream& os)
{
    const Mesh& mesh = space.mesh();
    std::vector<Vec2> points;
    std::vector<double> values;
    for (Index v = 0; v < mesh.n_vertices(); ++v) {
        points.push_back(mesh.vertex(v).x);
        values.push_back(u[v]);
    }
    std::vector<std::array<Index, 4>> cells;
    std::vector<int> category, side;

    for (Index c = 0; c < mesh.n_cells(); ++c) {
        const CellInfo& info = space.cell_info(c);
        const auto& ids = mesh.cell(c).vertex_ids;
        if (!info.cut) {
            cells.push_back(ids);
            category.push_back(static_cast<int>(info.category));
            side.push_back(info.side == Side::Omega1 ? 1 : 2);
            continue;
        }
        const BilinearMap map = mesh.cell_map(c);
        for (const SubCell& sc : subdivide(*info.cut)) {
            std::array<Index, 4> conn{};
            for (std::size_t i = 0; i < 4; ++i) {
                const Vec2& p = sc.corners[i];
                std::size_t corner = 4;
                for (std::size_t k = 0; k < 4; ++k)
                    if (p == unit_corners[k])
                        corner = k;
                if (corner < 4) {
                    conn[i] = ids[corner];
                    continue;
                }
                points.push_back(map.map(p));
                values.push_back(space.evaluate(u, c, p, sc.side).value);
                conn[i] = points.size() - 1;
            }
            cells.push_back(conn);
            category.push_back(static_cast<int>(CellCategory::Cut));
            side.push_back(sc.side == Side::Omega1 ? 1 : 2);
        }
    }

    os << "# vtk DataFile Version 3.0\n"
       << "XFEM solution\n"
       << "ASCII\n"
       << "DATASET UNSTRUCTURED_GRID\n";
    os << std::setprecision(17);
    os << "POINTS " << points.size() << " double\n";
    for (const Vec2& p : points)
        os << p.x << ' ' << p.y << " 0\n";
    os << "CELLS " << cells.size() << ' ' << 5 * cells.size() << '\n';
    for (const auto& c : cells)
        os << "4 " << c[0] << ' ' << c[1] << ' ' << c[2] << ' ' << c[3] << '\n';
    os << "CELL_TYPES " << cells.size() << '\n';
    for (std::size_t i = 0; i < cells.size(); ++i)
        os << "9\n";
    os << "CELL_DATA " << cells.size() << '\n'
       << "SCALARS category int 1\nLOOKUP_TABLE default\n";
    for (int v : category)
        os << v << '\n';
    os << "SCALARS side int 1\nLOOKUP_TABLE default\n";
    for (int v : side)
        os << v << '\n';
    os << "POINT_DATA " << points.size() << '\n'
       << "SCALARS solution double 1\nLOOKUP_TABLE default\n";
    for (double v : values)
        os << v << '\n';
    return {points.size(), cells.size()};
}

inline VtkStats write_vtk(const EnrichedSpace& space, std::span<const double> u, const std::filesystem::path& path)
{
    std::ofstream os(path);
    if (!os)
        throw Error("write_vtk: cannot open " + path.string());
    const VtkStats stats = write_vtk(space, u, os);
    os.flush();
    if (!os)
        throw Error("write_vtk: write failed for " + path.string());
    return stats;
}

} // namespace xfem

#endif // XFEM_POSTPROCESS_HPP
