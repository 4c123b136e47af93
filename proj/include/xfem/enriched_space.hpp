#ifndef XFEM_ENRICHED_SPACE_HPP
#define XFEM_ENRICHED_SPACE_HPP

#include "xfem/cut_quadrature.hpp"
#include "xfem/disk_mesh.hpp"
#include "xfem/error.hpp"
#include "xfem/level_set.hpp"
#include "xfem/vec2.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace xfem {

enum class CellCategory { Standard, Cut, Blending };

/// Which approximation space is built on top of the Q1 basis.
enum class SpaceMode {
    XfemOff,     ///< plain Q1
    Strong,      ///< sign enrichment on cut cells
    WeakNoBlend, ///< abs enrichment truncated to cut cells (non-conforming)
    WeakBlend,   ///< abs enrichment on cut cells plus ramp-corrected blending cells
};

constexpr EnrichmentKind enrichment_kind(SpaceMode mode) noexcept
{
    return mode == SpaceMode::Strong ? EnrichmentKind::Sign : EnrichmentKind::Abs;
}

struct CellInfo
{
    CellCategory category = CellCategory::Standard;
    std::optional<Side> side;     ///< set for uncut cells
    std::optional<CutConfig> cut; ///< set for cut cells
};

struct Classification
{
    std::vector<CellInfo> cells;
    std::vector<double> vertex_phi; ///< snapped level-set value per vertex

    Side vertex_side(Index v) const { return side_of(vertex_phi[v]); }
};

/// Per-vertex snap tolerance: 1e-10 times the largest incident cell diameter.
inline std::vector<double> vertex_snap_tolerances(const Mesh& mesh)
{
    std::vector<double> tol(mesh.n_vertices(), 0.0);
    for (Index c = 0; c < mesh.n_cells(); ++c) {
        const double d = 1e-10 * mesh.cell_diameter(c);
        for (Index v : mesh.cell(c).vertex_ids)
            tol[v] = std::max(tol[v], d);
    }
    return tol;
}

/// Interface crossing on local edge e of cell c, given snapped vertex values.
/// The root is searched on the edge oriented from its lower to its higher
/// vertex id, so both cells sharing an edge get the same point.
inline std::optional<double> edge_intersection(const Mesh& mesh, const LevelSet& ls,
                                               std::span<const double> vertex_phi, Index c, int e)
{
    const auto [a, b] = mesh.edge_vertices(c, e);
    const bool forward = a < b;
    const Index lo = forward ? a : b;
    const Index hi = forward ? b : a;
    const auto t = segment_intersection(ls, mesh.vertex(lo).x, mesh.vertex(hi).x, vertex_phi[lo], vertex_phi[hi]);
    if (!t)
        return std::nullopt;
    return forward ? *t : 1.0 - *t;
}

/// Cut cells have vertices on both sides; blending cells are uncut cells that
/// share at least one vertex with a cut cell.
inline Classification classify_cells(const Mesh& mesh, const LevelSet& ls)
{
    Classification out;
    const auto tol = vertex_snap_tolerances(mesh);
    out.vertex_phi.resize(mesh.n_vertices());
    for (Index v = 0; v < mesh.n_vertices(); ++v)
        out.vertex_phi[v] = snap_phi(ls(mesh.vertex(v).x), tol[v]);

    for (Index c = 0; c < mesh.n_cells(); ++c)
        for (int e = 0; e < 4; ++e) {
            const auto [a, b] = mesh.edge_vertices(c, e);
            if (std::abs(ls(mesh.vertex(a).x)) < tol[a] && std::abs(ls(mesh.vertex(b).x)) < tol[b])
                throw Error("edge_intersection: degenerate edge on interface");
        }

    out.cells.resize(mesh.n_cells());
    std::vector<bool> on_cut_cell(mesh.n_vertices(), false);
    for (Index c = 0; c < mesh.n_cells(); ++c) {
        const auto& ids = mesh.cell(c).vertex_ids;
        std::array<Side, 4> sides{};
        for (std::size_t i = 0; i < 4; ++i)
            sides[i] = out.vertex_side(ids[i]);
        const bool uniform = std::all_of(sides.begin(), sides.end(), [&](Side s) { return s == sides[0]; });
        CellInfo& info = out.cells[c];
        if (uniform) {
            const double center_phi = ls(mesh.cell_map(c).map({0.5, 0.5}));
            if (side_of(center_phi) != sides[0] && std::abs(center_phi) > tol[ids[0]])
                throw Error("interface under-resolved");
            info.category = CellCategory::Standard;
            info.side = sides[0];
            continue;
        }
        std::array<double, 4> params{};
        for (int e = 0; e < 4; ++e)
            if (sides[static_cast<std::size_t>(e)] != sides[static_cast<std::size_t>((e + 1) % 4)])
                params[static_cast<std::size_t>(e)] = *edge_intersection(mesh, ls, out.vertex_phi, c, e);
        info.category = CellCategory::Cut;
        info.cut = make_cut_config(sides, params);
        for (Index v : ids)
            on_cut_cell[v] = true;
    }

    for (Index c = 0; c < mesh.n_cells(); ++c) {
        CellInfo& info = out.cells[c];
        if (info.category == CellCategory::Cut)
            continue;
        const auto& ids = mesh.cell(c).vertex_ids;
        if (std::any_of(ids.begin(), ids.end(), [&](Index v) { return on_cut_cell[v]; }))
            info.category = CellCategory::Blending;
    }
    return out;
}

inline constexpr Index invalid_index = std::numeric_limits<Index>::max();

/// Standard DoF v for every vertex v (set I'), then enriched DoFs (set I*)
/// numbered contiguously after them in vertex order.
struct DofMap
{
    std::size_t n_standard = 0;
    std::vector<Index> enriched_dof;  ///< per vertex, invalid_index if not enriched
    std::vector<bool> ramp_support;   ///< set I°: vertices of cut cells
    std::size_t total = 0;

    std::size_t n_enriched() const noexcept { return total - n_standard; }
    std::optional<Index> enriched(Index v) const
    {
        if (enriched_dof[v] == invalid_index)
            return std::nullopt;
        return enriched_dof[v];
    }
};

/// Cells whose local basis includes enriched functions in the given mode.
constexpr bool carries_enrichment(SpaceMode mode, CellCategory cat) noexcept
{
    switch (mode) {
    case SpaceMode::XfemOff: return false;
    case SpaceMode::Strong:
    case SpaceMode::WeakNoBlend: return cat == CellCategory::Cut;
    case SpaceMode::WeakBlend: return cat != CellCategory::Standard;
    }
    return false;
}

inline DofMap distribute_dofs(const Mesh& mesh, const Classification& cls, SpaceMode mode)
{
    DofMap map;
    map.n_standard = mesh.n_vertices();
    map.enriched_dof.assign(mesh.n_vertices(), invalid_index);
    map.ramp_support.assign(mesh.n_vertices(), false);

    std::vector<bool> enrich(mesh.n_vertices(), false);
    for (Index c = 0; c < mesh.n_cells(); ++c) {
        const CellCategory cat = cls.cells[c].category;
        for (Index v : mesh.cell(c).vertex_ids) {
            if (cat == CellCategory::Cut)
                map.ramp_support[v] = true;
            if (carries_enrichment(mode, cat))
                enrich[v] = true;
        }
    }
    Index next = map.n_standard;
    for (Index v = 0; v < mesh.n_vertices(); ++v)
        if (enrich[v])
            map.enriched_dof[v] = next++;
    map.total = next;
    return map;
}

enum class BasisKind { Standard, Enriched };

struct BasisEval
{
    double value = 0.0;
    Vec2 grad;        ///< real-space gradient
    Index dof = 0;
    BasisKind kind = BasisKind::Standard;
    Index vertex = 0; ///< owning mesh vertex
};

/// Up to 8 basis functions live on a cell: 4 standard and at most 4 enriched.
template <typename T>
class CellVector
{
public:
    void push_back(const T& v) { items_[size_++] = v; }
    std::size_t size() const noexcept { return size_; }
    const T& operator[](std::size_t i) const { return items_[i]; }
    T& operator[](std::size_t i) { return items_[i]; }
    const T* begin() const noexcept { return items_.data(); }
    const T* end() const noexcept { return items_.data() + size_; }

private:
    std::array<T, 8> items_{};
    std::size_t size_ = 0;
};

using LocalBasis = CellVector<BasisEval>;
using LocalDofs = CellVector<Index>;

struct RampValue
{
    double value = 0.0;
    Vec2 grad;
};

struct PointValue
{
    double value = 0.0;
    Vec2 grad;
};

/// Enriched Q1 space on a classified mesh. Holds references to the mesh and
/// level set, which must outlive it.
class EnrichedSpace
{
public:
    EnrichedSpace(const Mesh& mesh, const LevelSet& ls, SpaceMode mode)
        : mesh_(&mesh), ls_(&ls), mode_(mode), kind_(enrichment_kind(mode)),
          cls_(classify_cells(mesh, ls)), dofs_(distribute_dofs(mesh, cls_, mode))
    {
        shift_.resize(mesh.n_vertices());
        for (Index v = 0; v < mesh.n_vertices(); ++v) {
            const double phi = cls_.vertex_phi[v];
            shift_[v] = kind_ == EnrichmentKind::Sign ? (phi < 0.0 ? -1.0 : 1.0) : std::abs(phi);
        }
    }

    const Mesh& mesh() const noexcept { return *mesh_; }
    const LevelSet& level_set() const noexcept { return *ls_; }
    SpaceMode mode() const noexcept { return mode_; }
    EnrichmentKind kind() const noexcept { return kind_; }
    const Classification& classification() const noexcept { return cls_; }
    const CellInfo& cell_info(Index c) const { return cls_.cells[c]; }
    const DofMap& dofs() const noexcept { return dofs_; }
    std::size_t n_dofs() const noexcept { return dofs_.total; }

    bool has_enrichment(Index c) const noexcept { return carries_enrichment(mode_, cls_.cells[c].category); }

    /// DoF indices in the same order as eval() returns basis functions.
    LocalDofs local_dofs(Index c) const
    {
        LocalDofs out;
        const auto& ids = mesh_->cell(c).vertex_ids;
        for (Index v : ids)
            out.push_back(v);
        if (has_enrichment(c))
            for (Index v : ids)
                out.push_back(dofs_.enriched_dof[v]);
        return out;
    }

    /// Ramp r = sum of the cell's Q1 functions attached to vertices of cut cells.
    RampValue ramp(Index c, const Vec2& p) const
    {
        if (cls_.cells[c].category == CellCategory::Cut)
            return {1.0, {}};
        const auto n = q1_values(p);
        const auto g = q1_gradients(p);
        const Mat2 jit = mesh_->cell_map(c).jacobian(p).inverse().transpose();
        RampValue r;
        const auto& ids = mesh_->cell(c).vertex_ids;
        for (std::size_t i = 0; i < 4; ++i)
            if (dofs_.ramp_support[ids[i]]) {
                r.value += n[i];
                r.grad += jit * g[i];
            }
        return r;
    }

    /// Standard and enriched basis functions at unit point p of cell c. On a cut
    /// cell enriched functions are N_i (psi - psi(x_i)); on a blending cell
    /// (WeakBlend) they are multiplied by the ramp. A forced side selects the
    /// one-sided branch of psi; it is required for Sign enrichment on the
    /// interface.
    LocalBasis eval(Index c, const Vec2& p, std::optional<Side> side = std::nullopt) const
    {
        const BilinearMap map = mesh_->cell_map(c);
        const Mat2 jit = map.jacobian(p).inverse().transpose();
        const auto n = q1_values(p);
        const auto g = q1_gradients(p);
        const auto& ids = mesh_->cell(c).vertex_ids;

        LocalBasis out;
        std::array<Vec2, 4> grad_n;
        for (std::size_t i = 0; i < 4; ++i) {
            grad_n[i] = jit * g[i];
            out.push_back({n[i], grad_n[i], ids[i], BasisKind::Standard, ids[i]});
        }
        if (!has_enrichment(c))
            return out;

        const EnrichmentValue e = psi(kind_, *ls_, map.map(p), side);
        const RampValue r = ramp(c, p);
        for (std::size_t i = 0; i < 4; ++i) {
            const double shifted = e.value - shift_[ids[i]];
            const double value = n[i] * shifted * r.value;
            const Vec2 grad = (shifted * r.value) * grad_n[i] + (n[i] * r.value) * e.gradient + (n[i] * shifted) * r.grad;
            out.push_back({value, grad, dofs_.enriched_dof[ids[i]], BasisKind::Enriched, ids[i]});
        }
        return out;
    }

    /// Discrete function with coefficients u at unit point p of cell c.
    PointValue evaluate(std::span<const double> u, Index c, const Vec2& p, std::optional<Side> side = std::nullopt) const
    {
        PointValue out;
        for (const BasisEval& b : eval(c, p, side)) {
            out.value += u[b.dof] * b.value;
            out.grad += u[b.dof] * b.grad;
        }
        return out;
    }

    /// Shift value psi(x_v) used for the enriched function of vertex v.
    double shift(Index v) const { return shift_[v]; }

private:
    const Mesh* mesh_;
    const LevelSet* ls_;
    SpaceMode mode_;
    EnrichmentKind kind_;
    Classification cls_;
    DofMap dofs_;
    std::vector<double> shift_;
};

} // namespace xfem

#endif // XFEM_ENRICHED_SPACE_HPP
