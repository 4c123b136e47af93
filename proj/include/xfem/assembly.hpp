#ifndef XFEM_ASSEMBLY_HPP
#define XFEM_ASSEMBLY_HPP

#include "xfem/cut_quadrature.hpp"
#include "xfem/enriched_space.hpp"
#include "xfem/error.hpp"
#include "xfem/sparse.hpp"

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace xfem {

/// Linear interface fluxes g_i(u1,u2) = a_i1 u1 + a_i2 u2, i = 1,2.
struct InterfaceCoupling
{
    double a11 = 0.0, a12 = 0.0;
    double a21 = 0.0, a22 = 0.0;
};

/// Exact solution branches, selected by side.
struct ExactSolution
{
    std::function<double(const Vec2&, Side)> value;
    std::function<Vec2(const Vec2&, Side)> gradient;
};

struct ProblemSpec
{
    double mu1 = 1.0;
    double mu2 = 1.0;
    std::function<double(const Vec2&)> source = [](const Vec2&) { return 0.0; };
    std::function<double(const Vec2&)> dirichlet = [](const Vec2&) { return 0.0; };
    std::optional<InterfaceCoupling> coupling;
    std::optional<Vec2> source_singularity; ///< point where f ~ 1/r; must be a mesh vertex
    EnrichmentKind kind = EnrichmentKind::Abs;
    std::optional<ExactSolution> exact;

    double mu(Side s) const noexcept { return s == Side::Omega1 ? mu1 : mu2; }
};

namespace detail {

/// Rule for cell c: the cut rule on cut cells, otherwise the cached uncut one.
inline const XfemQuadrature& cell_rule(const EnrichedSpace& space, Index c, int order,
                                       const std::array<XfemQuadrature, 2>& uncut, XfemQuadrature& scratch)
{
    const CellInfo& info = space.cell_info(c);
    if (info.cut) {
        scratch = build_volume_rule(*info.cut, order);
        return scratch;
    }
    if (!info.side)
        throw Error("assemble: uncut cell without an assigned side");
    return uncut[*info.side == Side::Omega1 ? 0 : 1];
}

inline std::array<XfemQuadrature, 2> uncut_rules(int order)
{
    return {build_volume_rule(Side::Omega1, order), build_volume_rule(Side::Omega2, order)};
}

/// Corner of uncut cell c sitting on the source singularity, if any.
inline std::optional<std::size_t> singular_corner(const EnrichedSpace& space, const ProblemSpec& spec, Index c)
{
    if (!spec.source_singularity || space.cell_info(c).cut)
        return std::nullopt;
    const Mesh& mesh = space.mesh();
    const auto& ids = mesh.cell(c).vertex_ids;
    const double tol = 1e-12 * mesh.cell_diameter(c);
    for (std::size_t k = 0; k < 4; ++k)
        if (norm(mesh.vertex(ids[k]).x - *spec.source_singularity) <= tol)
            return k;
    return std::nullopt;
}

} // namespace detail

/// Volume terms (mu grad u, grad v) and (f, v), integrated with the side-tagged
/// XFEM rule on cut cells, a Duffy rule on cells touching the source
/// singularity, and an order x order Gauss rule elsewhere.
inline void assemble_volume(SystemBuilder& builder, const EnrichedSpace& space, const ProblemSpec& spec, int order)
{
    const Mesh& mesh = space.mesh();
    const auto uncut = detail::uncut_rules(order);
    XfemQuadrature scratch;
    std::vector<double> k, f;

    for (Index c = 0; c < mesh.n_cells(); ++c) {
        const LocalDofs dofs = space.local_dofs(c);
        const std::size_t m = dofs.size();
        k.assign(m * m, 0.0);
        f.assign(m, 0.0);
        const BilinearMap map = mesh.cell_map(c);
        const auto corner = detail::singular_corner(space, spec, c);
        if (corner)
            scratch = build_corner_singular_rule(*space.cell_info(c).side, *corner, order);
        const XfemQuadrature& rule = corner ? scratch : detail::cell_rule(space, c, order, uncut, scratch);

        for (std::size_t q = 0; q < rule.size(); ++q) {
            const Vec2& p = rule.points[q];
            const Side side = rule.sides[q];
            const double jxw = rule.weights[q] * map.jacobian(p).det();
            const double mu = spec.mu(side);
            const double src = spec.source(map.map(p));
            const LocalBasis basis = space.eval(c, p, side);
            for (std::size_t a = 0; a < m; ++a) {
                f[a] += src * basis[a].value * jxw;
                for (std::size_t b = a; b < m; ++b)
                    k[a * m + b] += mu * dot(basis[a].grad, basis[b].grad) * jxw;
            }
        }
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = 0; b < a; ++b)
                k[a * m + b] = k[b * m + a];
        builder.add_local({dofs.begin(), m}, k, f);
    }
}

/// Robin coupling on the interface: adds -sum_{i,k} a_ik (u_k, v_i)_Gamma,
/// where u_k, v_i are the one-sided traces from Omega_k, Omega_i.
inline void assemble_interface(SystemBuilder& builder, const EnrichedSpace& space, const ProblemSpec& spec, int n_points)
{
    if (!spec.coupling)
        throw Error("assemble_interface: problem has no interface coupling");
    if (space.mode() == SpaceMode::XfemOff)
        return; // traces coincide; the coupling has nothing to act on
    if (space.kind() != EnrichmentKind::Sign)
        throw Error("assemble_interface: interface coupling requires sign enrichment");

    const InterfaceCoupling& g = *spec.coupling;
    const Mesh& mesh = space.mesh();
    std::vector<double> k;
    for (Index c = 0; c < mesh.n_cells(); ++c) {
        const CellInfo& info = space.cell_info(c);
        if (!info.cut)
            continue;
        const LocalDofs dofs = space.local_dofs(c);
        const std::size_t m = dofs.size();
        k.assign(m * m, 0.0);
        const InterfaceRule rule = build_interface_rule(mesh.cell_map(c), *info.cut, n_points, space.level_set());
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const LocalBasis t1 = space.eval(c, rule.points[q], Side::Omega1);
            const LocalBasis t2 = space.eval(c, rule.points[q], Side::Omega2);
            const double w = rule.weights[q];
            for (std::size_t a = 0; a < m; ++a)
                for (std::size_t b = 0; b < m; ++b) {
                    const double v1 = t1[a].value, v2 = t2[a].value;
                    const double u1 = t1[b].value, u2 = t2[b].value;
                    k[a * m + b] -= w * ((g.a11 * u1 + g.a12 * u2) * v1 + (g.a21 * u1 + g.a22 * u2) * v2);
                }
        }
        builder.add_local({dofs.begin(), m}, k);
    }
}

/// Symmetric elimination of fixed DoFs: b_i -= A_ij g_j, zero row and
/// column j, unit diagonal, b_j = g_j.
inline void apply_constraints(SparseSystem& sys, std::span<const std::pair<Index, double>> fixed)
{
    CsrMatrix& a = sys.matrix;
    std::vector<bool> is_fixed(a.n, false);
    std::vector<double> value(a.n, 0.0);
    for (const auto& [dof, v] : fixed) {
        is_fixed[dof] = true;
        value[dof] = v;
    }
    for (std::size_t i = 0; i < a.n; ++i) {
        if (is_fixed[i])
            continue;
        for (std::size_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
            if (is_fixed[a.col[k]]) {
                sys.rhs[i] -= a.val[k] * value[a.col[k]];
                a.val[k] = 0.0;
            }
    }
    for (std::size_t i = 0; i < a.n; ++i) {
        if (!is_fixed[i])
            continue;
        bool has_diagonal = false;
        for (std::size_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
            a.val[k] = a.col[k] == i ? 1.0 : 0.0;
            has_diagonal = has_diagonal || a.col[k] == i;
        }
        if (!has_diagonal)
            throw Error("apply_constraints: constrained row has no diagonal entry");
        sys.rhs[i] = value[i];
    }
}

/// Boundary vertices: standard DoF = g(x), enriched DoF = 0 (continuous g).
inline std::vector<std::pair<Index, double>> dirichlet_constraints(const EnrichedSpace& space,
                                                                   const std::function<double(const Vec2&)>& g)
{
    std::vector<std::pair<Index, double>> fixed;
    const Mesh& mesh = space.mesh();
    for (Index v = 0; v < mesh.n_vertices(); ++v) {
        if (!mesh.vertex(v).on_boundary)
            continue;
        fixed.emplace_back(v, g(mesh.vertex(v).x));
        if (auto e = space.dofs().enriched(v))
            fixed.emplace_back(*e, 0.0);
    }
    return fixed;
}

inline void apply_dirichlet(SparseSystem& sys, const EnrichedSpace& space, const ProblemSpec& spec)
{
    const auto fixed = dirichlet_constraints(space, spec.dirichlet);
    apply_constraints(sys, fixed);
}

/// Enriched coefficients (a1, a2) on a boundary edge x1-x2 (x1 in Omega1, x2 in
/// Omega2) reproducing the one-sided Dirichlet limits g1c, g2c at the jump
/// point xc under sign enrichment.
inline std::pair<double, double> discontinuous_dirichlet_coeffs(double g1c, double g2c, double g_at_v1, double g_at_v2,
                                                               const Vec2& xc, const Vec2& x1, const Vec2& x2)
{
    const Vec2 e = x2 - x1;
    const double t = dot(xc - x1, e) / dot(e, e);
    const double n1 = 1.0 - t;
    const double n2 = t;
    if (!(n1 > 0.0) || !(n2 > 0.0))
        throw Error("discontinuous_dirichlet_coeffs: jump point must lie strictly inside the edge");
    const double standard = g_at_v1 * n1 + g_at_v2 * n2;
    return {(g2c - standard) / (2.0 * n1), (g1c - standard) / (-2.0 * n2)};
}

/// Assembles volume terms, the interface coupling when present, and Dirichlet data.
inline SparseSystem assemble_system(const EnrichedSpace& space, const ProblemSpec& spec, int order)
{
    SystemBuilder builder(space.n_dofs());
    assemble_volume(builder, space, spec, order);
    if (spec.coupling)
        assemble_interface(builder, space, spec, order);
    SparseSystem sys = std::move(builder).finalize();
    apply_dirichlet(sys, space, spec);
    return sys;
}

} // namespace xfem

#endif // XFEM_ASSEMBLY_HPP
