#include "xfem/assembly.hpp"
#include "xfem/problems.hpp"
#include "xfem/solver.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace xfem;

namespace {

const LevelSet circle = LevelSet::circle(0.5);
const LevelSet far_away = LevelSet::circle(10.0);

Mesh unit_square_cell()
{
    std::vector<Vertex> v;
    for (const Vec2& x : unit_corners)
        v.push_back({x, true});
    return Mesh(1.0, std::move(v), {{{0, 1, 2, 3}, 0}}, 0);
}

Mesh disk(int cycle) { return refine(build_coarse_disk(1.0), 2 + cycle); }

SparseSystem interface_only(const EnrichedSpace& s, const InterfaceCoupling& g, int n)
{
    ProblemSpec spec;
    spec.kind = EnrichmentKind::Sign;
    spec.coupling = g;
    SystemBuilder b(s.n_dofs());
    assemble_interface(b, s, spec, n);
    return std::move(b).finalize();
}

} // namespace

TEST(Volume, UnitSquareStiffness)
{
    const Mesh m = unit_square_cell();
    const EnrichedSpace s(m, far_away, SpaceMode::XfemOff);
    ProblemSpec spec;
    SystemBuilder b(s.n_dofs());
    assemble_volume(b, s, spec, 3);
    const SparseSystem sys = std::move(b).finalize();
    for (Index i = 0; i < 4; ++i) {
        EXPECT_NEAR(sys.matrix.at(i, i), 2.0 / 3.0, 1e-15);
        EXPECT_NEAR(sys.matrix.at(i, (i + 1) % 4), -1.0 / 6.0, 1e-15);
        EXPECT_NEAR(sys.matrix.at(i, (i + 3) % 4), -1.0 / 6.0, 1e-15);
        EXPECT_NEAR(sys.matrix.at(i, (i + 2) % 4), -1.0 / 3.0, 1e-15);
    }
}

TEST(Volume, LoadOfUnitSourceIsCellArea)
{
    const Mesh m = disk(1);
    const EnrichedSpace s(m, circle, SpaceMode::XfemOff);
    ProblemSpec spec;
    spec.source = [](const Vec2&) { return 1.0; };
    SystemBuilder b(s.n_dofs());
    assemble_volume(b, s, spec, 3);
    const SparseSystem sys = std::move(b).finalize();
    double area = 0.0;
    for (Index c = 0; c < m.n_cells(); ++c) {
        const auto p = m.cell_corners(c);
        for (std::size_t i = 0; i < 4; ++i)
            area += 0.5 * cross(p[i], p[(i + 1) % 4]);
    }
    double load = 0.0;
    for (double v : sys.rhs)
        load += v;
    EXPECT_NEAR(load, area, 1e-13);
}

TEST(Volume, SideDependentCoefficient)
{
    // Zero gradient for constants and mu-weighted area for the linear function x.
    const Mesh m = disk(1);
    const EnrichedSpace s(m, circle, SpaceMode::WeakBlend);
    ProblemSpec spec = weak_problem();
    SystemBuilder b(s.n_dofs());
    assemble_volume(b, s, spec, 3);
    const SparseSystem sys = std::move(b).finalize();
    std::vector<double> ones(s.n_dofs(), 0.0), xs(s.n_dofs(), 0.0);
    for (Index v = 0; v < m.n_vertices(); ++v) {
        ones[v] = 1.0;
        xs[v] = m.vertex(v).x.x;
    }
    const auto a1 = sys.matrix * ones;
    for (double v : a1)
        EXPECT_NEAR(v, 0.0, 1e-12);
    const auto ax = sys.matrix * xs;
    // x^T A x = int mu |grad x|^2 = 20 |Omega1_h| + |Omega2_h|
    double energy = dot(xs, ax);
    double inner = 0.0, total = 0.0;
    for (Index c = 0; c < m.n_cells(); ++c) {
        const auto& info = s.cell_info(c);
        const auto rule = info.cut ? build_volume_rule(*info.cut, 3) : build_volume_rule(*info.side, 3);
        const auto map = m.cell_map(c);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const double jxw = rule.weights[q] * map.jacobian(rule.points[q]).det();
            total += jxw;
            if (rule.sides[q] == Side::Omega1)
                inner += jxw;
        }
    }
    EXPECT_NEAR(energy, 20.0 * inner + (total - inner), 1e-11);
    EXPECT_NEAR(inner, 0.25 * std::numbers::pi, 1e-2);
}

TEST(Interface, ZeroCouplingContributesNothing)
{
    const Mesh m = disk(0);
    const EnrichedSpace s(m, circle, SpaceMode::Strong);
    const SparseSystem sys = interface_only(s, {0.0, 0.0, 0.0, 0.0}, 3);
    EXPECT_GT(sys.matrix.nnz(), 0u);
    for (double v : sys.matrix.val)
        EXPECT_EQ(v, 0.0);
}

TEST(Interface, ConstantFunctionAgainstSegmentIntegration)
{
    const Mesh m = disk(0);
    const EnrichedSpace s(m, circle, SpaceMode::Strong);
    const InterfaceCoupling g{0.7, -0.2, 1.3, 0.4};
    const double c = 2.5;
    const SparseSystem sys = interface_only(s, g, 10);
    std::vector<double> u(s.n_dofs(), 0.0);
    for (Index v = 0; v < m.n_vertices(); ++v)
        u[v] = c;
    const auto au = sys.matrix * u;

    // -(a11+a12) c int phi_j,1 - (a21+a22) c int phi_j,2 by composite midpoint sums.
    std::vector<double> oracle(s.n_dofs(), 0.0);
    const int n = 4000;
    for (Index cell = 0; cell < m.n_cells(); ++cell) {
        const auto& info = s.cell_info(cell);
        if (!info.cut)
            continue;
        const Vec2 a = info.cut->cut_point(0), b = info.cut->cut_point(1);
        const auto map = m.cell_map(cell);
        for (int k = 0; k < n; ++k) {
            const Vec2 p = a + ((k + 0.5) / n) * (b - a);
            const double w = norm(map.jacobian(p) * (b - a)) / n;
            const auto t1 = s.eval(cell, p, Side::Omega1);
            const auto t2 = s.eval(cell, p, Side::Omega2);
            for (std::size_t j = 0; j < t1.size(); ++j)
                oracle[t1[j].dof] -= w * c * ((g.a11 + g.a12) * t1[j].value + (g.a21 + g.a22) * t2[j].value);
        }
    }
    for (Index j = 0; j < s.n_dofs(); ++j)
        EXPECT_NEAR(au[j], oracle[j], 1e-7) << "dof " << j;
}

TEST(Interface, StrongCouplingIsSymmetricPositive)
{
    const Mesh m = disk(0);
    const EnrichedSpace s(m, circle, SpaceMode::Strong);
    const SparseSystem sys = interface_only(s, *strong_problem().coupling, 3);
    EXPECT_LE(sys.matrix.asymmetry(), 1e-15);
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        std::vector<double> x(s.n_dofs());
        for (double& v : x)
            v = u(rng);
        EXPECT_GE(dot(x, sys.matrix * x), -1e-14);
    }
}

TEST(Interface, Errors)
{
    const Mesh m = disk(0);
    const EnrichedSpace weak(m, circle, SpaceMode::WeakBlend);
    SystemBuilder b(weak.n_dofs());
    ProblemSpec spec = weak_problem();
    EXPECT_THROW(assemble_interface(b, weak, spec, 3), Error);
    spec.coupling = InterfaceCoupling{1.0, 0.0, 0.0, 1.0};
    EXPECT_THROW(assemble_interface(b, weak, spec, 3), Error);
}

TEST(Interface, SkippedWithoutEnrichment)
{
    const Mesh m = disk(0);
    const EnrichedSpace off(m, circle, SpaceMode::XfemOff);
    const SparseSystem sys = interface_only(off, {1.0, 2.0, 3.0, 4.0}, 3);
    EXPECT_EQ(sys.matrix.nnz(), 0u);
}

TEST(System, SymmetricForBothProblems)
{
    const Mesh m = disk(1);
    for (const auto& [mode, spec] : {std::pair{SpaceMode::WeakBlend, weak_problem()},
                                     std::pair{SpaceMode::WeakNoBlend, weak_problem()},
                                     std::pair{SpaceMode::Strong, strong_problem()}}) {
        const EnrichedSpace s(m, circle, mode);
        const SparseSystem sys = assemble_system(s, spec, 3);
        EXPECT_TRUE(sys.matrix.structurally_symmetric());
        EXPECT_EQ(sys.matrix.asymmetry(), 0.0);
    }
}

TEST(System, Sparsity)
{
    const Mesh m = disk(1);
    const EnrichedSpace s(m, circle, SpaceMode::WeakBlend);
    const SparseSystem sys = assemble_system(s, weak_problem(), 3);
    for (Index i = 0; i < s.n_dofs(); ++i) {
        EXPECT_LE(sys.matrix.row_nnz(i), 18u);
        if (i < m.n_vertices() && !s.dofs().enriched(i)) {
            // A vertex without enrichment couples to at most 9 standard and
            // the enriched DoFs of its neighbours.
            std::size_t standard = 0;
            for (std::size_t k = sys.matrix.row_ptr[i]; k < sys.matrix.row_ptr[i + 1]; ++k)
                standard += sys.matrix.col[k] < m.n_vertices() ? 1 : 0;
            EXPECT_LE(standard, 9u);
        }
    }
}

TEST(Dirichlet, HomogeneousRowsBecomeIdentity)
{
    const Mesh m = disk(0);
    const EnrichedSpace s(m, circle, SpaceMode::WeakBlend);
    const SparseSystem sys = assemble_system(s, weak_problem(), 3);
    int boundary = 0;
    for (Index v = 0; v < m.n_vertices(); ++v) {
        if (!m.vertex(v).on_boundary)
            continue;
        ++boundary;
        EXPECT_EQ(sys.rhs[v], 0.0);
        for (std::size_t k = sys.matrix.row_ptr[v]; k < sys.matrix.row_ptr[v + 1]; ++k)
            EXPECT_EQ(sys.matrix.val[k], sys.matrix.col[k] == v ? 1.0 : 0.0);
        for (Index i = 0; i < s.n_dofs(); ++i)
            if (i != v)
                EXPECT_EQ(sys.matrix.at(i, v), 0.0);
    }
    EXPECT_EQ(boundary, 16);
}

TEST(Dirichlet, SymmetricElimination)
{
    SystemBuilder b(3);
    const double a[9] = {4, -1, 0, -1, 4, -1, 0, -1, 4};
    const Index dofs[3] = {0, 1, 2};
    const double f[3] = {1, 2, 3};
    b.add_local(dofs, a, f);
    SparseSystem sys = std::move(b).finalize();
    const std::pair<Index, double> fixed[] = {{2, 5.0}};
    apply_constraints(sys, fixed);
    EXPECT_EQ(sys.rhs[0], 1.0);
    EXPECT_EQ(sys.rhs[1], 2.0 + 5.0);
    EXPECT_EQ(sys.rhs[2], 5.0);
    EXPECT_EQ(sys.matrix.at(2, 2), 1.0);
    EXPECT_EQ(sys.matrix.at(1, 2), 0.0);
    EXPECT_EQ(sys.matrix.at(2, 1), 0.0);
    EXPECT_EQ(sys.matrix.at(1, 1), 4.0);
    const auto x = solve(sys).x;
    // Reduced 2x2: [[4,-1],[-1,4]] x = (1, 7)
    EXPECT_NEAR(x[0], (4.0 * 1.0 + 7.0) / 15.0, 1e-12);
    EXPECT_NEAR(x[1], (1.0 + 4.0 * 7.0) / 15.0, 1e-12);
    EXPECT_NEAR(x[2], 5.0, 1e-12);
}

TEST(Dirichlet, EnrichedBoundaryDofsFixedToZero)
{
    // Interface close to the boundary so boundary vertices get enriched.
    const Mesh m = disk(0);
    const LevelSet near = LevelSet::circle(0.92);
    const EnrichedSpace s(m, near, SpaceMode::WeakBlend);
    const auto fixed = dirichlet_constraints(s, [](const Vec2& x) { return x.x; });
    int enriched = 0;
    for (const auto& [dof, value] : fixed) {
        if (dof < m.n_vertices()) {
            EXPECT_TRUE(m.vertex(dof).on_boundary);
            EXPECT_EQ(value, m.vertex(dof).x.x);
        } else {
            ++enriched;
            EXPECT_EQ(value, 0.0);
        }
    }
    EXPECT_GT(enriched, 0);
}

TEST(DiscontinuousDirichlet, ContinuousLinearDataNeedsNoEnrichment)
{
    const Vec2 x1{0.0, 0.0}, x2{2.0, 0.0}, xc{0.5, 0.0};
    const auto g = [](const Vec2& x) { return 1.0 + 3.0 * x.x; };
    const auto [a1, a2] = discontinuous_dirichlet_coeffs(g(xc), g(xc), g(x1), g(x2), xc, x1, x2);
    EXPECT_NEAR(a1, 0.0, 1e-15);
    EXPECT_NEAR(a2, 0.0, 1e-15);
}

TEST(DiscontinuousDirichlet, ReconstructsOneSidedLimits)
{
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> u(-1.0, 1.0), t(0.05, 0.95);
    for (int i = 0; i < 200; ++i) {
        const Vec2 x1{u(rng), u(rng)}, x2{u(rng) + 3.0, u(rng)};
        const double s = i == 0 ? 0.5 : t(rng);
        const Vec2 xc = x1 + s * (x2 - x1);
        const double g1 = i == 0 ? 0.0 : u(rng), g2 = i == 0 ? 1.0 : u(rng);
        const double gv1 = i == 0 ? 0.0 : u(rng), gv2 = i == 0 ? 1.0 : u(rng);
        const auto [a1, a2] = discontinuous_dirichlet_coeffs(g1, g2, gv1, gv2, xc, x1, x2);
        // u_h = gv1 N1 + gv2 N2 + a1 N1 (psi + 1) + a2 N2 (psi - 1), psi = -1 / +1.
        const double n1 = 1.0 - s, n2 = s;
        const double from1 = gv1 * n1 + gv2 * n2 + a1 * n1 * 0.0 + a2 * n2 * (-2.0);
        const double from2 = gv1 * n1 + gv2 * n2 + a1 * n1 * 2.0 + a2 * n2 * 0.0;
        EXPECT_NEAR(from1, g1, 1e-13);
        EXPECT_NEAR(from2, g2, 1e-13);
        if (i == 0) {
            EXPECT_NEAR(a1, 0.5, 1e-15);
            EXPECT_NEAR(a2, 0.5, 1e-15);
        }
        // Swapping the one-sided data flips the sign of the jump part.
        const auto [b1, b2] = discontinuous_dirichlet_coeffs(g2, g1, gv1, gv2, xc, x1, x2);
        const double standard = gv1 * n1 + gv2 * n2;
        EXPECT_NEAR(2.0 * b1 * n1, g1 - standard, 1e-13);
        EXPECT_NEAR(-2.0 * b2 * n2, g2 - standard, 1e-13);
    }
}

TEST(DiscontinuousDirichlet, JumpAtVertexRejected)
{
    EXPECT_THROW(discontinuous_dirichlet_coeffs(0, 1, 0, 1, {0, 0}, {0, 0}, {1, 0}), Error);
    EXPECT_THROW(discontinuous_dirichlet_coeffs(0, 1, 0, 1, {1, 0}, {0, 0}, {1, 0}), Error);
}

TEST(PatchTest, LinearSolutionReproduced)
{
    const auto exact = [](const Vec2& x) { return 1.0 + 2.0 * x.x - 3.0 * x.y; };
    for (const LevelSet& ls : {circle, far_away}) {
        for (int cycle = 0; cycle < 2; ++cycle) {
            const Mesh m = disk(cycle);
            const EnrichedSpace s(m, ls, SpaceMode::XfemOff);
            ProblemSpec spec;
            spec.mu1 = spec.mu2 = 1.5;
            spec.dirichlet = exact;
            const auto sol = solve(assemble_system(s, spec, 3));
            for (Index v = 0; v < m.n_vertices(); ++v)
                EXPECT_NEAR(sol.x[v], exact(m.vertex(v).x), 1e-10);
        }
    }
}

TEST(WeakProblem, InterfaceJumpIsSecondOrder)
{
    double previous = 0.0;
    for (int cycle = 0; cycle < 4; ++cycle) {
        const Mesh m = disk(cycle);
        const EnrichedSpace s(m, circle, SpaceMode::WeakBlend);
        const auto u = solve(assemble_system(s, weak_problem(), 3)).x;
        double jump = 0.0;
        for (Index c = 0; c < m.n_cells(); ++c) {
            const auto& info = s.cell_info(c);
            if (!info.cut)
                continue;
            const auto r = build_interface_rule(m.cell_map(c), *info.cut, 3, circle);
            for (const Vec2& p : r.points)
                jump = std::max(jump, std::abs(s.evaluate(u, c, p, Side::Omega1).value -
                                               s.evaluate(u, c, p, Side::Omega2).value));
        }
        if (cycle > 0)
            EXPECT_GT(previous / jump, 3.0) << "cycle " << cycle;
        previous = jump;
    }
    EXPECT_LT(previous, 1e-4);
}

TEST(StrongProblem, SingularSourceIsIntegratedAccurately)
{
    const Mesh m = disk(1);
    const EnrichedSpace s(m, circle, SpaceMode::Strong);
    Index origin = 0;
    while (norm(m.vertex(origin).x) > 1e-14)
        ++origin;
    const auto load = [&](bool flagged, int order) {
        ProblemSpec spec = strong_problem();
        if (!flagged)
            spec.source_singularity.reset();
        SystemBuilder b(s.n_dofs());
        assemble_volume(b, s, spec, order);
        return std::move(b).finalize().rhs[origin];
    };
    EXPECT_NEAR(load(true, 4), load(true, 12), 1e-5 * load(true, 12));
    EXPECT_GT(std::abs(load(false, 4) - load(true, 12)), 1e-3 * load(true, 12));
}
