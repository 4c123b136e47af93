#ifndef XFEM_DRIVER_HPP
#define XFEM_DRIVER_HPP

#include "xfem/assembly.hpp"
#include "xfem/disk_mesh.hpp"
#include "xfem/enriched_space.hpp"
#include "xfem/params.hpp"
#include "xfem/postprocess.hpp"
#include "xfem/problems.hpp"
#include "xfem/solver.hpp"

#include <filesystem>
#include <ostream>
#include <string>

namespace xfem {

enum class ProblemKind { Weak, Strong };

inline ProblemKind parse_problem_kind(const std::string& s)
{
    if (s == "weak")
        return ProblemKind::Weak;
    if (s == "strong")
        return ProblemKind::Strong;
    throw Error("unknown problem '" + s + "' (expected weak or strong)");
}

inline SpaceMode space_mode(const Params& params, ProblemKind problem) noexcept
{
    if (!params.use_xfem)
        return SpaceMode::XfemOff;
    if (problem == ProblemKind::Strong)
        return SpaceMode::Strong;
    return params.blending ? SpaceMode::WeakBlend : SpaceMode::WeakNoBlend;
}

struct RunOptions
{
    bool write_vtk = true;
    std::filesystem::path output_dir = ".";
};

/// Refinement study. Cycle 0 is the coarse disk refined twice; every cycle
/// assembles, solves, measures errors (Gauss order q_points + 2) and prints a
/// block, then the rate table follows.
inline ErrorReport run(const Params& params, ProblemKind problem, std::ostream& out, const RunOptions& opts = {})
{
    if (params.cycles < 1 || params.q_points < 1)
        throw Error("run: cycles and q_points must be >= 1");
    const ProblemSpec spec = problem == ProblemKind::Weak ? weak_problem() : strong_problem();
    const LevelSet ls = LevelSet::circle(interface_radius);
    const SpaceMode mode = space_mode(params, problem);

    ErrorReport report;
    Mesh mesh = refine(build_coarse_disk(domain_radius), 2);
    for (int cycle = 0; cycle < params.cycles; ++cycle) {
        if (cycle > 0)
            mesh = refine(mesh);
        const EnrichedSpace space(mesh, ls, mode);
        const SparseSystem sys = assemble_system(space, spec, params.q_points);
        const SolveResult sol = solve(sys);
        const ErrorNorms err = measure_errors(space, sol.x, *spec.exact, params.q_points + 2);

        out << "Cycle " << cycle << ":\n"
            << "   Number of active cells:       " << mesh.n_cells() << '\n'
            << "   Number of degrees of freedom: " << space.n_dofs() << '\n'
            << "   L2 error = " << err.l2 << '\n'
            << "   energy error = " << err.energy << '\n';
        out.flush();

        report.cycles.push_back({cycle, mesh.n_cells(), space.n_dofs(), err.l2, err.energy, sol.iterations,
                                 sol.condition_estimate});
        if (opts.write_vtk)
            write_vtk(space, sol.x, opts.output_dir / ("solution-" + std::to_string(cycle) + ".vtk"));
    }
    if (report.cycles.size() >= 2)
        out << rate_table(report);
    return report;
}

} // namespace xfem

#endif // XFEM_DRIVER_HPP
