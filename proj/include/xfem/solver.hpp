#ifndef XFEM_SOLVER_HPP
#define XFEM_SOLVER_HPP

#include "xfem/error.hpp"
#include "xfem/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace xfem {

enum class SolverMethod { ConjugateGradient, MinimumResidual };

struct SolverConfig
{
    SolverMethod method = SolverMethod::ConjugateGradient;
    double rel_tol = 1e-12;
    std::optional<std::size_t> max_iters; ///< defaults to 10 * n
};

struct SolveResult
{
    std::vector<double> x;
    std::size_t iterations = 0;
    double residual = 0.0;        ///< true ||b - A x||_2
    SolverMethod method = SolverMethod::ConjugateGradient;
    double condition_estimate = std::numeric_limits<double>::quiet_NaN(); ///< of the Jacobi-preconditioned matrix (CG only)
};

namespace detail {

inline std::vector<double> inverse_abs_diagonal(const CsrMatrix& a)
{
    std::vector<double> d = a.diagonal();
    for (double& v : d)
        v = v != 0.0 ? 1.0 / std::abs(v) : 1.0;
    return d;
}

inline double true_residual(const CsrMatrix& a, std::span<const double> b, std::span<const double> x)
{
    std::vector<double> r = a * x;
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = b[i] - r[i];
    return norm2(r);
}

/// Rounding floor of ||b - A x|| for a double-precision x: 64 eps || |A| |x| ||.
inline double residual_floor(const CsrMatrix& a, std::span<const double> x)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.n; ++i) {
        double row = 0.0;
        for (std::size_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
            row += std::abs(a.val[k] * x[a.col[k]]);
        s += row * row;
    }
    return 64.0 * std::numeric_limits<double>::epsilon() * std::sqrt(s);
}

inline bool accepted(const CsrMatrix& a, std::span<const double> x, double residual, double tol)
{
    return residual <= tol + residual_floor(a, x);
}

/// Number of eigenvalues below s of the symmetric tridiagonal (diag, off).
inline std::size_t sturm_count(std::span<const double> diag, std::span<const double> off, double s)
{
    std::size_t count = 0;
    double q = 1.0;
    for (std::size_t i = 0; i < diag.size(); ++i) {
        const double o = i > 0 ? off[i - 1] : 0.0;
        q = diag[i] - s - (i > 0 ? o * o / q : 0.0);
        if (q == 0.0)
            q = 1e-300;
        if (q < 0.0)
            ++count;
    }
    return count;
}

/// Ratio of the extreme Ritz values from the CG coefficients (Lanczos connection).
inline double lanczos_condition(std::span<const double> alphas, std::span<const double> betas)
{
    const std::size_t k = alphas.size();
    if (k == 0)
        return std::numeric_limits<double>::quiet_NaN();
    std::vector<double> diag(k), off(k > 0 ? k - 1 : 0);
    for (std::size_t j = 0; j < k; ++j) {
        diag[j] = 1.0 / alphas[j] + (j > 0 ? betas[j - 1] / alphas[j - 1] : 0.0);
        if (j + 1 < k)
            off[j] = std::sqrt(betas[j]) / alphas[j];
    }
    double hi = 0.0;
    for (std::size_t j = 0; j < k; ++j)
        hi = std::max(hi, std::abs(diag[j]) + (j > 0 ? std::abs(off[j - 1]) : 0.0) + (j + 1 < k ? std::abs(off[j]) : 0.0));
    auto bisect = [&](std::size_t index) {
        double lo = 0.0, up = hi;
        for (int it = 0; it < 200 && up - lo > 1e-15 * up; ++it) {
            const double mid = 0.5 * (lo + up);
            if (sturm_count(diag, off, mid) > index)
                up = mid;
            else
                lo = mid;
        }
        return 0.5 * (lo + up);
    };
    const double lmin = bisect(0);
    const double lmax = bisect(k - 1);
    return lmin > 0.0 ? lmax / lmin : std::numeric_limits<double>::infinity();
}

} // namespace detail

/// Jacobi-preconditioned MINRES for symmetric (possibly indefinite) systems.
inline SolveResult minres(const CsrMatrix& a, std::span<const double> b, const SolverConfig& cfg = {})
{
    const std::size_t n = a.n;
    const std::size_t max_iters = cfg.max_iters.value_or(10 * std::max<std::size_t>(n, 1));
    const double bnorm = norm2(b);
    const auto minv = detail::inverse_abs_diagonal(a);

    SolveResult res;
    res.method = SolverMethod::MinimumResidual;
    res.x.assign(n, 0.0);
    if (bnorm == 0.0)
        return res;
    const double tol = cfg.rel_tol * bnorm;

    std::vector<double> r1(b.begin(), b.end()), r2 = r1, y(n), v(n), w(n, 0.0), w1(n), w2(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        y[i] = minv[i] * r1[i];
    double beta1 = std::sqrt(dot(r1, y));
    double beta = beta1, oldb = 0.0, dbar = 0.0, epsln = 0.0, phibar = beta1, cs = -1.0, sn = 0.0;

    for (std::size_t itn = 1; itn <= max_iters; ++itn) {
        const double s = 1.0 / beta;
        for (std::size_t i = 0; i < n; ++i)
            v[i] = s * y[i];
        a.multiply(v, y);
        if (itn >= 2)
            for (std::size_t i = 0; i < n; ++i)
                y[i] -= (beta / oldb) * r1[i];
        const double alfa = dot(v, y);
        for (std::size_t i = 0; i < n; ++i)
            y[i] -= (alfa / beta) * r2[i];
        r1.swap(r2);
        r2 = y;
        for (std::size_t i = 0; i < n; ++i)
            y[i] = minv[i] * r2[i];
        oldb = beta;
        beta = std::sqrt(std::max(dot(r2, y), 0.0));

        const double oldeps = epsln;
        const double delta = cs * dbar + sn * alfa;
        const double gbar = sn * dbar - cs * alfa;
        epsln = sn * beta;
        dbar = -cs * beta;
        const double gamma = std::max(std::hypot(gbar, beta), std::numeric_limits<double>::min());
        cs = gbar / gamma;
        sn = beta / gamma;
        const double phi = cs * phibar;
        phibar = sn * phibar;

        w1.swap(w2);
        w2.swap(w);
        for (std::size_t i = 0; i < n; ++i) {
            w[i] = (v[i] - oldeps * w1[i] - delta * w2[i]) / gamma;
            res.x[i] += phi * w[i];
        }
        res.iterations = itn;

        // phibar tracks the preconditioned residual; confirm with the true one.
        if (phibar <= 0.1 * cfg.rel_tol * beta1 || beta == 0.0 || itn % 50 == 0) {
            res.residual = detail::true_residual(a, b, res.x);
            if (detail::accepted(a, res.x, res.residual, tol))
                return res;
            if (beta == 0.0)
                break;
        }
    }
    res.residual = detail::true_residual(a, b, res.x);
    if (detail::accepted(a, res.x, res.residual, tol))
        return res;
    throw SolverError("minres: no convergence within " + std::to_string(max_iters) + " iterations", res.residual);
}

namespace detail {
struct NegativeCurvature
{};
} // namespace detail

/// Jacobi-preconditioned CG. Iterates until the recursive residual is below
/// rel_tol ||b||, then accepts x if the true residual is below rel_tol ||b||
/// plus its rounding floor; otherwise restarts from the true residual.
inline SolveResult conjugate_gradient(const CsrMatrix& a, std::span<const double> b, const SolverConfig& cfg = {})
{
    const std::size_t n = a.n;
    const std::size_t max_iters = cfg.max_iters.value_or(10 * std::max<std::size_t>(n, 1));
    const double bnorm = norm2(b);
    const auto minv = detail::inverse_abs_diagonal(a);

    SolveResult res;
    res.x.assign(n, 0.0);
    if (bnorm == 0.0)
        return res;
    const double tol = cfg.rel_tol * bnorm;

    std::vector<double> r(b.begin(), b.end()), z(n), p(n), ap(n);
    std::vector<double> alphas, betas;
    bool first_cycle = true;

    while (res.iterations < max_iters) {
        for (std::size_t i = 0; i < n; ++i)
            p[i] = z[i] = minv[i] * r[i];
        double rz = dot(r, z);
        bool converged = false;
        while (res.iterations < max_iters) {
            a.multiply(p, ap);
            const double pap = dot(p, ap);
            if (!(pap > 0.0))
                throw detail::NegativeCurvature{};
            const double alpha = rz / pap;
            for (std::size_t i = 0; i < n; ++i) {
                res.x[i] += alpha * p[i];
                r[i] -= alpha * ap[i];
            }
            ++res.iterations;
            if (norm2(r) <= tol) {
                converged = true;
                if (first_cycle)
                    alphas.push_back(alpha);
                break;
            }
            for (std::size_t i = 0; i < n; ++i)
                z[i] = minv[i] * r[i];
            const double rz_new = dot(r, z);
            const double beta = rz_new / rz;
            rz = rz_new;
            if (first_cycle) {
                alphas.push_back(alpha);
                betas.push_back(beta);
            }
            for (std::size_t i = 0; i < n; ++i)
                p[i] = z[i] + beta * p[i];
        }
        if (first_cycle)
            res.condition_estimate = detail::lanczos_condition(alphas, betas);
        first_cycle = false;

        std::vector<double> ax = a * res.x;
        for (std::size_t i = 0; i < n; ++i)
            r[i] = b[i] - ax[i];
        res.residual = norm2(r);
        if (detail::accepted(a, res.x, res.residual, tol))
            return res;
        if (!converged)
            break;
    }
    throw SolverError("cg: no convergence within " + std::to_string(max_iters) + " iterations", res.residual);
}

/// Solves A x = b to ||b - A x|| <= rel_tol ||b||, up to the rounding floor
/// 64 eps || |A| |x| || that no double-precision x can beat. CG falls back to
/// MINRES on negative curvature.
inline SolveResult solve(const SparseSystem& sys, const SolverConfig& cfg = {})
{
    if (!(cfg.rel_tol > 0.0))
        throw Error("solve: rel_tol must be positive");
    for (double v : sys.rhs)
        if (!std::isfinite(v))
            throw Error("solve: right-hand side is not finite");
    if (cfg.method == SolverMethod::MinimumResidual)
        return minres(sys.matrix, sys.rhs, cfg);
    try {
        return conjugate_gradient(sys.matrix, sys.rhs, cfg);
    } catch (const detail::NegativeCurvature&) {
        return minres(sys.matrix, sys.rhs, cfg);
    }
}

} // namespace xfem

#endif // XFEM_SOLVER_HPP
