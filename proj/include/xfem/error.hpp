#ifndef XFEM_ERROR_HPP
#define XFEM_ERROR_HPP

#include <sstream>
#include <stdexcept>
#include <string>

namespace xfem {

/// Base exception for every failure raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Thrown by the iterative solvers; carries the last true residual norm.
class SolverError : public Error
{
public:
    SolverError(const std::string& what, double residual)
        : Error(what + " (residual " + format_residual(residual) + ")"), residual_(residual)
    {}

    double residual() const noexcept { return residual_; }

private:
    static std::string format_residual(double r)
    {
        std::ostringstream os;
        os << r;
        return os.str();
    }

    double residual_;
};

} // namespace xfem

#endif // XFEM_ERROR_HPP
