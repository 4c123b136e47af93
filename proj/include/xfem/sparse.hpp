#ifndef XFEM_SPARSE_HPP
#define XFEM_SPARSE_HPP

#include "xfem/error.hpp"
#include "xfem/vec2.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <tuple>
#include <vector>

namespace xfem {

/// Compressed sparse row matrix with sorted column indices per row.
struct CsrMatrix
{
    std::size_t n = 0;
    std::vector<std::size_t> row_ptr{0};
    std::vector<Index> col;
    std::vector<double> val;

    std::size_t nnz() const noexcept { return val.size(); }
    std::size_t row_nnz(Index i) const { return row_ptr[i + 1] - row_ptr[i]; }

    /// Entry (i,j), or 0 if not stored.
    double at(Index i, Index j) const
    {
        const auto first = col.begin() + static_cast<std::ptrdiff_t>(row_ptr[i]);
        const auto last = col.begin() + static_cast<std::ptrdiff_t>(row_ptr[i + 1]);
        const auto it = std::lower_bound(first, last, j);
        return (it != last && *it == j) ? val[static_cast<std::size_t>(it - col.begin())] : 0.0;
    }

    void multiply(std::span<const double> x, std::span<double> y) const
    {
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
                s += val[k] * x[col[k]];
            y[i] = s;
        }
    }

    std::vector<double> operator*(std::span<const double> x) const
    {
        std::vector<double> y(n);
        multiply(x, y);
        return y;
    }

    std::vector<double> diagonal() const
    {
        std::vector<double> d(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            d[i] = at(i, i);
        return d;
    }

    /// max |A_ij - A_ji| over stored entries; structural asymmetry counts as the entry itself.
    double asymmetry() const
    {
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
                worst = std::max(worst, std::abs(val[k] - at(col[k], i)));
        return worst;
    }

    bool structurally_symmetric() const
    {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
                const Index j = col[k];
                const auto first = col.begin() + static_cast<std::ptrdiff_t>(row_ptr[j]);
                const auto last = col.begin() + static_cast<std::ptrdiff_t>(row_ptr[j + 1]);
                if (!std::binary_search(first, last, i))
                    return false;
            }
        return true;
    }
};

struct SparseSystem
{
    CsrMatrix matrix;
    std::vector<double> rhs;
};

/// Collects cell-local contributions as triplets; duplicates are summed on finalize().
class SystemBuilder
{
public:
    explicit SystemBuilder(std::size_t n) : n_(n), rhs_(n, 0.0) {}

    std::size_t size() const noexcept { return n_; }

    void add(Index i, Index j, double v) { triplets_.emplace_back(i, j, v); }
    void add_rhs(Index i, double v) { rhs_[i] += v; }

    /// Adds a dense local block (row-major, dofs.size() squared) and local load.
    void add_local(std::span<const Index> dofs, std::span<const double> matrix, std::span<const double> load = {})
    {
        const std::size_t m = dofs.size();
        for (std::size_t a = 0; a < m; ++a) {
            for (std::size_t b = 0; b < m; ++b)
                triplets_.emplace_back(dofs[a], dofs[b], matrix[a * m + b]);
            if (!load.empty())
                rhs_[dofs[a]] += load[a];
        }
    }

    SparseSystem finalize() &&
    {
        // Stable, so duplicates are summed in insertion order and A_ij, A_ji stay bitwise equal.
        std::stable_sort(triplets_.begin(), triplets_.end(), [](const auto& l, const auto& r) {
            return std::tie(std::get<0>(l), std::get<1>(l)) < std::tie(std::get<0>(r), std::get<1>(r));
        });
        SparseSystem sys;
        CsrMatrix& a = sys.matrix;
        a.n = n_;
        a.row_ptr.assign(n_ + 1, 0);
        bool first = true;
        Index prev_i = 0, prev_j = 0;
        for (const auto& [i, j, v] : triplets_) {
            if (i >= n_ || j >= n_)
                throw Error("SystemBuilder: index out of range");
            if (!first && i == prev_i && j == prev_j) {
                a.val.back() += v;
                continue;
            }
            a.col.push_back(j);
            a.val.push_back(v);
            ++a.row_ptr[i + 1];
            prev_i = i;
            prev_j = j;
            first = false;
        }
        for (std::size_t i = 0; i < n_; ++i)
            a.row_ptr[i + 1] += a.row_ptr[i];
        sys.rhs = std::move(rhs_);
        return sys;
    }

private:
    std::size_t n_;
    std::vector<std::tuple<Index, Index, double>> triplets_;
    std::vector<double> rhs_;
};

inline double dot(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

} // namespace xfem

#endif // XFEM_SPARSE_HPP
