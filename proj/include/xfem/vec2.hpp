#ifndef XFEM_VEC2_HPP
#define XFEM_VEC2_HPP

#include <cmath>
#include <cstddef>

namespace xfem {

using Index = std::size_t;

struct Vec2
{
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2& operator+=(const Vec2& o) noexcept { x += o.x; y += o.y; return *this; }
    constexpr Vec2& operator-=(const Vec2& o) noexcept { x -= o.x; y -= o.y; return *this; }
    constexpr Vec2& operator*=(double s) noexcept { x *= s; y *= s; return *this; }
};

constexpr Vec2 operator+(Vec2 a, const Vec2& b) noexcept { return a += b; }
constexpr Vec2 operator-(Vec2 a, const Vec2& b) noexcept { return a -= b; }
constexpr Vec2 operator-(const Vec2& a) noexcept { return {-a.x, -a.y}; }
constexpr Vec2 operator*(double s, Vec2 a) noexcept { return a *= s; }
constexpr Vec2 operator*(Vec2 a, double s) noexcept { return a *= s; }
constexpr bool operator==(const Vec2& a, const Vec2& b) noexcept { return a.x == b.x && a.y == b.y; }

constexpr double dot(const Vec2& a, const Vec2& b) noexcept { return a.x * b.x + a.y * b.y; }
constexpr double cross(const Vec2& a, const Vec2& b) noexcept { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& a) noexcept { return std::hypot(a.x, a.y); }
constexpr Vec2 midpoint(const Vec2& a, const Vec2& b) noexcept { return 0.5 * (a + b); }

/// Row-major 2x2 matrix; for a Jacobian, column j holds d x / d xi_j.
struct Mat2
{
    double a00 = 0.0, a01 = 0.0;
    double a10 = 0.0, a11 = 0.0;

    constexpr double det() const noexcept { return a00 * a11 - a01 * a10; }
    constexpr Vec2 operator*(const Vec2& v) const noexcept
    {
        return {a00 * v.x + a01 * v.y, a10 * v.x + a11 * v.y};
    }
    constexpr Mat2 transpose() const noexcept { return {a00, a10, a01, a11}; }
    constexpr Mat2 inverse() const noexcept
    {
        const double d = det();
        return {a11 / d, -a01 / d, -a10 / d, a00 / d};
    }
};

} // namespace xfem

#endif // XFEM_VEC2_HPP
