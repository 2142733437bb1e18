#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

// Oracles written straight from the closed forms; none of them goes through
// the library's piece representation or quadrature.
namespace oracle {

inline constexpr double s1 = std::numbers::pi / 6.0;

// exp1 / exp3: (x-s)(x-s-10) + x^2 + a + sin(10x) left of s, x^2 + sin(10x) right.
inline double exp1(double x, double a)
{
    if (x < s1)
        return (x - s1) * (x - s1 - 10.0) + x * x + a + std::sin(10.0 * x);
    return x * x + std::sin(10.0 * x);
}

inline double exp1_left_derivative(double x, double a, int k)
{
    switch (k) {
    case 0: return (x - s1) * (x - s1 - 10.0) + x * x + a + std::sin(10.0 * x);
    case 1: return 2.0 * (x - s1) - 10.0 + 2.0 * x + 10.0 * std::cos(10.0 * x);
    case 2: return 4.0 - 100.0 * std::sin(10.0 * x);
    default: return -1000.0 * std::cos(10.0 * x);
    }
}

inline double exp1_right_derivative(double x, int k)
{
    switch (k) {
    case 0: return x * x + std::sin(10.0 * x);
    case 1: return 2.0 * x + 10.0 * std::cos(10.0 * x);
    case 2: return 2.0 - 100.0 * std::sin(10.0 * x);
    default: return -1000.0 * std::cos(10.0 * x);
    }
}

// Jump of the k-th derivative of the two extended pieces, right minus left, at x.
inline double exp1_jump(double x, double a, int k)
{
    return exp1_right_derivative(x, k) - exp1_left_derivative(x, a, k);
}

inline double exp1_antiderivative_left(double x, double a)
{
    return 2.0 * x * x * x / 3.0 - (s1 + 5.0) * x * x + (s1 * (s1 + 10.0) + a) * x - std::cos(10.0 * x) / 10.0;
}

inline double exp1_antiderivative_right(double x) { return x * x * x / 3.0 - std::cos(10.0 * x) / 10.0; }

inline double exp1_integral(double lo, double hi, double a)
{
    auto F = [a](double x) {
        if (x < s1)
            return exp1_antiderivative_left(x, a);
        return exp1_antiderivative_left(s1, a) + exp1_antiderivative_right(x) - exp1_antiderivative_right(s1);
    };
    return F(hi) - F(lo);
}

inline double exp1_average(double lo, double hi, double a) { return exp1_integral(lo, hi, a) / (hi - lo); }

// Distance in units in the last place.
inline std::uint64_t ulp_distance(double a, double b)
{
    if (a == b)
        return 0;
    auto key = [](double v) {
        std::int64_t i;
        std::memcpy(&i, &v, sizeof v);
        return i < 0 ? std::numeric_limits<std::int64_t>::min() - i : i;
    };
    const std::int64_t ka = key(a), kb = key(b);
    return ka > kb ? static_cast<std::uint64_t>(ka - kb) : static_cast<std::uint64_t>(kb - ka);
}

struct Cubic {
    double c0, c1, c2, c3;
    double operator()(double x) const { return ((c3 * x + c2) * x + c1) * x + c0; }
};

inline Cubic random_cubic(std::mt19937_64& rng, double scale = 1.0)
{
    std::uniform_real_distribution<double> u(-scale, scale);
    return {u(rng), u(rng), u(rng), u(rng)};
}

// Two cubics joined at s with value and slope jumps of size 3..6.
struct TwoCubics {
    double s;
    Cubic left, right;   // in t = x - s
    double operator()(double x) const { return x < s ? left(x - s) : right(x - s); }
};

inline TwoCubics random_two_cubics(std::mt19937_64& rng, bool continuous)
{
    std::uniform_real_distribution<double> loc(0.35, 0.65), c(-2, 2), big(3, 6);
    TwoCubics f{loc(rng), random_cubic(rng, 2.0), random_cubic(rng, 2.0)};
    f.right.c0 = continuous ? f.left.c0 : f.left.c0 + big(rng) * (c(rng) > 0 ? 1 : -1);
    f.right.c1 = f.left.c1 + big(rng) * (c(rng) > 0 ? 1 : -1);
    return f;
}

} // namespace oracle
