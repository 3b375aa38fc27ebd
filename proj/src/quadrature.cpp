#include "ventcel/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace ventcel::quad {

namespace {

LineRule make_gauss_legendre(int n)
{
    LineRule rule;
    rule.points.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // Newton on P_n starting from the Chebyshev-like guess.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        if (n == 1) {
            x = 0.0;
            dp = 1.0;
        }
        const double w = (n == 1) ? 2.0 : 2.0 / ((1.0 - x * x) * dp * dp);
        rule.points[n - 1 - i] = 0.5 * (x + 1.0);
        rule.weights[n - 1 - i] = 0.5 * w;
    }
    return rule;
}

}  // namespace

const LineRule& gauss_legendre(int n)
{
    static std::mutex mutex;
    static std::map<int, LineRule> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make_gauss_legendre(n)).first;
    return it->second;
}

const TriangleRule& triangle3()
{
    static const TriangleRule rule{
        {{{2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0}},
         {{1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0}},
         {{1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0}}},
        {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}};
    return rule;
}

const TriangleRule& triangle6()
{
    constexpr double a = 0.44594849091596488632;
    constexpr double wa = 0.22338158967801146570;
    constexpr double b = 0.091576213509770743460;
    constexpr double wb = 0.10995174365532186764;
    static const TriangleRule rule{
        {{{a, a, 1 - 2 * a}},
         {{a, 1 - 2 * a, a}},
         {{1 - 2 * a, a, a}},
         {{b, b, 1 - 2 * b}},
         {{b, 1 - 2 * b, b}},
         {{1 - 2 * b, b, b}}},
        {wa, wa, wa, wb, wb, wb}};
    return rule;
}

}  // namespace ventcel::quad
