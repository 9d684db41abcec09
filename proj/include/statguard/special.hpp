#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace statguard {

namespace detail {

// Series for the regularized lower incomplete gamma P(a, x); converges quickly for x < a + 1.
inline double gamma_p_series(double a, double x)
{
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < 10000; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-17) {
            break;
        }
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Modified Lentz continued fraction for Q(a, x); used for x >= a + 1.
inline double gamma_q_continued_fraction(double a, double x)
{
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) {
            d = tiny;
        }
        c = b + an / c;
        if (std::abs(c) < tiny) {
            c = tiny;
        }
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) {
            break;
        }
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

} // namespace detail

// Regularized upper incomplete gamma Q(a, x).
inline double gamma_q(double a, double x)
{
    if (!(a > 0.0) || x < 0.0) {
        throw std::domain_error("gamma_q requires a > 0 and x >= 0");
    }
    if (x == 0.0) {
        return 1.0;
    }
    if (std::isinf(x)) {
        return 0.0;
    }
    if (x < a + 1.0) {
        return 1.0 - detail::gamma_p_series(a, x);
    }
    return detail::gamma_q_continued_fraction(a, x);
}

// Upper tail of the chi-square distribution with `dof` degrees of freedom.
inline double chi_square_sf(double q, long dof)
{
    if (dof < 1) {
        throw std::domain_error("chi_square_sf requires dof >= 1");
    }
    if (q < 0.0 || std::isnan(q)) {
        throw std::domain_error("chi_square_sf requires q >= 0");
    }
    double p = gamma_q(0.5 * static_cast<double>(dof), 0.5 * q);
    return std::clamp(p, 0.0, 1.0);
}

// Upper tail of the standard normal.
inline double normal_sf(double z)
{
    return 0.5 * std::erfc(z / std::sqrt(2.0));
}

} // namespace statguard
