#pragma once

// Test-only oracles and seeded generators. Deliberately naive: O(n^2) pair scans, exhaustive
// subset enumeration and adaptive quadrature, sharing no code with the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "statguard/statguard.hpp"

namespace oracle {

struct PairCounts {
    std::int64_t concordant = 0;
    std::int64_t discordant = 0;
    std::int64_t x_ties = 0;  // tied in X (including both)
    std::int64_t y_ties = 0;  // tied in Y (including both)
    std::int64_t xy_ties = 0; // tied in both
    double tau_b = 0.0;
};

inline PairCounts pair_counts(std::vector<double> const& x, std::vector<double> const& y)
{
    PairCounts p;
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = i + 1; j < x.size(); ++j) {
            bool tx = x[i] == x[j];
            bool ty = y[i] == y[j];
            if (tx) {
                ++p.x_ties;
            }
            if (ty) {
                ++p.y_ties;
            }
            if (tx && ty) {
                ++p.xy_ties;
            }
            if (!tx && !ty) {
                if ((x[i] < x[j]) == (y[i] < y[j])) {
                    ++p.concordant;
                } else {
                    ++p.discordant;
                }
            }
        }
    }
    double n0 = static_cast<double>(x.size()) * static_cast<double>(x.size() - 1) / 2.0;
    double denom = std::sqrt((n0 - static_cast<double>(p.x_ties)) * (n0 - static_cast<double>(p.y_ties)));
    p.tau_b = denom > 0 ? static_cast<double>(p.concordant - p.discordant) / denom : 0.0;
    return p;
}

// c_r - d_r per record by direct enumeration.
inline std::vector<std::int64_t> cd(std::vector<double> const& x, std::vector<double> const& y)
{
    std::vector<std::int64_t> out(x.size(), 0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = 0; j < x.size(); ++j) {
            if (i == j || x[i] == x[j] || y[i] == y[j]) {
                continue;
            }
            out[i] += (x[i] < x[j]) == (y[i] < y[j]) ? 1 : -1;
        }
    }
    return out;
}

inline std::int64_t score(std::vector<double> const& x, std::vector<double> const& y)
{
    auto p = pair_counts(x, y);
    return p.concordant - p.discordant;
}

inline std::int64_t score_without(std::vector<double> const& x, std::vector<double> const& y,
                                  std::vector<bool> const& removed)
{
    std::vector<double> sx, sy;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!removed[i]) {
            sx.push_back(x[i]);
            sy.push_back(y[i]);
        }
    }
    return score(sx, sy);
}

// Calls f(mask) for every k-subset of {0..n-1}.
inline void for_each_subset(std::size_t n, std::size_t k, std::function<void(std::vector<bool> const&)> const& f)
{
    std::vector<bool> mask(n, false);
    std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(k), true);
    std::sort(mask.begin(), mask.end());
    do {
        f(mask);
    } while (std::next_permutation(mask.begin(), mask.end()));
}

// Adaptive Simpson quadrature.
inline double simpson(std::function<double(double)> const& f, double a, double b, double fa, double fm, double fb,
                      double whole, double tol, int depth)
{
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m);
    double rm = 0.5 * (m + b);
    double flm = f(lm);
    double frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol) {
        return left + right + (left + right - whole) / 15.0;
    }
    return simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate(std::function<double(double)> const& f, double a, double b, double tol = 1e-14)
{
    double fa = f(a);
    double fb = f(b);
    double fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson(f, a, b, fa, fm, fb, whole, tol, 60);
}

// Upper chi-square tail by integrating the density over t = sqrt(x), which removes the
// singularity at zero for one degree of freedom. Split into unit panels for robustness.
inline double chi_square_tail(double q, int dof)
{
    double k = dof;
    double log_norm = -0.5 * k * std::log(2.0) - std::lgamma(0.5 * k);
    auto g = [&](double t) {
        if (t <= 0.0) {
            return dof == 1 ? 2.0 * std::exp(log_norm) : 0.0;
        }
        return 2.0 * std::exp((k - 1.0) * std::log(t) - 0.5 * t * t + log_norm);
    };
    double lo = std::sqrt(q);
    double hi = std::max(lo, std::sqrt(k)) + 40.0;
    double total = 0.0;
    for (double a = lo; a < hi; a += 1.0) {
        total += integrate(g, a, std::min(a + 1.0, hi));
    }
    return total;
}

inline double normal_tail(double z)
{
    auto phi = [](double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * M_PI); };
    if (z < 0.0) {
        return 1.0 - normal_tail(-z);
    }
    double total = 0.0;
    for (double a = z; a < z + 40.0; a += 1.0) {
        total += integrate(phi, a, a + 1.0);
    }
    return total;
}

// Naive graphoid closure: every rule applied to every member (pair) until nothing changes.
// Statements are (x, y, z) with x < y canonical; symmetry is implicit.
using Stmt = std::tuple<std::set<std::string>, std::set<std::string>, std::set<std::string>>;

inline Stmt canon(std::set<std::string> x, std::set<std::string> y, std::set<std::string> z)
{
    if (y < x) {
        std::swap(x, y);
    }
    return {x, y, z};
}

inline std::vector<std::set<std::string>> nonempty_proper_subsets(std::set<std::string> const& s)
{
    std::vector<std::string> v(s.begin(), s.end());
    std::vector<std::set<std::string>> out;
    for (std::uint64_t m = 1; m + 1 < (std::uint64_t{1} << v.size()); ++m) {
        std::set<std::string> sub;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (m >> i & 1) {
                sub.insert(v[i]);
            }
        }
        out.push_back(sub);
    }
    return out;
}

inline std::set<std::string> minus(std::set<std::string> const& a, std::set<std::string> const& b)
{
    std::set<std::string> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
    return out;
}

inline std::set<std::string> plus(std::set<std::string> const& a, std::set<std::string> const& b)
{
    std::set<std::string> out = a;
    out.insert(b.begin(), b.end());
    return out;
}

inline std::set<Stmt> graphoid_closure(std::set<Stmt> current)
{
    bool changed = true;
    while (changed) {
        changed = false;
        std::set<Stmt> next = current;
        for (auto const& [a, b, z] : current) {
            for (auto const& [x, yw] : {std::pair{a, b}, std::pair{b, a}}) {
                for (auto const& w : nonempty_proper_subsets(yw)) {
                    auto y = minus(yw, w);
                    next.insert(canon(x, y, z));           // decomposition
                    next.insert(canon(x, y, plus(z, w)));  // weak union
                }
                // contraction: x ⟂ y | z  and  x ⟂ w | z ∪ y  =>  x ⟂ y ∪ w | z
                for (auto const& [c, d, z2] : current) {
                    for (auto const& [x2, w] : {std::pair{c, d}, std::pair{d, c}}) {
                        if (x2 == x && z2 == plus(z, yw) && minus(z2, z) == yw) {
                            next.insert(canon(x, plus(yw, w), z));
                        }
                    }
                }
            }
        }
        if (next.size() != current.size()) {
            current = std::move(next);
            changed = true;
        }
    }
    return current;
}

inline Stmt to_stmt(statguard::StatConstraint const& c)
{
    auto s = [](statguard::VarSet const& v) { return std::set<std::string>(v.begin(), v.end()); };
    return canon(s(c.x()), s(c.y()), s(c.z()));
}

} // namespace oracle

namespace gen {

using Rng = std::mt19937_64;

inline std::string var(std::size_t i) { return std::string(1, static_cast<char>('A' + i)); }

// Random elementary 3-variable statement (x ⟂ y or x ⟂ y | z) over the first `universe` letters.
inline statguard::StatConstraint three_var(Rng& rng, std::size_t universe, statguard::Polarity pol)
{
    std::uniform_int_distribution<std::size_t> pick(0, universe - 1);
    auto a = pick(rng);
    std::size_t b = a;
    while (b == a) {
        b = pick(rng);
    }
    std::vector<std::string> z;
    if (universe > 2 && std::bernoulli_distribution(0.6)(rng)) {
        std::size_t c = a;
        while (c == a || c == b) {
            c = pick(rng);
        }
        z.push_back(var(c));
    }
    return statguard::StatConstraint({var(a)}, {var(b)}, statguard::VarSet(z), pol);
}

// Values drawn from a small pool so that roughly `dup` of them repeat an earlier value.
inline std::vector<double> with_ties(Rng& rng, std::size_t n, double dup)
{
    std::vector<double> v;
    std::normal_distribution<double> normal;
    std::bernoulli_distribution repeat(dup);
    for (std::size_t i = 0; i < n; ++i) {
        if (!v.empty() && repeat(rng)) {
            v.push_back(v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)]);
        } else {
            v.push_back(std::round(normal(rng) * 1000.0) / 10.0);
        }
    }
    return v;
}

inline std::vector<double> small_ints(Rng& rng, std::size_t n, int hi)
{
    std::uniform_int_distribution<int> d(0, hi);
    std::vector<double> v(n);
    for (auto& x : v) {
        x = d(rng);
    }
    return v;
}

inline statguard::Column numeric(std::string name, std::vector<double> const& v)
{
    std::vector<std::optional<double>> cells(v.begin(), v.end());
    return statguard::Column::numerical(std::move(name), std::move(cells));
}

inline statguard::Column categorical(std::string name, std::vector<std::string> const& v)
{
    std::vector<std::optional<std::string>> cells(v.begin(), v.end());
    return statguard::Column::categorical(std::move(name), std::move(cells));
}

// Two numerical columns A, B of length n; B = rho * A + noise.
inline statguard::Dataset pair_dataset(Rng& rng, std::size_t n, double rho)
{
    std::normal_distribution<double> normal;
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = normal(rng);
        b[i] = rho * a[i] + std::sqrt(1.0 - rho * rho) * normal(rng);
    }
    return statguard::Dataset({numeric("A", a), numeric("B", b)});
}

} // namespace gen
