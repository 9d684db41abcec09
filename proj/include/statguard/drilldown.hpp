#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "statguard/constraint.hpp"
#include "statguard/dataset.hpp"
#include "statguard/hypotest.hpp"
#include "statguard/ranktree.hpp"

namespace statguard {

class DrillDownError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class Strategy { K, KComplement };
enum class Direction { Minimize, Maximize };

inline std::string_view to_string(Strategy s) { return s == Strategy::K ? "k" : "kc"; }
inline std::string_view to_string(Direction d) { return d == Direction::Minimize ? "minimize" : "maximize"; }

// Relation of a record pair under (X, Y): +1 concordant, -1 discordant, 0 tied.
inline int pair_relation(double xi, double yi, double xj, double yj)
{
    auto sgn = [](double v) { return (v > 0.0) - (v < 0.0); };
    return sgn(xi - xj) * sgn(yi - yj);
}

// Per-record c_r - d_r over all pairs involving r.
struct BenefitVector {
    std::vector<std::int64_t> cd;
    int sign = 1; // sign of n_c - n_d over the whole input, +1 on an exact tie

    [[nodiscard]] std::size_t size() const { return cd.size(); }
    // 2 c_r + t_r == (n - 1) + (c_r - d_r)
    [[nodiscard]] std::int64_t benefit(std::size_t r) const { return static_cast<std::int64_t>(cd.size()) - 1 + cd[r]; }
    [[nodiscard]] std::int64_t score() const { return std::accumulate(cd.begin(), cd.end(), std::int64_t{0}) / 2; }
};

// O(n log n): an ascending sweep over strictly increasing X blocks scores each record against all
// records with smaller X, a descending sweep against those with larger X. Equal-X pairs are tied.
inline BenefitVector benefit_init_tau(std::span<double const> xs, std::span<double const> ys)
{
    if (xs.size() != ys.size()) {
        throw DrillDownError("benefit_init_tau: length mismatch");
    }
    if (xs.size() < 2) {
        throw DrillDownError("benefit_init_tau needs at least two records");
    }
    auto const n = xs.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return xs[a] < xs[b]; });

    RankDomain<double> domain(ys);
    auto ranks = domain.ranks(ys);
    OrderCounter counter(domain.size());
    BenefitVector bv;
    bv.cd.assign(n, 0);

    std::vector<std::pair<std::size_t, std::size_t>> blocks; // [begin, end) in `order`
    for (std::size_t i = 0; i < n;) {
        auto j = i;
        while (j < n && xs[order[j]] == xs[order[i]]) {
            ++j;
        }
        blocks.emplace_back(i, j);
        i = j;
    }

    for (auto const& [b, e] : blocks) {
        for (auto i = b; i < e; ++i) {
            auto r = order[i];
            bv.cd[r] += counter.count_less(ranks[r]) - counter.count_greater(ranks[r]);
        }
        for (auto i = b; i < e; ++i) {
            counter.insert(ranks[order[i]]);
        }
    }
    counter.clear();
    for (auto it = blocks.rbegin(); it != blocks.rend(); ++it) {
        auto [b, e] = *it;
        for (auto i = b; i < e; ++i) {
            auto r = order[i];
            bv.cd[r] += counter.count_greater(ranks[r]) - counter.count_less(ranks[r]);
        }
        for (auto i = b; i < e; ++i) {
            counter.insert(ranks[order[i]]);
        }
    }
    bv.sign = bv.score() < 0 ? -1 : 1;
    return bv;
}

struct DrillDownResult {
    StatConstraint constraint;
    Method method = Method::KendallTau;
    Strategy strategy = Strategy::K;
    Direction direction = Direction::Minimize;
    std::size_t k = 0;
    std::vector<std::size_t> suspects;          // original row ids
    std::vector<double> objective_trajectory;   // objective before the first step and after each step
    std::vector<std::pair<std::string, DrillDownResult>> strata; // conditional constraints only
    double ms_init = 0.0;
    double ms_greedy = 0.0;
    std::vector<std::string> notes;
};

struct GreedyOptions {
    bool rebuild = false; // recompute benefits from scratch after every removal
};

namespace detail {

using Clock = std::chrono::steady_clock;

inline double ms_since(Clock::time_point t0)
{
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

inline void check_k(std::size_t k, std::size_t n)
{
    if (k < 1 || k >= n) {
        throw DrillDownError("k must satisfy 1 <= k < n (k=" + std::to_string(k) + ", n=" + std::to_string(n) + ")");
    }
}

// Objective s (n_c - n_d). Removing r changes it by -s cd[r].
inline DrillDownResult greedy_tau(std::span<double const> xs, std::span<double const> ys,
                                  std::span<std::size_t const> ids, std::size_t k, Strategy strategy,
                                  Direction direction, GreedyOptions const& opts)
{
    auto const n = xs.size();
    check_k(k, n);
    DrillDownResult res;
    res.method = Method::KendallTau;
    res.strategy = strategy;
    res.direction = direction;
    res.k = k;

    auto t0 = Clock::now();
    auto bv = benefit_init_tau(xs, ys);
    res.ms_init = ms_since(t0);
    t0 = Clock::now();

    std::int64_t const s = bv.sign;
    std::int64_t objective = s * bv.score();
    res.objective_trajectory.push_back(static_cast<double>(objective));

    // Remove the record with the largest s*cd (lowers the objective most) or the smallest.
    bool const take_max = (strategy == Strategy::K) == (direction == Direction::Minimize);
    auto& cd = bv.cd;
    std::vector<std::size_t> alive(n);
    std::iota(alive.begin(), alive.end(), 0);
    std::vector<std::size_t> removed;

    auto const steps = strategy == Strategy::K ? k : n - k;
    for (std::size_t step = 0; step < steps; ++step) {
        std::size_t best_pos = 0;
        std::int64_t best = s * cd[alive[0]];
        for (std::size_t p = 1; p < alive.size(); ++p) {
            auto v = s * cd[alive[p]];
            if (take_max ? v > best : v < best) {
                best = v;
                best_pos = p;
            }
        }
        auto const j = alive[best_pos];
        alive.erase(alive.begin() + static_cast<std::ptrdiff_t>(best_pos));
        removed.push_back(j);
        objective -= s * cd[j];
        if (opts.rebuild) {
            if (alive.size() >= 2) {
                std::vector<double> sx, sy;
                for (auto r : alive) {
                    sx.push_back(xs[r]);
                    sy.push_back(ys[r]);
                }
                auto fresh = benefit_init_tau(sx, sy);
                for (std::size_t p = 0; p < alive.size(); ++p) {
                    cd[alive[p]] = fresh.cd[p];
                }
            } else {
                for (auto r : alive) {
                    cd[r] = 0;
                }
            }
        } else {
            double const xj = xs[j];
            double const yj = ys[j];
            for (auto r : alive) {
                cd[r] -= pair_relation(xs[r], ys[r], xj, yj);
            }
        }
        res.objective_trajectory.push_back(static_cast<double>(objective));
    }

    if (strategy == Strategy::K) {
        for (auto r : removed) {
            res.suspects.push_back(ids[r]);
        }
    } else {
        // Remaining records, most objective-raising (for Minimize) first.
        std::stable_sort(alive.begin(), alive.end(), [&](auto a, auto b) {
            return direction == Direction::Minimize ? s * cd[a] > s * cd[b] : s * cd[a] < s * cd[b];
        });
        for (auto r : alive) {
            res.suspects.push_back(ids[r]);
        }
    }
    res.ms_greedy = ms_since(t0);
    return res;
}

inline DrillDownResult greedy_chi2(Column const& x, Column const& y, std::span<std::size_t const> ids, std::size_t k,
                                   Strategy strategy, Direction direction)
{
    auto const n = x.size();
    check_k(k, n);
    DrillDownResult res;
    res.method = Method::ChiSquare;
    res.strategy = strategy;
    res.direction = direction;
    res.k = k;

    auto t0 = Clock::now();
    auto table = ContingencyTable::from_columns(x, y);
    if (table.degenerate()) {
        throw DrillDownError("degenerate contingency table: drill-down needs at least a 2x2 table");
    }
    // Row lists per cell, ascending view order (== ascending original id).
    auto const& rl = table.row_labels();
    auto const& cl = table.col_labels();
    std::map<std::string, std::size_t> rpos, cpos;
    for (std::size_t i = 0; i < rl.size(); ++i) {
        rpos[rl[i]] = i;
    }
    for (std::size_t j = 0; j < cl.size(); ++j) {
        cpos[cl[j]] = j;
    }
    std::vector<std::vector<std::size_t>> members(table.rows() * table.cols());
    for (std::size_t r = 0; r < n; ++r) {
        auto i = rpos.at(x.text(r));
        auto j = cpos.at(y.text(r));
        members[i * table.cols() + j].push_back(r);
    }
    std::vector<std::size_t> cursor(members.size(), 0);
    res.ms_init = ms_since(t0);
    t0 = Clock::now();

    res.objective_trajectory.push_back(table.pearson());
    bool const want_min = (strategy == Strategy::K) == (direction == Direction::Minimize);
    std::vector<std::size_t> removed;
    auto const steps = strategy == Strategy::K ? k : n - k;
    for (std::size_t step = 0; step < steps; ++step) {
        std::optional<std::size_t> best_cell;
        double best_q = 0.0;
        for (std::size_t i = 0; i < table.rows(); ++i) {
            for (std::size_t j = 0; j < table.cols(); ++j) {
                if (table.at(i, j) == 0) {
                    continue;
                }
                --table.at(i, j);
                double q = table.pearson();
                ++table.at(i, j);
                double tol = 1e-12 * std::max(1.0, std::abs(q));
                bool better = !best_cell || (want_min ? q < best_q - tol : q > best_q + tol);
                if (better) {
                    best_cell = i * table.cols() + j;
                    best_q = q;
                }
            }
        }
        auto cell = *best_cell;
        --table.at(cell / table.cols(), cell % table.cols());
        removed.push_back(members[cell][cursor[cell]++]);
        res.objective_trajectory.push_back(table.pearson());
    }

    if (strategy == Strategy::K) {
        for (auto r : removed) {
            res.suspects.push_back(ids[r]);
        }
    } else {
        std::vector<bool> gone(n, false);
        for (auto r : removed) {
            gone[r] = true;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (!gone[r]) {
                res.suspects.push_back(ids[r]);
            }
        }
    }
    res.ms_greedy = ms_since(t0);
    return res;
}

inline void require_numeric_pair(View const& view)
{
    if (view.columns.size() < 2 || view[0].kind() != ColumnKind::Numerical || view[1].kind() != ColumnKind::Numerical) {
        throw DrillDownError("tau drill-down needs two numerical columns");
    }
}

inline void require_categorical_pair(View const& view)
{
    if (view.columns.size() < 2 || view[0].kind() != ColumnKind::Categorical
        || view[1].kind() != ColumnKind::Categorical) {
        throw DrillDownError("chi-square drill-down needs two categorical columns");
    }
}

} // namespace detail

inline DrillDownResult k_strategy_tau(View const& view, std::size_t k, Direction direction, GreedyOptions const& opts = {})
{
    detail::require_numeric_pair(view);
    return detail::greedy_tau(view[0].reals(), view[1].reals(), view.row_ids, k, Strategy::K, direction, opts);
}

inline DrillDownResult kc_strategy_tau(View const& view, std::size_t k, Direction direction, GreedyOptions const& opts = {})
{
    detail::require_numeric_pair(view);
    return detail::greedy_tau(view[0].reals(), view[1].reals(), view.row_ids, k, Strategy::KComplement, direction, opts);
}

inline DrillDownResult k_strategy_chi2(View const& view, std::size_t k, Direction direction)
{
    detail::require_categorical_pair(view);
    return detail::greedy_chi2(view[0], view[1], view.row_ids, k, Strategy::K, direction);
}

inline DrillDownResult kc_strategy_chi2(View const& view, std::size_t k, Direction direction)
{
    detail::require_categorical_pair(view);
    return detail::greedy_chi2(view[0], view[1], view.row_ids, k, Strategy::KComplement, direction);
}

struct DrillConfig {
    TestConfig test;
    std::optional<Strategy> strategy;
    std::optional<Direction> direction;
    GreedyOptions greedy;
};

// k split over strata in proportion to their sizes, largest remainder first (ties by stratum order).
inline std::vector<std::size_t> apportion(std::size_t k, std::vector<std::size_t> const& sizes)
{
    std::size_t total = std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
    std::vector<std::size_t> out(sizes.size(), 0);
    if (total == 0) {
        return out;
    }
    std::vector<std::pair<std::size_t, std::size_t>> remainders; // (remainder numerator, index)
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        out[i] = k * sizes[i] / total;
        assigned += out[i];
        remainders.emplace_back(k * sizes[i] % total, i);
    }
    std::stable_sort(remainders.begin(), remainders.end(), [](auto a, auto b) { return a.first > b.first; });
    for (std::size_t i = 0; assigned < k && i < remainders.size(); ++i, ++assigned) {
        ++out[remainders[i].second];
    }
    return out;
}

namespace detail {

inline DrillDownResult drill_pair(View const& view, std::size_t k, Strategy strategy, Direction direction,
                                  DrillConfig const& cfg)
{
    auto method = method_for(view[0], view[1], cfg.test);
    if (method == Method::GTest) {
        throw DrillDownError("drill-down is not available for the G-test");
    }
    if (method == Method::KendallTau) {
        return greedy_tau(view[0].reals(), view[1].reals(), view.row_ids, k, strategy, direction, cfg.greedy);
    }
    if (view[0].kind() == ColumnKind::Numerical) {
        return greedy_chi2(discretize(view[0], cfg.test), discretize(view[1], cfg.test), view.row_ids, k, strategy,
                           direction);
    }
    return greedy_chi2(view[0], view[1], view.row_ids, k, strategy, direction);
}

} // namespace detail

// Independence constraints (statistic too high): K^c, Minimize.
// Dependence constraints (statistic too low): K, Maximize.
inline DrillDownResult drilldown(Dataset const& ds, StatConstraint const& sc, std::size_t k, DrillConfig const& cfg = {})
{
    if (!sc.is_elementary()) {
        throw DrillDownError("drill-down needs an elementary constraint: " + format(sc));
    }
    auto strategy = cfg.strategy.value_or(sc.is_independence() ? Strategy::KComplement : Strategy::K);
    auto direction = cfg.direction.value_or(sc.is_independence() ? Direction::Minimize : Direction::Maximize);

    std::vector<std::string> vars{sc.x()[0], sc.y()[0]};
    vars.insert(vars.end(), sc.z().begin(), sc.z().end());
    auto view = project_complete(ds, vars);

    if (sc.z().empty()) {
        auto res = detail::drill_pair(view, k, strategy, direction, cfg);
        res.constraint = sc;
        return res;
    }

    auto labels = detail::stratum_labels(view, 2, cfg.test);
    std::map<std::string, std::vector<std::size_t>> groups;
    for (std::size_t r = 0; r < labels.size(); ++r) {
        groups[labels[r]].push_back(r);
    }
    detail::check_k(k, view.size());
    std::vector<std::string> names;
    std::vector<std::size_t> sizes;
    for (auto const& [label, rows] : groups) {
        names.push_back(label);
        sizes.push_back(rows.size());
    }
    auto quota = apportion(k, sizes);

    DrillDownResult res;
    res.constraint = sc;
    res.strategy = strategy;
    res.direction = direction;
    res.k = k;
    res.method = detail::method_for(view[0], view[1], cfg.test);
    std::size_t i = 0;
    for (auto const& [label, rows] : groups) {
        auto want = quota[i++];
        if (want == 0) {
            continue;
        }
        if (want >= rows.size()) {
            res.notes.push_back("stratum " + label + ": k reduced from " + std::to_string(want) + " to "
                                + std::to_string(rows.size() > 0 ? rows.size() - 1 : 0));
            want = rows.size() > 0 ? rows.size() - 1 : 0;
            if (want == 0) {
                continue;
            }
        }
        View sub;
        sub.columns = {view[0].select(rows), view[1].select(rows)};
        for (auto r : rows) {
            sub.row_ids.push_back(view.row_ids[r]);
        }
        try {
            auto part = detail::drill_pair(sub, want, strategy, direction, cfg);
            part.constraint = sc;
            res.suspects.insert(res.suspects.end(), part.suspects.begin(), part.suspects.end());
            res.ms_init += part.ms_init;
            res.ms_greedy += part.ms_greedy;
            res.strata.emplace_back(label, std::move(part));
        } catch (DrillDownError const& e) {
            res.notes.push_back("stratum " + label + " skipped: " + e.what());
        }
    }
    return res;
}

} // namespace statguard
