#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "statguard/constraint.hpp"
#include "statguard/dataset.hpp"
#include "statguard/ranktree.hpp"
#include "statguard/special.hpp"

namespace statguard {

class TestError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class Method { ChiSquare, GTest, KendallTau };
enum class Verdict { Violated, NotViolated, Inconclusive };
enum class BinStrategy { EqualFrequency, EqualWidth };
enum class Combiner { Stouffer, Fisher };

inline std::string_view to_string(Method m)
{
    switch (m) {
    case Method::ChiSquare: return "chi-square";
    case Method::GTest: return "g-test";
    case Method::KendallTau: return "kendall-tau";
    }
    return "?";
}

inline std::string_view to_string(Verdict v)
{
    switch (v) {
    case Verdict::Violated: return "violated";
    case Verdict::NotViolated: return "not-violated";
    case Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

struct TestConfig {
    double alpha = 0.05;
    std::size_t bins = 6;
    BinStrategy bin_strategy = BinStrategy::EqualFrequency;
    std::size_t min_stratum = 5;
    Combiner combiner = Combiner::Stouffer;
    std::optional<Method> method;   // override of the kind-based default
    std::optional<double> min_effect; // dependence also requires |effect| >= this

    void validate() const
    {
        if (!(alpha > 0.0 && alpha < 1.0)) {
            throw TestError("alpha must lie in (0, 1)");
        }
        if (bins < 2) {
            throw TestError("bins must be >= 2");
        }
    }
};

// Observed counts over the categories actually present in both columns.
class ContingencyTable {
public:
    ContingencyTable() = default;

    static ContingencyTable from_counts(std::vector<std::vector<std::int64_t>> counts,
                                        std::vector<std::string> row_labels = {},
                                        std::vector<std::string> col_labels = {})
    {
        ContingencyTable t;
        t.rows_ = counts.size();
        t.cols_ = t.rows_ ? counts.front().size() : 0;
        t.cells_.assign(t.rows_ * t.cols_, 0);
        for (std::size_t i = 0; i < t.rows_; ++i) {
            if (counts[i].size() != t.cols_) {
                throw TestError("ragged contingency table");
            }
            for (std::size_t j = 0; j < t.cols_; ++j) {
                if (counts[i][j] < 0) {
                    throw TestError("negative count");
                }
                t.cells_[i * t.cols_ + j] = counts[i][j];
            }
        }
        t.row_labels_ = std::move(row_labels);
        t.col_labels_ = std::move(col_labels);
        if (t.row_labels_.empty()) {
            for (std::size_t i = 0; i < t.rows_; ++i) {
                t.row_labels_.push_back("r" + std::to_string(i));
            }
        }
        if (t.col_labels_.empty()) {
            for (std::size_t j = 0; j < t.cols_; ++j) {
                t.col_labels_.push_back("c" + std::to_string(j));
            }
        }
        return t;
    }

    // Rows/columns are the observed categories, ordered by label.
    static ContingencyTable from_columns(Column const& x, Column const& y)
    {
        if (x.kind() != ColumnKind::Categorical || y.kind() != ColumnKind::Categorical) {
            throw TestError("contingency table needs two categorical columns");
        }
        if (x.size() != y.size()) {
            throw TestError("column length mismatch");
        }
        auto dense = [](Column const& c) {
            std::vector<bool> seen(c.dictionary().size(), false);
            for (std::size_t r = 0; r < c.size(); ++r) {
                if (!c.is_missing(r)) {
                    seen[static_cast<std::size_t>(c.code(r))] = true;
                }
            }
            std::vector<std::int32_t> present;
            for (std::size_t k = 0; k < seen.size(); ++k) {
                if (seen[k]) {
                    present.push_back(static_cast<std::int32_t>(k));
                }
            }
            std::sort(present.begin(), present.end(), [&](auto a, auto b) {
                return c.dictionary()[static_cast<std::size_t>(a)] < c.dictionary()[static_cast<std::size_t>(b)];
            });
            std::vector<std::int32_t> remap(seen.size(), -1);
            std::vector<std::string> labels;
            for (std::size_t i = 0; i < present.size(); ++i) {
                remap[static_cast<std::size_t>(present[i])] = static_cast<std::int32_t>(i);
                labels.push_back(c.dictionary()[static_cast<std::size_t>(present[i])]);
            }
            return std::pair{remap, labels};
        };
        auto [rx, lx] = dense(x);
        auto [ry, ly] = dense(y);
        std::vector<std::vector<std::int64_t>> counts(lx.size(), std::vector<std::int64_t>(ly.size(), 0));
        for (std::size_t r = 0; r < x.size(); ++r) {
            if (x.is_missing(r) || y.is_missing(r)) {
                continue;
            }
            ++counts[static_cast<std::size_t>(rx[static_cast<std::size_t>(x.code(r))])]
                    [static_cast<std::size_t>(ry[static_cast<std::size_t>(y.code(r))])];
        }
        return from_counts(std::move(counts), std::move(lx), std::move(ly));
    }

    [[nodiscard]] std::size_t rows() const { return rows_; }
    [[nodiscard]] std::size_t cols() const { return cols_; }
    [[nodiscard]] std::int64_t at(std::size_t i, std::size_t j) const { return cells_[i * cols_ + j]; }
    std::int64_t& at(std::size_t i, std::size_t j) { return cells_[i * cols_ + j]; }
    [[nodiscard]] std::vector<std::string> const& row_labels() const { return row_labels_; }
    [[nodiscard]] std::vector<std::string> const& col_labels() const { return col_labels_; }

    [[nodiscard]] std::int64_t total() const { return std::accumulate(cells_.begin(), cells_.end(), std::int64_t{0}); }

    [[nodiscard]] std::vector<std::int64_t> row_totals() const
    {
        std::vector<std::int64_t> out(rows_, 0);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) {
                out[i] += at(i, j);
            }
        }
        return out;
    }

    [[nodiscard]] std::vector<std::int64_t> col_totals() const
    {
        std::vector<std::int64_t> out(cols_, 0);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) {
                out[j] += at(i, j);
            }
        }
        return out;
    }

    // Categories with a non-zero marginal.
    [[nodiscard]] std::size_t occupied_rows() const
    {
        auto t = row_totals();
        return static_cast<std::size_t>(std::count_if(t.begin(), t.end(), [](auto v) { return v > 0; }));
    }
    [[nodiscard]] std::size_t occupied_cols() const
    {
        auto t = col_totals();
        return static_cast<std::size_t>(std::count_if(t.begin(), t.end(), [](auto v) { return v > 0; }));
    }

    [[nodiscard]] bool degenerate() const { return occupied_rows() < 2 || occupied_cols() < 2; }

    // (r_X - 1)(r_Y - 1) over occupied categories.
    [[nodiscard]] long dof() const
    {
        return static_cast<long>((occupied_rows() - 1) * (occupied_cols() - 1));
    }

    // Pearson statistic with E = N(x) N(y) / n over cells with E > 0.
    [[nodiscard]] double pearson() const
    {
        auto rt = row_totals();
        auto ct = col_totals();
        auto n = static_cast<double>(total());
        if (n <= 0.0) {
            return 0.0;
        }
        double q = 0.0;
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) {
                double e = static_cast<double>(rt[i]) * static_cast<double>(ct[j]) / n;
                if (e > 0.0) {
                    double d = static_cast<double>(at(i, j)) - e;
                    q += d * d / e;
                }
            }
        }
        return q;
    }

    // Likelihood-ratio statistic over cells with N > 0.
    [[nodiscard]] double g_statistic() const
    {
        auto rt = row_totals();
        auto ct = col_totals();
        auto n = static_cast<double>(total());
        double g = 0.0;
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) {
                auto o = static_cast<double>(at(i, j));
                if (o > 0.0) {
                    double e = static_cast<double>(rt[i]) * static_cast<double>(ct[j]) / n;
                    g += o * std::log(o / e);
                }
            }
        }
        return std::max(0.0, 2.0 * g);
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::int64_t> cells_;
    std::vector<std::string> row_labels_;
    std::vector<std::string> col_labels_;
};

// Pair counts for Kendall's tau. Tie totals count pairs, e.g. x_ties = sum over X-groups of C(t, 2).
struct TauCounts {
    std::int64_t n = 0;
    std::int64_t concordant = 0;
    std::int64_t discordant = 0;
    std::int64_t x_ties = 0;  // pairs tied in X (including those also tied in Y)
    std::int64_t y_ties = 0;  // pairs tied in Y (including those also tied in X)
    std::int64_t xy_ties = 0; // pairs tied in both

    [[nodiscard]] std::int64_t pairs() const { return n * (n - 1) / 2; }
    [[nodiscard]] std::int64_t tied_total() const { return x_ties + y_ties - xy_ties; }
    [[nodiscard]] std::int64_t score() const { return concordant - discordant; }

    [[nodiscard]] double tau_b() const
    {
        double dx = static_cast<double>(pairs() - x_ties);
        double dy = static_cast<double>(pairs() - y_ties);
        if (dx <= 0.0 || dy <= 0.0) {
            return 0.0;
        }
        return static_cast<double>(score()) / std::sqrt(dx * dy);
    }

    [[nodiscard]] double tau_simple() const
    {
        return pairs() > 0 ? static_cast<double>(score()) / static_cast<double>(pairs()) : 0.0;
    }

    // Normal approximation with the no-ties variance n(n-1)(2n+5)/18.
    [[nodiscard]] double z() const
    {
        auto nn = static_cast<double>(n);
        double var = nn * (nn - 1.0) * (2.0 * nn + 5.0) / 18.0;
        return var > 0.0 ? static_cast<double>(score()) / std::sqrt(var) : 0.0;
    }

    bool operator==(TauCounts const&) const = default;
};

namespace detail {

inline std::int64_t tie_pairs(std::vector<double> sorted)
{
    std::int64_t total = 0;
    for (std::size_t i = 0; i < sorted.size();) {
        auto j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) {
            ++j;
        }
        auto t = static_cast<std::int64_t>(j - i);
        total += t * (t - 1) / 2;
        i = j;
    }
    return total;
}

} // namespace detail

// O(n log n) pair classification: sort by (x, y), count inversions in y with an order counter.
inline TauCounts tau_counts(std::span<double const> xs, std::span<double const> ys)
{
    if (xs.size() != ys.size()) {
        throw TestError("tau_counts: length mismatch");
    }
    TauCounts tc;
    tc.n = static_cast<std::int64_t>(xs.size());
    if (xs.empty()) {
        return tc;
    }
    std::vector<std::size_t> order(xs.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) {
        return xs[a] != xs[b] ? xs[a] < xs[b] : ys[a] < ys[b];
    });

    RankDomain<double> domain(ys);
    OrderCounter counter(domain.size());
    std::int64_t discordant = 0;
    for (auto i : order) {
        auto r = domain.rank(ys[i]);
        discordant += counter.count_greater(r);
        counter.insert(r);
    }

    std::vector<double> sx(xs.begin(), xs.end());
    std::vector<double> sy(ys.begin(), ys.end());
    std::sort(sx.begin(), sx.end());
    std::sort(sy.begin(), sy.end());
    tc.x_ties = detail::tie_pairs(std::move(sx));
    tc.y_ties = detail::tie_pairs(std::move(sy));
    std::int64_t xy = 0;
    for (std::size_t i = 0; i < order.size();) {
        auto j = i;
        while (j < order.size() && xs[order[j]] == xs[order[i]] && ys[order[j]] == ys[order[i]]) {
            ++j;
        }
        auto t = static_cast<std::int64_t>(j - i);
        xy += t * (t - 1) / 2;
        i = j;
    }
    tc.xy_ties = xy;
    tc.discordant = discordant;
    tc.concordant = tc.pairs() - discordant - tc.tied_total();
    return tc;
}

struct StratumReport {
    std::string z_assignment;
    std::size_t n = 0;
    double statistic = 0.0;
    double p_value = 1.0;
    bool skipped = false;
    std::string note;
};

struct TestReport {
    StatConstraint constraint;
    Method method = Method::ChiSquare;
    double statistic = 0.0;
    double effect = 0.0;
    std::int64_t dof_or_n = 0;
    double p_value = 1.0;
    std::optional<TauCounts> tau;
    std::vector<StratumReport> strata;
    std::vector<TestReport> parts; // elementary decomposition of a complex constraint
    Verdict verdict = Verdict::Inconclusive;
    bool degenerate = false;
    std::vector<std::string> notes;
};

namespace detail {

inline TestReport contingency_report(ContingencyTable const& t, Method method)
{
    TestReport rep;
    rep.method = method;
    auto n = t.total();
    if (n < 1 || t.degenerate()) {
        rep.degenerate = true;
        rep.dof_or_n = 0;
        rep.notes.push_back("degenerate contingency table: a variable has fewer than two observed categories");
        return rep;
    }
    rep.statistic = method == Method::GTest ? t.g_statistic() : t.pearson();
    rep.dof_or_n = t.dof();
    rep.effect = rep.statistic / static_cast<double>(n);
    rep.p_value = chi_square_sf(rep.statistic, rep.dof_or_n);
    return rep;
}

} // namespace detail

inline TestReport chi_square_test(ContingencyTable const& t) { return detail::contingency_report(t, Method::ChiSquare); }
inline TestReport g_test(ContingencyTable const& t) { return detail::contingency_report(t, Method::GTest); }
inline TestReport chi_square_test(Column const& x, Column const& y) { return chi_square_test(ContingencyTable::from_columns(x, y)); }
inline TestReport g_test(Column const& x, Column const& y) { return g_test(ContingencyTable::from_columns(x, y)); }

// statistic = z (no-ties normalization), effect = tie-corrected tau, two-sided p.
inline TestReport kendall_tau(std::span<double const> xs, std::span<double const> ys)
{
    TestReport rep;
    rep.method = Method::KendallTau;
    auto tc = tau_counts(xs, ys);
    rep.tau = tc;
    rep.dof_or_n = tc.n;
    if (tc.n < 2 || tc.x_ties == tc.pairs() || tc.y_ties == tc.pairs()) {
        rep.degenerate = true;
        rep.notes.push_back(tc.n < 2 ? "fewer than two rows" : "constant column: tau undefined");
        return rep;
    }
    rep.statistic = tc.z();
    rep.effect = tc.tau_b();
    rep.p_value = std::min(1.0, 2.0 * normal_sf(std::abs(rep.statistic)));
    return rep;
}

inline TestReport kendall_tau(Column const& x, Column const& y)
{
    if (x.kind() != ColumnKind::Numerical || y.kind() != ColumnKind::Numerical) {
        throw TestError("kendall tau needs two numerical columns");
    }
    std::vector<double> xs, ys;
    for (std::size_t r = 0; r < x.size(); ++r) {
        if (!x.is_missing(r) && !y.is_missing(r)) {
            xs.push_back(x.real(r));
            ys.push_back(y.real(r));
        }
    }
    return kendall_tau(xs, ys);
}

// Cross product {x _||_ y | Z : x in X, y in Y}, polarity preserved.
inline std::vector<StatConstraint> reduce_complex(StatConstraint const& sc)
{
    if (sc.is_elementary()) {
        return {sc};
    }
    std::vector<StatConstraint> out;
    for (auto const& a : sc.x()) {
        for (auto const& b : sc.y()) {
            out.emplace_back(VarSet{a}, VarSet{b}, sc.z(), sc.polarity());
        }
    }
    return out;
}

// Numerical -> categorical with tokens b0, b1, ...; missing stays missing.
inline Column discretize(Column const& col, TestConfig const& cfg)
{
    if (col.kind() != ColumnKind::Numerical) {
        throw TestError("discretize needs a numerical column");
    }
    if (cfg.bins < 2) {
        throw TestError("bins must be >= 2");
    }
    std::vector<double> values;
    for (std::size_t r = 0; r < col.size(); ++r) {
        if (!col.is_missing(r)) {
            values.push_back(col.real(r));
        }
    }
    if (values.empty()) {
        throw TestError("discretize needs at least one non-missing value");
    }
    std::sort(values.begin(), values.end());
    auto const n = values.size();
    auto const bins = cfg.bins;

    std::vector<std::size_t> raw(col.size(), 0);
    if (cfg.bin_strategy == BinStrategy::EqualFrequency) {
        // Edge i sits at the empirical i/bins quantile; values equal to an edge go to the lower bin.
        std::vector<double> edges;
        for (std::size_t i = 1; i < bins; ++i) {
            auto idx = (i * n + bins - 1) / bins; // ceil(i n / bins)
            edges.push_back(values[std::max<std::size_t>(idx, 1) - 1]);
        }
        for (std::size_t r = 0; r < col.size(); ++r) {
            if (!col.is_missing(r)) {
                auto v = col.real(r);
                raw[r] = static_cast<std::size_t>(std::lower_bound(edges.begin(), edges.end(), v) - edges.begin());
            }
        }
    } else {
        double lo = values.front();
        double hi = values.back();
        double width = (hi - lo) / static_cast<double>(bins);
        for (std::size_t r = 0; r < col.size(); ++r) {
            if (!col.is_missing(r) && width > 0.0) {
                auto b = static_cast<std::size_t>(std::floor((col.real(r) - lo) / width));
                raw[r] = std::min(b, bins - 1);
            }
        }
    }

    // Renumber occupied bins consecutively (empty bins dropped) for equal-frequency binning.
    std::vector<std::size_t> label(bins, 0);
    if (cfg.bin_strategy == BinStrategy::EqualFrequency) {
        std::vector<bool> used(bins, false);
        for (std::size_t r = 0; r < col.size(); ++r) {
            if (!col.is_missing(r)) {
                used[raw[r]] = true;
            }
        }
        std::size_t next = 0;
        for (std::size_t b = 0; b < bins; ++b) {
            if (used[b]) {
                label[b] = next++;
            }
        }
    } else {
        std::iota(label.begin(), label.end(), 0);
    }

    std::vector<std::optional<std::string>> cells;
    cells.reserve(col.size());
    for (std::size_t r = 0; r < col.size(); ++r) {
        if (col.is_missing(r)) {
            cells.emplace_back(std::nullopt);
        } else {
            cells.emplace_back("b" + std::to_string(label[raw[r]]));
        }
    }
    return Column::categorical(col.name(), cells);
}

namespace detail {

inline Method method_for(Column const& x, Column const& y, TestConfig const& cfg)
{
    if (x.kind() != y.kind()) {
        throw TestError("mixed categorical/numerical pair (" + x.name() + ", " + y.name() + ") is not supported");
    }
    if (x.kind() == ColumnKind::Categorical) {
        if (cfg.method == Method::KendallTau) {
            throw TestError("kendall tau needs numerical columns: " + x.name() + ", " + y.name());
        }
        return cfg.method.value_or(Method::ChiSquare);
    }
    return cfg.method.value_or(Method::KendallTau);
}

// Runs one unconditional test on two aligned, complete columns.
inline TestReport marginal_test(Column const& x, Column const& y, Method method, TestConfig const& cfg)
{
    if (method == Method::KendallTau) {
        return kendall_tau(x.reals(), y.reals());
    }
    if (x.kind() == ColumnKind::Numerical) {
        auto table = ContingencyTable::from_columns(discretize(x, cfg), discretize(y, cfg));
        return contingency_report(table, method);
    }
    return contingency_report(ContingencyTable::from_columns(x, y), method);
}

// Joint Z assignment label per row, e.g. "Model=bmw,Year=b2".
inline std::vector<std::string> stratum_labels(View const& view, std::size_t first_z, TestConfig const& cfg)
{
    std::vector<Column> zcols;
    for (auto i = first_z; i < view.columns.size(); ++i) {
        auto const& c = view.columns[i];
        zcols.push_back(c.kind() == ColumnKind::Numerical ? discretize(c, cfg) : c);
    }
    std::vector<std::string> labels(view.size());
    for (std::size_t r = 0; r < view.size(); ++r) {
        std::string s;
        for (std::size_t k = 0; k < zcols.size(); ++k) {
            s += (k ? "," : "") + zcols[k].name() + "=" + zcols[k].text(r);
        }
        labels[r] = std::move(s);
    }
    return labels;
}

} // namespace detail

// One elementary constraint, marginal or conditional.
inline TestReport test_elementary(Dataset const& ds, StatConstraint const& sc, TestConfig const& cfg)
{
    if (!sc.is_elementary()) {
        throw TestError("test_elementary needs an elementary constraint: " + format(sc));
    }
    std::vector<std::string> vars{sc.x()[0], sc.y()[0]};
    vars.insert(vars.end(), sc.z().begin(), sc.z().end());
    auto view = project_complete(ds, vars);
    auto method = detail::method_for(view[0], view[1], cfg);

    if (sc.z().empty()) {
        auto rep = detail::marginal_test(view[0], view[1], method, cfg);
        rep.constraint = sc;
        return rep;
    }

    auto labels = detail::stratum_labels(view, 2, cfg);
    std::map<std::string, std::vector<std::size_t>> groups;
    for (std::size_t r = 0; r < labels.size(); ++r) {
        groups[labels[r]].push_back(r);
    }

    TestReport rep;
    rep.constraint = sc;
    rep.method = method;
    std::vector<TestReport> used;
    std::vector<std::size_t> used_sizes;
    std::size_t skipped_rows = 0;
    for (auto const& [label, rows] : groups) {
        StratumReport sr;
        sr.z_assignment = label;
        sr.n = rows.size();
        if (rows.size() < cfg.min_stratum) {
            sr.skipped = true;
            sr.note = "fewer than " + std::to_string(cfg.min_stratum) + " rows";
            skipped_rows += rows.size();
            rep.strata.push_back(std::move(sr));
            continue;
        }
        auto sub = detail::marginal_test(view[0].select(rows), view[1].select(rows), method, cfg);
        if (sub.degenerate) {
            sr.skipped = true;
            sr.note = "degenerate stratum";
            skipped_rows += rows.size();
            rep.strata.push_back(std::move(sr));
            continue;
        }
        sr.statistic = sub.statistic;
        sr.p_value = sub.p_value;
        rep.strata.push_back(std::move(sr));
        used.push_back(std::move(sub));
        used_sizes.push_back(rows.size());
    }
    if (skipped_rows > 0) {
        rep.notes.push_back(std::to_string(skipped_rows) + " rows in skipped strata");
    }
    if (used.empty()) {
        rep.degenerate = true;
        rep.notes.push_back("no stratum qualifies for testing");
        return rep;
    }
    if (used.size() == 1) {
        auto const& only = used.front();
        rep.statistic = only.statistic;
        rep.effect = only.effect;
        rep.dof_or_n = only.dof_or_n;
        rep.p_value = only.p_value;
        rep.tau = only.tau;
        return rep;
    }

    std::size_t total_n = std::accumulate(used_sizes.begin(), used_sizes.end(), std::size_t{0});
    if (method == Method::KendallTau) {
        double effect = 0.0;
        for (std::size_t i = 0; i < used.size(); ++i) {
            effect += static_cast<double>(used_sizes[i]) * used[i].effect;
        }
        rep.effect = effect / static_cast<double>(total_n);
        if (cfg.combiner == Combiner::Stouffer) {
            double num = 0.0;
            double den = 0.0;
            for (std::size_t i = 0; i < used.size(); ++i) {
                double w = std::sqrt(static_cast<double>(used_sizes[i]));
                num += w * used[i].statistic;
                den += w * w;
            }
            rep.statistic = num / std::sqrt(den);
            rep.p_value = std::min(1.0, 2.0 * normal_sf(std::abs(rep.statistic)));
            rep.dof_or_n = static_cast<std::int64_t>(total_n);
        } else {
            double x = 0.0;
            for (auto const& u : used) {
                x += -2.0 * std::log(std::max(u.p_value, std::numeric_limits<double>::min()));
            }
            rep.statistic = x;
            rep.dof_or_n = static_cast<std::int64_t>(2 * used.size());
            rep.p_value = chi_square_sf(x, rep.dof_or_n);
        }
    } else {
        double q = 0.0;
        std::int64_t dof = 0;
        for (auto const& u : used) {
            q += u.statistic;
            dof += u.dof_or_n;
        }
        rep.statistic = q;
        rep.dof_or_n = dof;
        rep.effect = q / static_cast<double>(total_n);
        rep.p_value = chi_square_sf(q, dof);
    }
    return rep;
}

// Sets the verdict of an elementary report from its p-value.
inline Verdict decide(TestReport const& rep, Polarity polarity, TestConfig const& cfg, double alpha)
{
    if (rep.degenerate) {
        return Verdict::Inconclusive;
    }
    bool rejects = rep.p_value <= alpha;
    if (polarity == Polarity::Independence) {
        return rejects ? Verdict::Violated : Verdict::NotViolated;
    }
    bool holds = rejects && (!cfg.min_effect || std::abs(rep.effect) >= *cfg.min_effect);
    return holds ? Verdict::NotViolated : Verdict::Violated;
}

// Independence: violated iff some part has p <= alpha / m (Bonferroni over m parts); the reported
// p-value is min(1, m * min p). Dependence: violated iff no part rejects at alpha; the reported
// p-value is the smallest part p-value. Any degenerate part makes the result inconclusive.
inline TestReport evaluate_sc(Dataset const& ds, StatConstraint const& sc, TestConfig const& cfg = {})
{
    cfg.validate();
    for (auto const& v : sc.variables()) {
        if (!ds.has(v)) {
            throw DataError("unknown variable '" + v + "' in " + format(sc));
        }
    }
    auto elems = reduce_complex(sc);
    auto const m = elems.size();
    double const part_alpha = sc.is_independence() ? cfg.alpha / static_cast<double>(m) : cfg.alpha;

    std::vector<TestReport> parts;
    for (auto const& e : elems) {
        auto r = test_elementary(ds, e, cfg);
        r.verdict = decide(r, e.polarity(), cfg, part_alpha);
        parts.push_back(std::move(r));
    }
    if (m == 1) {
        return std::move(parts.front());
    }

    auto best = std::min_element(parts.begin(), parts.end(), [](auto const& a, auto const& b) {
        if (a.degenerate != b.degenerate) {
            return !a.degenerate;
        }
        return a.p_value < b.p_value;
    });
    TestReport rep;
    rep.constraint = sc;
    rep.method = best->method;
    rep.statistic = best->statistic;
    rep.effect = best->effect;
    rep.dof_or_n = best->dof_or_n;
    rep.tau = best->tau;
    bool any_degenerate = std::any_of(parts.begin(), parts.end(), [](auto const& p) { return p.degenerate; });
    if (sc.is_independence()) {
        rep.p_value = std::min(1.0, static_cast<double>(m) * best->p_value);
        rep.notes.push_back("Bonferroni-adjusted over " + std::to_string(m) + " elementary tests");
    } else {
        rep.p_value = best->p_value;
    }
    if (any_degenerate) {
        rep.verdict = Verdict::Inconclusive;
        rep.degenerate = true;
    } else if (sc.is_independence()) {
        bool violated = std::any_of(parts.begin(), parts.end(), [](auto const& p) { return p.verdict == Verdict::Violated; });
        rep.verdict = violated ? Verdict::Violated : Verdict::NotViolated;
    } else {
        bool violated = std::all_of(parts.begin(), parts.end(), [](auto const& p) { return p.verdict == Verdict::Violated; });
        rep.verdict = violated ? Verdict::Violated : Verdict::NotViolated;
    }
    rep.parts = std::move(parts);
    return rep;
}

struct Suggestions {
    std::vector<TestReport> reports; // ascending p-value
    std::vector<std::string> notes;
};

// Pairwise marginal tests over all same-kind column pairs.
inline Suggestions suggest_constraints(Dataset const& ds, TestConfig const& cfg = {})
{
    cfg.validate();
    Suggestions out;
    auto const& cols = ds.columns();
    for (std::size_t i = 0; i < cols.size(); ++i) {
        for (std::size_t j = i + 1; j < cols.size(); ++j) {
            if (cols[i].kind() != cols[j].kind()) {
                out.notes.push_back("skipped mixed-kind pair (" + cols[i].name() + ", " + cols[j].name() + ")");
                continue;
            }
            StatConstraint sc(VarSet{cols[i].name()}, VarSet{cols[j].name()}, {}, Polarity::Independence);
            auto rep = test_elementary(ds, sc, cfg);
            rep.verdict = decide(rep, Polarity::Independence, cfg, cfg.alpha);
            out.reports.push_back(std::move(rep));
        }
    }
    std::stable_sort(out.reports.begin(), out.reports.end(),
                     [](auto const& a, auto const& b) { return a.p_value < b.p_value; });
    return out;
}

} // namespace statguard
