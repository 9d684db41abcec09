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

#include "statguard/dataset.hpp"

namespace statguard {

class InjectionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Counter-based generator: output i is splitmix64(seed + i * golden). No hidden state beyond the counter.
class CounterRng {
public:
    using result_type = std::uint64_t;

    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : seed_(seed ^ (stream * 0xD1B54A32D192ED03ULL))
    {
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()()
    {
        std::uint64_t z = seed_ + (++counter_) * 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Unbiased integer in [0, bound) (Lemire's multiply-shift with rejection).
    std::uint64_t below(std::uint64_t bound)
    {
        if (bound == 0) {
            throw std::invalid_argument("below(0)");
        }
        auto x = (*this)();
        __uint128_t m = static_cast<__uint128_t>(x) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                x = (*this)();
                m = static_cast<__uint128_t>(x) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    // Uniform double in [0, 1).
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller.
    double normal()
    {
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

// m uniformly chosen elements of `pool`, returned in ascending order.
inline std::vector<std::size_t> sample_without_replacement(std::vector<std::size_t> pool, std::size_t m, CounterRng& rng)
{
    if (m > pool.size()) {
        throw InjectionError("sample larger than population");
    }
    for (std::size_t i = 0; i < m; ++i) {
        auto j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(m);
    std::sort(pool.begin(), pool.end());
    return pool;
}

// ceil(rate * n), robust to binary rounding of products like 0.8 * 0.5 * 100.
inline std::size_t count_for_rate(double rate, std::size_t n)
{
    return static_cast<std::size_t>(std::ceil(rate * static_cast<double>(n) - 1e-9));
}

struct SelectionMode {
    enum class Kind { Random, OrderedBy };
    Kind kind = Kind::Random;
    std::string column; // OrderedBy only

    static SelectionMode random() { return {}; }
    static SelectionMode ordered_by(std::string col) { return {Kind::OrderedBy, std::move(col)}; }
};

enum class ErrorType { Sorting, Imputation, Combination };

inline std::string_view to_string(ErrorType t)
{
    switch (t) {
    case ErrorType::Sorting: return "sorting";
    case ErrorType::Imputation: return "imputation";
    case ErrorType::Combination: return "combination";
    }
    return "?";
}

struct MaskEntry {
    std::size_t id = 0;
    Cell original;
    ErrorType type = ErrorType::Sorting;
    bool changed = false;
};

struct ErrorMask {
    std::string column;
    ErrorType type = ErrorType::Sorting;
    std::vector<MaskEntry> rows; // ascending id

    [[nodiscard]] std::vector<std::size_t> selected_ids() const
    {
        std::vector<std::size_t> out;
        for (auto const& e : rows) {
            out.push_back(e.id);
        }
        return out;
    }

    [[nodiscard]] std::vector<std::size_t> changed_ids() const
    {
        std::vector<std::size_t> out;
        for (auto const& e : rows) {
            if (e.changed) {
                out.push_back(e.id);
            }
        }
        return out;
    }
};

struct Corrupted {
    Dataset data;
    ErrorMask mask;
};

namespace detail {

inline void check_rate(double rate)
{
    if (!(rate > 0.0 && rate <= 1.0)) {
        throw InjectionError("error rate must lie in (0, 1]");
    }
}

// Rows where the target (and ordering column, if any) are present.
inline std::vector<std::size_t> injection_pool(Dataset const& ds, Column const& a, SelectionMode const& mode)
{
    Column const* b = mode.kind == SelectionMode::Kind::OrderedBy ? &ds.column(mode.column) : nullptr;
    std::vector<std::size_t> pool;
    for (std::size_t r = 0; r < ds.n_rows(); ++r) {
        if (!a.is_missing(r) && (!b || !b->is_missing(r))) {
            pool.push_back(r);
        }
    }
    return pool;
}

// Orders rows by the column's value (numerical, or token lexicographic), then by row id.
inline void sort_by_column(std::vector<std::size_t>& rows, Column const& b)
{
    std::sort(rows.begin(), rows.end(), [&](auto i, auto j) {
        if (b.kind() == ColumnKind::Numerical) {
            if (b.real(i) != b.real(j)) {
                return b.real(i) < b.real(j);
            }
        } else {
            auto const& ti = b.dictionary()[static_cast<std::size_t>(b.code(i))];
            auto const& tj = b.dictionary()[static_cast<std::size_t>(b.code(j))];
            if (ti != tj) {
                return ti < tj;
            }
        }
        return i < j;
    });
}

inline void apply_sorting(Dataset const& ds, Column& a, std::vector<std::size_t> const& selected, SelectionMode const& mode,
                          std::vector<MaskEntry>& entries)
{
    std::vector<double> values;
    for (auto r : selected) {
        values.push_back(a.real(r));
    }
    std::sort(values.begin(), values.end());
    auto targets = selected;
    if (mode.kind == SelectionMode::Kind::OrderedBy) {
        sort_by_column(targets, ds.column(mode.column));
    }
    for (std::size_t i = 0; i < targets.size(); ++i) {
        auto r = targets[i];
        MaskEntry e{r, a.cell(r), ErrorType::Sorting, a.real(r) != values[i]};
        a.set_real(r, values[i]);
        entries.push_back(std::move(e));
    }
}

inline std::vector<std::size_t> imputation_selection(Dataset const& ds, std::vector<std::size_t> pool, std::size_t m,
                                                     SelectionMode const& mode, CounterRng& rng,
                                                     std::optional<std::size_t> window_start)
{
    if (m > pool.size()) {
        throw InjectionError("not enough eligible rows for imputation error");
    }
    if (mode.kind == SelectionMode::Kind::Random) {
        return sample_without_replacement(std::move(pool), m, rng);
    }
    // A contiguous window of m rows in B order, i.e. a quantile range of width rate.
    sort_by_column(pool, ds.column(mode.column));
    auto const slack = pool.size() - m;
    auto start = window_start.value_or(static_cast<std::size_t>(rng.below(slack + 1)));
    if (start > slack) {
        throw InjectionError("imputation window start out of range");
    }
    std::vector<std::size_t> out(pool.begin() + static_cast<std::ptrdiff_t>(start),
                                 pool.begin() + static_cast<std::ptrdiff_t>(start + m));
    std::sort(out.begin(), out.end());
    return out;
}

// Mean of a numerical column, or the most frequent token (smallest on ties) of a categorical one.
inline Cell fill_value(Column const& a)
{
    if (a.kind() == ColumnKind::Numerical) {
        double sum = 0.0;
        std::size_t n = 0;
        for (std::size_t r = 0; r < a.size(); ++r) {
            if (!a.is_missing(r)) {
                sum += a.real(r);
                ++n;
            }
        }
        if (n == 0) {
            throw InjectionError("column '" + a.name() + "' has no values");
        }
        return sum / static_cast<double>(n);
    }
    std::map<std::string, std::size_t> freq;
    for (std::size_t r = 0; r < a.size(); ++r) {
        if (!a.is_missing(r)) {
            ++freq[a.text(r)];
        }
    }
    if (freq.empty()) {
        throw InjectionError("column '" + a.name() + "' has no values");
    }
    auto best = freq.begin();
    for (auto it = freq.begin(); it != freq.end(); ++it) {
        if (it->second > best->second) {
            best = it;
        }
    }
    return best->first;
}

inline void apply_imputation(Column& a, std::vector<std::size_t> const& selected, Cell const& fill,
                             std::vector<MaskEntry>& entries)
{
    std::int32_t code = -1;
    if (a.kind() == ColumnKind::Categorical) {
        auto const& dict = a.dictionary();
        code = static_cast<std::int32_t>(std::find(dict.begin(), dict.end(), std::get<std::string>(fill)) - dict.begin());
    }
    for (auto r : selected) {
        MaskEntry e{r, a.cell(r), ErrorType::Imputation, a.cell(r) != fill};
        if (a.kind() == ColumnKind::Numerical) {
            a.set_real(r, std::get<double>(fill));
        } else {
            a.set_code(r, code);
        }
        entries.push_back(std::move(e));
    }
}

inline Column const& numerical_target(Dataset const& ds, std::string const& column)
{
    auto const& a = ds.column(column);
    if (a.kind() != ColumnKind::Numerical) {
        throw InjectionError("sorting error needs a numerical column: " + column);
    }
    return a;
}

inline void sort_entries(std::vector<MaskEntry>& entries)
{
    std::sort(entries.begin(), entries.end(), [](auto const& a, auto const& b) { return a.id < b.id; });
}

} // namespace detail

// Sorts ceil(rate n) selected values ascending. Random: written back in row-id order;
// OrderedBy(B): written back in B order, which induces A-B correlation.
inline Corrupted sorting_error(Dataset const& ds, std::string const& column, double rate, SelectionMode const& mode,
                               std::uint64_t seed)
{
    detail::check_rate(rate);
    auto a = detail::numerical_target(ds, column);
    auto pool = detail::injection_pool(ds, a, mode);
    CounterRng rng(seed, 1);
    auto selected = sample_without_replacement(pool, count_for_rate(rate, pool.size()), rng);
    ErrorMask mask{column, ErrorType::Sorting, {}};
    detail::apply_sorting(ds, a, selected, mode, mask.rows);
    detail::sort_entries(mask.rows);
    return {ds.with_column(std::move(a)), std::move(mask)};
}

// Replaces ceil(rate n) selected values with the original column mean (mode for categorical columns).
// OrderedBy(B) selects a window of consecutive rows in B order starting at a seeded (or given) offset.
inline Corrupted imputation_error(Dataset const& ds, std::string const& column, double rate, SelectionMode const& mode,
                                  std::uint64_t seed, std::optional<std::size_t> window_start = std::nullopt)
{
    detail::check_rate(rate);
    auto a = ds.column(column);
    auto pool = detail::injection_pool(ds, a, mode);
    CounterRng rng(seed, 2);
    auto selected = detail::imputation_selection(ds, pool, count_for_rate(rate, pool.size()), mode, rng, window_start);
    auto fill = detail::fill_value(a);
    ErrorMask mask{column, ErrorType::Imputation, {}};
    detail::apply_imputation(a, selected, fill, mask.rows);
    return {ds.with_column(std::move(a)), std::move(mask)};
}

// 80% of the rate as sorting error, then 20% as imputation error on disjoint rows.
inline Corrupted combination_error(Dataset const& ds, std::string const& column, double rate, SelectionMode const& mode,
                                   std::uint64_t seed)
{
    detail::check_rate(rate);
    auto a = detail::numerical_target(ds, column);
    auto pool = detail::injection_pool(ds, a, mode);
    auto m_sort = count_for_rate(0.8 * rate, pool.size());
    auto m_imp = count_for_rate(0.2 * rate, pool.size());
    if (m_sort + m_imp > pool.size()) {
        throw InjectionError("combination error needs " + std::to_string(m_sort + m_imp) + " rows, only "
                             + std::to_string(pool.size()) + " available");
    }
    auto fill = detail::fill_value(a);
    CounterRng rng(seed, 3);
    ErrorMask mask{column, ErrorType::Combination, {}};

    std::vector<std::size_t> sorted_rows;
    if (m_sort > 0) {
        sorted_rows = sample_without_replacement(pool, m_sort, rng);
        detail::apply_sorting(ds, a, sorted_rows, mode, mask.rows);
    }
    std::vector<std::size_t> rest;
    std::set_difference(pool.begin(), pool.end(), sorted_rows.begin(), sorted_rows.end(), std::back_inserter(rest));
    if (m_imp > 0) {
        auto imputed = detail::imputation_selection(ds, rest, m_imp, mode, rng, std::nullopt);
        detail::apply_imputation(a, imputed, fill, mask.rows);
    }
    detail::sort_entries(mask.rows);
    return {ds.with_column(std::move(a)), std::move(mask)};
}

inline Corrupted inject(ErrorType type, Dataset const& ds, std::string const& column, double rate,
                        SelectionMode const& mode, std::uint64_t seed)
{
    switch (type) {
    case ErrorType::Sorting: return sorting_error(ds, column, rate, mode, seed);
    case ErrorType::Imputation: return imputation_error(ds, column, rate, mode, seed);
    case ErrorType::Combination: return combination_error(ds, column, rate, mode, seed);
    }
    throw InjectionError("unknown error type");
}

// Named error levels as rate ranges.
struct ErrorLevel {
    std::string_view name;
    double low;
    double high;
};

inline constexpr ErrorLevel error_levels[] = {
    {"minor", 0.01, 0.20},
    {"moderate", 0.20, 0.45},
    {"major", 0.50, 0.80},
};

} // namespace statguard
