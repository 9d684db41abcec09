#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_set>
#include <vector>

#include "statguard/constraint.hpp"
#include "statguard/dataset.hpp"
#include "statguard/drilldown.hpp"
#include "statguard/errorsim.hpp"
#include "statguard/hypotest.hpp"

namespace statguard {

struct QualityScores {
    std::size_t k = 0;
    std::size_t hits = 0;       // |top-k detected ∩ truth|
    std::size_t truth_size = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f_score = 0.0;
};

// Precision@k, Recall@k and their harmonic mean.
inline QualityScores score(std::vector<std::size_t> const& detected, std::vector<std::size_t> const& truth, std::size_t k)
{
    if (k == 0 || k > detected.size()) {
        throw std::invalid_argument("score: k must satisfy 1 <= k <= |detected|");
    }
    std::unordered_set<std::size_t> truth_set(truth.begin(), truth.end());
    if (truth_set.empty()) {
        throw std::invalid_argument("score: recall is undefined for an empty ground truth");
    }
    QualityScores q;
    q.k = k;
    q.truth_size = truth_set.size();
    std::unordered_set<std::size_t> seen;
    for (std::size_t i = 0; i < k; ++i) {
        if (seen.insert(detected[i]).second && truth_set.count(detected[i])) {
            ++q.hits;
        }
    }
    q.precision = static_cast<double>(q.hits) / static_cast<double>(k);
    q.recall = static_cast<double>(q.hits) / static_cast<double>(q.truth_size);
    // 2PR/(P+R) reduces to 2h/(k+|truth|), which rounds only once.
    q.f_score = 2.0 * static_cast<double>(q.hits) / static_cast<double>(k + q.truth_size);
    return q;
}

inline QualityScores score(std::vector<std::size_t> const& detected, ErrorMask const& truth, std::size_t k)
{
    return score(detected, truth.changed_ids(), k);
}

struct SweepSpec {
    ErrorType error_type = ErrorType::Sorting;
    SelectionMode mode;
    std::string column; // injection target; defaults to the constraint's first X variable
    std::vector<double> rates;
    std::vector<std::size_t> ks;
    std::vector<std::uint64_t> seeds;
    StatConstraint constraint;
    std::optional<Strategy> strategy;
    std::optional<Direction> direction;
    bool random_baseline = false;
    TestConfig test;

    void validate() const
    {
        if (rates.empty() || ks.empty() || seeds.empty()) {
            throw std::invalid_argument("sweep grids must be non-empty");
        }
        for (auto r : rates) {
            if (!(r > 0.0 && r <= 1.0)) {
                throw std::invalid_argument("sweep rates must lie in (0, 1]");
            }
        }
        if (!constraint.is_elementary()) {
            throw std::invalid_argument("sweep constraint must be elementary");
        }
    }

    [[nodiscard]] std::string target() const { return column.empty() ? constraint.x()[0] : column; }
};

struct SweepRow {
    std::string error_type;
    std::string mode;
    double rate = 0.0;
    std::string seed; // "mean" in aggregate rows
    std::size_t k = 0;
    double stat_before = 0.0;
    double stat_after = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double fscore = 0.0;
    double ms_inject = 0.0;
    double ms_init = 0.0;
    double ms_greedy = 0.0;
    double ms_score = 0.0;
};

struct SweepFailure {
    double rate = 0.0;
    std::uint64_t seed = 0;
    std::size_t k = 0;
    std::string message;
};

struct SweepResult {
    std::vector<SweepRow> rows;       // (rate, seed, k) order
    std::vector<SweepRow> aggregates; // mean over seeds, (rate, k) order
    std::vector<SweepFailure> failures;
};

inline std::string to_string(SelectionMode const& m)
{
    return m.kind == SelectionMode::Kind::Random ? std::string("random") : "ordered_by:" + m.column;
}

// Dependence strength of the constraint's pair on `ds` minus `excluded`: tau-b for numerical pairs
// tested by tau, the pooled statistic otherwise.
inline double constraint_statistic(Dataset const& ds, StatConstraint const& sc, TestConfig const& cfg,
                                   std::vector<std::size_t> const& excluded = {})
{
    Dataset const* src = &ds;
    Dataset filtered;
    if (!excluded.empty()) {
        std::vector<bool> drop(ds.n_rows(), false);
        for (auto id : excluded) {
            drop.at(id) = true;
        }
        std::vector<std::size_t> keep;
        for (std::size_t r = 0; r < ds.n_rows(); ++r) {
            if (!drop[r]) {
                keep.push_back(r);
            }
        }
        std::vector<Column> cols;
        for (auto const& c : ds.columns()) {
            cols.push_back(c.select(keep));
        }
        filtered = Dataset(std::move(cols));
        src = &filtered;
    }
    auto rep = test_elementary(*src, sc, cfg);
    return rep.method == Method::KendallTau ? rep.effect : rep.statistic;
}

inline SweepResult run_sweep(Dataset const& clean, SweepSpec const& spec)
{
    using Clock = std::chrono::steady_clock;
    auto ms = [](Clock::time_point t0) { return std::chrono::duration<double, std::milli>(Clock::now() - t0).count(); };
    spec.validate();
    SweepResult out;
    DrillConfig dcfg;
    dcfg.test = spec.test;
    dcfg.strategy = spec.strategy;
    dcfg.direction = spec.direction;

    for (auto rate : spec.rates) {
        for (auto seed : spec.seeds) {
            std::optional<Corrupted> corrupted;
            double ms_inject = 0.0;
            std::string inject_error;
            try {
                auto t0 = Clock::now();
                corrupted = inject(spec.error_type, clean, spec.target(), rate, spec.mode, seed);
                ms_inject = ms(t0);
            } catch (std::exception const& e) {
                inject_error = e.what();
            }
            for (auto k : spec.ks) {
                if (!corrupted) {
                    out.failures.push_back({rate, seed, k, inject_error});
                    continue;
                }
                try {
                    SweepRow row;
                    row.error_type = std::string(to_string(spec.error_type));
                    row.mode = to_string(spec.mode);
                    row.rate = rate;
                    row.seed = std::to_string(seed);
                    row.k = k;
                    row.ms_inject = ms_inject;
                    std::vector<std::size_t> suspects;
                    if (spec.random_baseline) {
                        auto t0 = Clock::now();
                        std::vector<std::size_t> all(corrupted->data.n_rows());
                        std::iota(all.begin(), all.end(), 0);
                        CounterRng rng(seed, 0xBA5E);
                        // Partial Fisher-Yates: a uniformly random ranking prefix.
                        for (std::size_t i = 0; i < k && i < all.size(); ++i) {
                            auto j = i + static_cast<std::size_t>(rng.below(all.size() - i));
                            std::swap(all[i], all[j]);
                        }
                        suspects.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(std::min(k, all.size())));
                        row.ms_greedy = ms(t0);
                    } else {
                        auto res = drilldown(corrupted->data, spec.constraint, k, dcfg);
                        suspects = res.suspects;
                        row.ms_init = res.ms_init;
                        row.ms_greedy = res.ms_greedy;
                    }
                    auto t0 = Clock::now();
                    auto q = score(suspects, corrupted->mask, std::min(k, suspects.size()));
                    row.precision = q.precision;
                    row.recall = q.recall;
                    row.fscore = q.f_score;
                    row.stat_before = constraint_statistic(corrupted->data, spec.constraint, spec.test);
                    row.stat_after = constraint_statistic(corrupted->data, spec.constraint, spec.test, suspects);
                    row.ms_score = ms(t0);
                    out.rows.push_back(std::move(row));
                } catch (std::exception const& e) {
                    out.failures.push_back({rate, seed, k, e.what()});
                }
            }
        }
    }

    // Mean over seeds for each (rate, k).
    for (auto rate : spec.rates) {
        for (auto k : spec.ks) {
            SweepRow agg;
            std::size_t count = 0;
            for (auto const& r : out.rows) {
                if (r.rate != rate || r.k != k) {
                    continue;
                }
                if (count == 0) {
                    agg = r;
                    agg.seed = "mean";
                    agg.stat_before = agg.stat_after = agg.precision = agg.recall = agg.fscore = 0.0;
                    agg.ms_inject = agg.ms_init = agg.ms_greedy = agg.ms_score = 0.0;
                }
                ++count;
                agg.stat_before += r.stat_before;
                agg.stat_after += r.stat_after;
                agg.precision += r.precision;
                agg.recall += r.recall;
                agg.fscore += r.fscore;
                agg.ms_inject += r.ms_inject;
                agg.ms_init += r.ms_init;
                agg.ms_greedy += r.ms_greedy;
                agg.ms_score += r.ms_score;
            }
            if (count == 0) {
                continue;
            }
            double c = static_cast<double>(count);
            for (auto* f : {&agg.stat_before, &agg.stat_after, &agg.precision, &agg.recall, &agg.fscore, &agg.ms_inject,
                            &agg.ms_init, &agg.ms_greedy, &agg.ms_score}) {
                *f /= c;
            }
            out.aggregates.push_back(std::move(agg));
        }
    }
    return out;
}

inline void write_sweep_csv(std::ostream& out, std::vector<SweepRow> const& rows)
{
    out << "error_type,mode,rate,seed,k,stat_before,stat_after,precision,recall,fscore,ms_init,ms_greedy\n";
    for (auto const& r : rows) {
        out << r.error_type << ',' << r.mode << ',' << detail::format_real(r.rate) << ',' << r.seed << ',' << r.k << ','
            << detail::format_real(r.stat_before) << ',' << detail::format_real(r.stat_after) << ','
            << detail::format_real(r.precision) << ',' << detail::format_real(r.recall) << ','
            << detail::format_real(r.fscore) << ',' << detail::format_real(r.ms_init) << ','
            << detail::format_real(r.ms_greedy) << '\n';
    }
}

} // namespace statguard
