#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "support.hpp"

using namespace statguard;

namespace {

SweepSpec base_spec()
{
    SweepSpec spec;
    spec.error_type = ErrorType::Sorting;
    spec.mode = SelectionMode::random();
    spec.constraint = parse_constraint("dep(A; B)");
    spec.rates = {0.1};
    spec.ks = {10};
    spec.seeds = {1};
    return spec;
}

} // namespace

TEST(Score, HandCount)
{
    auto q = score({1, 2, 3}, {2, 3, 4, 5}, 3);
    EXPECT_EQ(q.hits, 2u);
    EXPECT_DOUBLE_EQ(q.precision, 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(q.recall, 0.5);
    EXPECT_DOUBLE_EQ(q.f_score, 4.0 / 7.0);
}

TEST(Score, PerfectAndDisjoint)
{
    auto perfect = score({7, 3, 5}, {3, 5, 7}, 3);
    EXPECT_EQ(perfect.precision, 1.0);
    EXPECT_EQ(perfect.recall, 1.0);
    EXPECT_EQ(perfect.f_score, 1.0);
    auto none = score({1, 2}, {3, 4}, 2);
    EXPECT_EQ(none.precision, 0.0);
    EXPECT_EQ(none.recall, 0.0);
    EXPECT_EQ(none.f_score, 0.0);
}

TEST(Score, OnlyTopKCounts)
{
    auto q = score({1, 9, 2, 3}, {2, 3}, 2);
    EXPECT_EQ(q.hits, 0u);
}

TEST(Score, Errors)
{
    EXPECT_THROW(score({1, 2}, {1}, 3), std::invalid_argument);
    EXPECT_THROW(score({1, 2}, {1}, 0), std::invalid_argument);
    EXPECT_THROW(score({1, 2}, std::vector<std::size_t>{}, 1), std::invalid_argument);
}

TEST(Score, RandomProperties)
{
    std::mt19937_64 rng(241);
    for (int trial = 0; trial < 1000; ++trial) {
        std::size_t n = 5 + rng() % 50;
        std::vector<std::size_t> ids(n);
        std::iota(ids.begin(), ids.end(), 0);
        std::shuffle(ids.begin(), ids.end(), rng);
        std::size_t d = 1 + rng() % n;
        std::vector<std::size_t> detected(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(d));
        std::shuffle(ids.begin(), ids.end(), rng);
        std::size_t t = 1 + rng() % n;
        std::vector<std::size_t> truth(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(t));
        std::size_t k = 1 + rng() % d;
        auto q = score(detected, truth, k);

        std::set<std::size_t> tset(truth.begin(), truth.end());
        std::size_t hits = 0;
        for (std::size_t i = 0; i < k; ++i) {
            hits += tset.count(detected[i]);
        }
        EXPECT_EQ(q.hits, hits);
        EXPECT_NEAR(q.precision * static_cast<double>(k), static_cast<double>(hits), 1e-9);
        EXPECT_NEAR(q.recall * static_cast<double>(t), static_cast<double>(hits), 1e-9);
        double p = q.precision, r = q.recall;
        double f = p + r > 0 ? 2 * p * r / (p + r) : 0.0;
        EXPECT_NEAR(q.f_score, f, 1e-12);
        EXPECT_LE(q.f_score, std::min(2 * p, 2 * r) + 1e-12);
        EXPECT_LE(q.f_score, std::max(p, r) + 1e-12);
        if (q.precision == q.recall) {
            EXPECT_NEAR(q.f_score, p, 1e-12);
        }
    }
}

TEST(Score, MaskUsesChangedRows)
{
    ErrorMask mask;
    mask.rows = {{1, Cell(1.0), ErrorType::Sorting, true}, {2, Cell(2.0), ErrorType::Sorting, false}};
    auto q = score({2, 1}, mask, 2);
    EXPECT_EQ(q.truth_size, 1u);
    EXPECT_EQ(q.hits, 1u);
}

TEST(Sweep, SingleCell)
{
    std::mt19937_64 rng(251);
    auto ds = gen::pair_dataset(rng, 200, 0.6);
    auto result = run_sweep(ds, base_spec());
    ASSERT_EQ(result.rows.size(), 1u);
    ASSERT_EQ(result.aggregates.size(), 1u);
    EXPECT_TRUE(result.failures.empty());
    auto const& row = result.rows[0];
    EXPECT_EQ(row.error_type, "sorting");
    EXPECT_EQ(row.mode, "random");
    EXPECT_EQ(row.seed, "1");
    EXPECT_EQ(row.k, 10u);
    EXPECT_GE(row.precision, 0.0);
    EXPECT_LE(row.precision, 1.0);
}

TEST(Sweep, GridCardinalityAndAggregates)
{
    std::mt19937_64 rng(257);
    auto ds = gen::pair_dataset(rng, 300, 0.6);
    auto spec = base_spec();
    spec.rates = {0.1, 0.3};
    spec.seeds = {1, 2};
    spec.ks = {50};
    auto result = run_sweep(ds, spec);
    ASSERT_EQ(result.rows.size(), 4u);
    ASSERT_EQ(result.aggregates.size(), 2u);
    for (auto const& agg : result.aggregates) {
        EXPECT_EQ(agg.seed, "mean");
        double sum = 0.0;
        for (auto const& r : result.rows) {
            if (r.rate == agg.rate) {
                sum += r.precision;
            }
        }
        EXPECT_NEAR(agg.precision, sum / 2.0, 1e-15);
    }
    std::ostringstream csv;
    write_sweep_csv(csv, result.rows);
    auto text = csv.str();
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 5);
}

TEST(Sweep, DeterministicDetections)
{
    std::mt19937_64 rng(263);
    auto ds = gen::pair_dataset(rng, 200, 0.5);
    auto spec = base_spec();
    spec.seeds = {3, 4};
    auto a = run_sweep(ds, spec);
    auto b = run_sweep(ds, spec);
    ASSERT_EQ(a.rows.size(), b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        EXPECT_EQ(a.rows[i].precision, b.rows[i].precision);
        EXPECT_EQ(a.rows[i].stat_after, b.rows[i].stat_after);
    }
}

TEST(Sweep, CellFailuresRecordedAndSweepContinues)
{
    std::mt19937_64 rng(269);
    auto ds = gen::pair_dataset(rng, 50, 0.5);
    auto spec = base_spec();
    spec.rates = {0.3};
    spec.ks = {10, 50};
    auto result = run_sweep(ds, spec);
    EXPECT_EQ(result.rows.size(), 1u);
    ASSERT_EQ(result.failures.size(), 1u);
    EXPECT_EQ(result.failures[0].k, 50u);
}

TEST(Sweep, InvalidSpecRejected)
{
    std::mt19937_64 rng(271);
    auto ds = gen::pair_dataset(rng, 50, 0.5);
    auto spec = base_spec();
    spec.rates = {};
    EXPECT_THROW(run_sweep(ds, spec), std::invalid_argument);
    spec = base_spec();
    spec.rates = {1.5};
    EXPECT_THROW(run_sweep(ds, spec), std::invalid_argument);
}

TEST(Sweep, RandomBaselineMatchesHypergeometricMean)
{
    std::mt19937_64 rng(277);
    std::size_t const n = 400;
    std::size_t const k = 40;
    auto ds = gen::pair_dataset(rng, n, 0.5);
    auto spec = base_spec();
    spec.rates = {0.3};
    spec.ks = {k};
    spec.random_baseline = true;
    spec.seeds.clear();
    for (std::uint64_t s = 1; s <= 400; ++s) {
        spec.seeds.push_back(s);
    }
    auto result = run_sweep(ds, spec);
    ASSERT_EQ(result.rows.size(), spec.seeds.size());

    // Expected precision per seed is t/n; variance follows hypergeometric sampling of k rows.
    double expected = 0.0, variance = 0.0;
    for (auto seed : spec.seeds) {
        auto t = static_cast<double>(inject(spec.error_type, ds, "A", 0.3, spec.mode, seed).mask.changed_ids().size());
        double p = t / n;
        expected += p;
        variance += p * (1 - p) * static_cast<double>(n - k) / (static_cast<double>(k) * (n - 1));
    }
    auto const s = static_cast<double>(spec.seeds.size());
    expected /= s;
    double sigma = std::sqrt(variance) / s;
    ASSERT_EQ(result.aggregates.size(), 1u);
    EXPECT_NEAR(result.aggregates[0].precision, expected, 3.0 * sigma);
}
