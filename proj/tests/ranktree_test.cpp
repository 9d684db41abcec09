#include <gtest/gtest.h>

#include <map>
#include <random>

#include "support.hpp"

using namespace statguard;

TEST(OrderCounter, FreshCounterIsEmpty)
{
    OrderCounter c(5);
    EXPECT_EQ(c.size(), 0);
    for (std::size_t r = 0; r < 5; ++r) {
        EXPECT_EQ(c.count_less(r), 0);
        EXPECT_EQ(c.count_equal(r), 0);
        EXPECT_EQ(c.count_greater(r), 0);
    }
}

TEST(OrderCounter, RepeatedInsert)
{
    OrderCounter c(5);
    c.insert(3);
    c.insert(3);
    EXPECT_EQ(c.count_equal(3), 2);
    EXPECT_EQ(c.size(), 2);
}

TEST(OrderCounter, CountLessAfterPrefix)
{
    OrderCounter c(3);
    for (std::size_t r : {0, 1, 2}) {
        c.insert(r);
    }
    EXPECT_EQ(c.count_less(2), 2);
}

TEST(OrderCounter, HandEnumeratedQuery)
{
    OrderCounter c(5);
    for (std::size_t r : {1, 1, 4}) {
        c.insert(r);
    }
    EXPECT_EQ(c.count_less(2), 2);
    EXPECT_EQ(c.count_equal(2), 0);
    EXPECT_EQ(c.count_greater(2), 1);
}

TEST(OrderCounter, OutOfDomainThrows)
{
    OrderCounter c(4);
    EXPECT_THROW(c.insert(4), std::out_of_range);
    EXPECT_THROW((void)c.count_less(4), std::out_of_range);
    EXPECT_THROW((void)c.count_greater(7), std::out_of_range);
    EXPECT_THROW(OrderCounter().insert(0), std::out_of_range);
}

TEST(OrderCounter, ClearResets)
{
    OrderCounter c(4);
    c.insert(1);
    c.insert(2);
    c.clear();
    EXPECT_EQ(c.size(), 0);
    EXPECT_EQ(c.count_greater(0), 0);
}

TEST(OrderCounter, DifferentialAgainstMultiset)
{
    std::mt19937_64 rng(71);
    for (std::size_t m : {1u, 2u, 7u, 64u, 1000u}) {
        OrderCounter c(m);
        std::map<std::size_t, std::int64_t> oracle;
        std::int64_t total = 0;
        std::uniform_int_distribution<std::size_t> pick(0, m - 1);
        for (int op = 0; op < 30000; ++op) {
            auto r = pick(rng);
            if (rng() % 2) {
                c.insert(r);
                ++oracle[r];
                ++total;
                continue;
            }
            std::int64_t less = 0, equal = 0, greater = 0;
            for (auto const& [k, v] : oracle) {
                (k < r ? less : k == r ? equal : greater) += v;
            }
            ASSERT_EQ(c.count_less(r), less);
            ASSERT_EQ(c.count_equal(r), equal);
            ASSERT_EQ(c.count_greater(r), greater);
            ASSERT_EQ(less + equal + greater, c.size());
            ASSERT_EQ(c.size(), total);
        }
    }
}

TEST(RankDomain, BijectiveAndOrderPreserving)
{
    std::mt19937_64 rng(73);
    for (int trial = 0; trial < 100; ++trial) {
        auto v = gen::with_ties(rng, 1 + rng() % 200, 0.4);
        RankDomain<double> d{std::span<double const>(v)};
        for (std::size_t r = 0; r < d.size(); ++r) {
            EXPECT_EQ(d.rank(d.value(r)), r);
            if (r > 0) {
                EXPECT_LT(d.value(r - 1), d.value(r));
            }
        }
        auto ranks = d.ranks(v);
        for (std::size_t i = 0; i < v.size(); ++i) {
            for (std::size_t j = 0; j < v.size(); j += 7) {
                EXPECT_EQ(v[i] < v[j], ranks[i] < ranks[j]);
            }
        }
    }
}

TEST(RankDomain, UnknownValueThrows)
{
    std::vector<double> v{1.0, 3.0};
    RankDomain<double> d{std::span<double const>(v)};
    EXPECT_THROW((void)d.rank(2.0), std::out_of_range);
    EXPECT_EQ(d.size(), 2u);
}
