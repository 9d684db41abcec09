#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace statguard {

// Coordinate compression: sorted distinct values, value -> dense rank.
template <typename T>
class RankDomain {
public:
    RankDomain() = default;

    explicit RankDomain(std::span<T const> values)
        : sorted_(values.begin(), values.end())
    {
        std::sort(sorted_.begin(), sorted_.end());
        sorted_.erase(std::unique(sorted_.begin(), sorted_.end()), sorted_.end());
    }

    [[nodiscard]] std::size_t size() const { return sorted_.size(); }
    [[nodiscard]] T const& value(std::size_t rank) const { return sorted_.at(rank); }

    [[nodiscard]] std::size_t rank(T const& v) const
    {
        auto it = std::lower_bound(sorted_.begin(), sorted_.end(), v);
        if (it == sorted_.end() || *it != v) {
            throw std::out_of_range("value not in rank domain");
        }
        return static_cast<std::size_t>(it - sorted_.begin());
    }

    [[nodiscard]] std::vector<std::uint32_t> ranks(std::span<T const> values) const
    {
        std::vector<std::uint32_t> out;
        out.reserve(values.size());
        for (auto const& v : values) {
            out.push_back(static_cast<std::uint32_t>(rank(v)));
        }
        return out;
    }

private:
    std::vector<T> sorted_;
};

// Multiset of ranks in [0, m) with O(log m) insert and less/equal/greater counts.
// Fenwick layout over per-rank counts.
class OrderCounter {
public:
    explicit OrderCounter(std::size_t domain_size = 0)
        : tree_(domain_size + 1, 0)
        , counts_(domain_size, 0)
    {
    }

    [[nodiscard]] std::size_t domain_size() const { return counts_.size(); }
    [[nodiscard]] std::int64_t size() const { return size_; }

    void insert(std::size_t rank)
    {
        check(rank);
        ++counts_[rank];
        ++size_;
        for (auto i = rank + 1; i < tree_.size(); i += i & (~i + 1)) {
            ++tree_[i];
        }
    }

    [[nodiscard]] std::int64_t count_less(std::size_t rank) const
    {
        check(rank);
        return prefix(rank);
    }

    [[nodiscard]] std::int64_t count_equal(std::size_t rank) const
    {
        check(rank);
        return counts_[rank];
    }

    [[nodiscard]] std::int64_t count_greater(std::size_t rank) const
    {
        check(rank);
        return size_ - prefix(rank + 1);
    }

    void clear()
    {
        std::fill(tree_.begin(), tree_.end(), 0);
        std::fill(counts_.begin(), counts_.end(), 0);
        size_ = 0;
    }

private:
    // Number of inserted elements with rank < r.
    [[nodiscard]] std::int64_t prefix(std::size_t r) const
    {
        std::int64_t s = 0;
        for (auto i = r; i > 0; i -= i & (~i + 1)) {
            s += tree_[i];
        }
        return s;
    }

    void check(std::size_t rank) const
    {
        if (rank >= counts_.size()) {
            throw std::out_of_range("rank outside counter domain");
        }
    }

    std::vector<std::int64_t> tree_;
    std::vector<std::int64_t> counts_;
    std::int64_t size_ = 0;
};

} // namespace statguard
