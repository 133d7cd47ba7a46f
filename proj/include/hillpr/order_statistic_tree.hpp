// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
/*!
 * \file hillpr/order_statistic_tree.hpp
 * \brief Ordered stores of distinct reals with rank and select queries.
 *
 * Both stores expose the same surface so the Hill state can be
 * instantiated with either:
 *   - size(), kth(k), count_le(x), insert(x), for_each(f), comparisons().
 * insert() returns the 0-based rank of the new key and throws TieError if
 * the key is already present.
 */
//---------------------------------------------------------------------------//
#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "hillpr/error.hpp"

namespace hillpr
{

//! Sorted contiguous array; O(log m) search, O(m) worst-case insertion.
class SortedVectorStore
{
  public:
    std::size_t size() const noexcept { return values_.size(); }
    double kth(std::size_t k) const { return values_[k]; }

    std::size_t count_le(double x) const
    {
        auto it = std::upper_bound(
            values_.begin(), values_.end(), x, [this](double a, double b) {
                ++comparisons_;
                return a < b;
            });
        return static_cast<std::size_t>(it - values_.begin());
    }

    std::size_t insert(double x)
    {
        auto it = std::lower_bound(
            values_.begin(), values_.end(), x, [this](double a, double b) {
                ++comparisons_;
                return a < b;
            });
        if (it != values_.end() && *it == x)
        {
            throw TieError("value " + std::to_string(x) + " is already present");
        }
        auto const rank = static_cast<std::size_t>(it - values_.begin());
        values_.insert(it, x);
        return rank;
    }

    void reserve(std::size_t n) { values_.reserve(n); }

    template<class F>
    void for_each(F&& f) const
    {
        for (double v : values_)
        {
            f(v);
        }
    }

    std::uint64_t comparisons() const noexcept { return comparisons_; }

  private:
    std::vector<double> values_;
    mutable std::uint64_t comparisons_{0};
};

//! Size-augmented AVL tree stored in a node arena; O(log m) for every query.
class OrderStatisticTree
{
  public:
    std::size_t size() const noexcept { return nodes_.size(); }

    double kth(std::size_t k) const
    {
        std::int32_t n = root_;
        while (true)
        {
            auto const& node = nodes_[n];
            std::size_t const left = size_of(node.left);
            if (k < left)
            {
                n = node.left;
            }
            else if (k == left)
            {
                return node.key;
            }
            else
            {
                k -= left + 1;
                n = node.right;
            }
        }
    }

    std::size_t count_le(double x) const
    {
        std::size_t count = 0;
        std::int32_t n = root_;
        while (n != kNull)
        {
            auto const& node = nodes_[n];
            ++comparisons_;
            if (x < node.key)
            {
                n = node.left;
            }
            else
            {
                count += size_of(node.left) + 1;
                n = node.right;
            }
        }
        return count;
    }

    std::size_t insert(double x)
    {
        std::size_t rank = 0;
        root_ = this->insert_at(root_, x, rank);
        return rank;
    }

    void reserve(std::size_t n) { nodes_.reserve(n); }

    template<class F>
    void for_each(F&& f) const
    {
        std::vector<std::int32_t> stack;
        std::int32_t n = root_;
        while (n != kNull || !stack.empty())
        {
            while (n != kNull)
            {
                stack.push_back(n);
                n = nodes_[n].left;
            }
            n = stack.back();
            stack.pop_back();
            f(nodes_[n].key);
            n = nodes_[n].right;
        }
    }

    std::uint64_t comparisons() const noexcept { return comparisons_; }

    //! Height of the tree (0 when empty), for balance checks.
    int height() const noexcept { return height_of(root_); }

  private:
    static constexpr std::int32_t kNull = -1;

    struct Node
    {
        double key;
        std::int32_t left{kNull};
        std::int32_t right{kNull};
        std::int32_t height{1};
        std::uint32_t size{1};
    };

    std::size_t size_of(std::int32_t n) const noexcept
    {
        return n == kNull ? 0 : nodes_[n].size;
    }
    int height_of(std::int32_t n) const noexcept
    {
        return n == kNull ? 0 : nodes_[n].height;
    }

    void pull(std::int32_t n) noexcept
    {
        auto& node = nodes_[n];
        node.height = 1 + std::max(height_of(node.left), height_of(node.right));
        node.size = static_cast<std::uint32_t>(1 + size_of(node.left)
                                               + size_of(node.right));
    }

    std::int32_t rotate_right(std::int32_t n) noexcept
    {
        std::int32_t const l = nodes_[n].left;
        nodes_[n].left = nodes_[l].right;
        nodes_[l].right = n;
        this->pull(n);
        this->pull(l);
        return l;
    }

    std::int32_t rotate_left(std::int32_t n) noexcept
    {
        std::int32_t const r = nodes_[n].right;
        nodes_[n].right = nodes_[r].left;
        nodes_[r].left = n;
        this->pull(n);
        this->pull(r);
        return r;
    }

    std::int32_t rebalance(std::int32_t n) noexcept
    {
        this->pull(n);
        int const balance = height_of(nodes_[n].left) - height_of(nodes_[n].right);
        if (balance > 1)
        {
            std::int32_t const l = nodes_[n].left;
            if (height_of(nodes_[l].left) < height_of(nodes_[l].right))
            {
                nodes_[n].left = this->rotate_left(l);
            }
            return this->rotate_right(n);
        }
        if (balance < -1)
        {
            std::int32_t const r = nodes_[n].right;
            if (height_of(nodes_[r].right) < height_of(nodes_[r].left))
            {
                nodes_[n].right = this->rotate_right(r);
            }
            return this->rotate_left(n);
        }
        return n;
    }

    std::int32_t insert_at(std::int32_t n, double x, std::size_t& rank)
    {
        if (n == kNull)
        {
            nodes_.push_back(Node{x});
            return static_cast<std::int32_t>(nodes_.size() - 1);
        }
        ++comparisons_;
        double const key = nodes_[n].key;
        if (x == key)
        {
            throw TieError("value " + std::to_string(x) + " is already present");
        }
        if (x < key)
        {
            std::int32_t const child = this->insert_at(nodes_[n].left, x, rank);
            nodes_[n].left = child;
        }
        else
        {
            rank += size_of(nodes_[n].left) + 1;
            std::int32_t const child = this->insert_at(nodes_[n].right, x, rank);
            nodes_[n].right = child;
        }
        return this->rebalance(n);
    }

    std::vector<Node> nodes_;
    std::int32_t root_{kNull};
    mutable std::uint64_t comparisons_{0};
};

}  // namespace hillpr
