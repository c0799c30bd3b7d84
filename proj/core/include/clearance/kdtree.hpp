// Copyright 2026 The Clearance Authors
// SPDX-License-Identifier: Apache-2.0
//
// Static k-d tree over a fixed point set. All queries are exact (no
// approximation) and deterministic: results come back in ascending index
// order, and distance ties are broken by the lower index.

#ifndef CLEARANCE_KDTREE_HPP_
#define CLEARANCE_KDTREE_HPP_

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <vector>

namespace clearance {

template <std::size_t Dim>
class KdTree
{
  public:
    using Coord = std::array<double, Dim>;

    struct Neighbor
    {
        std::size_t index;
        double squared_distance;

        friend bool operator<(const Neighbor& a, const Neighbor& b)
        {
            if (a.squared_distance != b.squared_distance)
                return a.squared_distance < b.squared_distance;
            return a.index < b.index;
        }
    };

    KdTree() = default;

    explicit KdTree(std::vector<Coord> coords) : coords_(std::move(coords))
    {
        order_.resize(coords_.size());
        std::iota(order_.begin(), order_.end(), std::size_t{0});
        if (!coords_.empty())
        {
            nodes_.reserve(2 * coords_.size() / kLeafSize + 1);
            build(0, coords_.size());
        }
    }

    std::size_t size() const noexcept { return coords_.size(); }
    bool empty() const noexcept { return coords_.empty(); }
    const Coord& coord(std::size_t i) const { return coords_[i]; }

    static double squared_distance(const Coord& a, const Coord& b) noexcept
    {
        double s = 0.0;
        for (std::size_t d = 0; d < Dim; ++d)
        {
            const double diff = a[d] - b[d];
            s += diff * diff;
        }
        return s;
    }

    /// Indices of all points with distance <= radius, ascending.
    std::vector<std::size_t> radius_search(const Coord& q, double radius) const
    {
        std::vector<std::size_t> out;
        radius_visit(q, radius, [&](std::size_t i, double) { out.push_back(i); });
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Calls fn(index, squared_distance) for every point within radius, in
    /// tree order.
    template <typename Fn>
    void radius_visit(const Coord& q, double radius, Fn&& fn) const
    {
        if (nodes_.empty() || radius < 0.0)
            return;
        radius_recurse(0, q, radius * radius, fn);
    }

    /// The k nearest points (fewer if the tree is smaller), closest first.
    /// `exclude` removes one index from consideration (the query point itself).
    std::vector<Neighbor> knn(const Coord& q, std::size_t k, std::optional<std::size_t> exclude = std::nullopt) const
    {
        std::priority_queue<Neighbor> heap;
        if (k == 0 || nodes_.empty())
            return {};
        knn_recurse(0, q, k, exclude, heap);
        std::vector<Neighbor> out(heap.size());
        for (auto it = out.rbegin(); it != out.rend(); ++it)
        {
            *it = heap.top();
            heap.pop();
        }
        return out;
    }

    std::optional<std::size_t> nearest(const Coord& q, std::optional<std::size_t> exclude = std::nullopt) const
    {
        const auto nn = knn(q, 1, exclude);
        if (nn.empty())
            return std::nullopt;
        return nn.front().index;
    }

  private:
    static constexpr std::size_t kLeafSize = 12;

    struct Node
    {
        std::size_t begin;
        std::size_t end;
        std::uint32_t left{0};
        std::uint32_t right{0};
        std::uint32_t axis{0};
        double split{0.0};
        bool leaf() const noexcept { return left == 0 && right == 0; }
    };

    std::uint32_t build(std::size_t begin, std::size_t end)
    {
        const auto id = static_cast<std::uint32_t>(nodes_.size());
        nodes_.push_back(Node{begin, end});
        if (end - begin <= kLeafSize)
            return id;

        Coord lo, hi;
        lo.fill(std::numeric_limits<double>::infinity());
        hi.fill(-std::numeric_limits<double>::infinity());
        for (std::size_t i = begin; i < end; ++i)
        {
            for (std::size_t d = 0; d < Dim; ++d)
            {
                lo[d] = std::min(lo[d], coords_[order_[i]][d]);
                hi[d] = std::max(hi[d], coords_[order_[i]][d]);
            }
        }
        std::uint32_t axis = 0;
        for (std::uint32_t d = 1; d < Dim; ++d)
        {
            if (hi[d] - lo[d] > hi[axis] - lo[axis])
                axis = d;
        }
        if (hi[axis] - lo[axis] <= 0.0)
            return id; // all coincident, keep as an oversized leaf

        const std::size_t mid = begin + (end - begin) / 2;
        std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(begin),
                         order_.begin() + static_cast<std::ptrdiff_t>(mid),
                         order_.begin() + static_cast<std::ptrdiff_t>(end), [&](std::size_t a, std::size_t b) {
                             if (coords_[a][axis] != coords_[b][axis])
                                 return coords_[a][axis] < coords_[b][axis];
                             return a < b;
                         });
        const double split = coords_[order_[mid]][axis];

        const std::uint32_t left = build(begin, mid);
        const std::uint32_t right = build(mid, end);
        nodes_[id].left = left;
        nodes_[id].right = right;
        nodes_[id].axis = axis;
        nodes_[id].split = split;
        return id;
    }

    // Left subtree holds coordinates <= split, right holds >= split.
    template <typename Fn>
    void radius_recurse(std::uint32_t id, const Coord& q, double r2, Fn& fn) const
    {
        const Node& n = nodes_[id];
        if (n.leaf())
        {
            for (std::size_t i = n.begin; i < n.end; ++i)
            {
                const double d2 = squared_distance(coords_[order_[i]], q);
                if (d2 <= r2)
                    fn(order_[i], d2);
            }
            return;
        }
        const double diff = q[n.axis] - n.split;
        if (diff <= 0.0 || diff * diff <= r2)
            radius_recurse(n.left, q, r2, fn);
        if (diff >= 0.0 || diff * diff <= r2)
            radius_recurse(n.right, q, r2, fn);
    }

    void knn_recurse(std::uint32_t id, const Coord& q, std::size_t k, std::optional<std::size_t> exclude,
                     std::priority_queue<Neighbor>& heap) const
    {
        const Node& n = nodes_[id];
        if (n.leaf())
        {
            for (std::size_t i = n.begin; i < n.end; ++i)
            {
                const std::size_t idx = order_[i];
                if (exclude && *exclude == idx)
                    continue;
                const Neighbor cand{idx, squared_distance(coords_[idx], q)};
                if (heap.size() < k)
                    heap.push(cand);
                else if (cand < heap.top())
                {
                    heap.pop();
                    heap.push(cand);
                }
            }
            return;
        }
        const double diff = q[n.axis] - n.split;
        const std::uint32_t near = diff <= 0.0 ? n.left : n.right;
        const std::uint32_t far = diff <= 0.0 ? n.right : n.left;
        knn_recurse(near, q, k, exclude, heap);
        if (heap.size() < k || diff * diff <= heap.top().squared_distance)
            knn_recurse(far, q, k, exclude, heap);
    }

    std::vector<Coord> coords_;
    std::vector<std::size_t> order_;
    std::vector<Node> nodes_;
};

} // namespace clearance

#endif // CLEARANCE_KDTREE_HPP_
