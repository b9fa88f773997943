// Copyright 2026 The foodvol Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "foodvol/mesh.hpp"

namespace foodvol {

struct Neighbor {
  std::uint32_t index = 0;
  double squared_distance = std::numeric_limits<double>::infinity();
};

/// Static 3-d tree for exact nearest-neighbour queries. Among equidistant
/// points the smallest index wins, so results do not depend on tree layout.
class KdTree {
 public:
  explicit KdTree(std::span<const Vec3> points)
      : points_(points.begin(), points.end()), order_(points.size()) {
    std::iota(order_.begin(), order_.end(), std::uint32_t{0});
    if (!order_.empty()) build(0, static_cast<std::uint32_t>(order_.size()), 0);
  }

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

  Neighbor nearest(const Vec3& q) const {
    Neighbor best;
    if (!nodes_.empty()) search(0, q, best);
    return best;
  }

 private:
  static constexpr std::uint32_t kLeafSize = 12;
  static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

  struct Node {
    std::uint32_t begin, end;
    std::uint32_t left = kNone, right = kNone;
    int axis = -1;
    double split = 0.0;
  };

  std::uint32_t build(std::uint32_t begin, std::uint32_t end, int depth) {
    const auto id = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back({begin, end});
    if (end - begin <= kLeafSize) return id;

    Aabb box;
    for (auto i = begin; i < end; ++i) box.extend(points_[order_[i]]);
    int axis = 0;
    (box.max - box.min).maxCoeff(&axis);
    const auto mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](std::uint32_t a, std::uint32_t b) {
                       const double pa = points_[a][axis], pb = points_[b][axis];
                       return pa < pb || (pa == pb && a < b);
                     });
    const double split = points_[order_[mid]][axis];
    const auto left = build(begin, mid, depth + 1);
    const auto right = build(mid, end, depth + 1);
    nodes_[id].axis = axis;
    nodes_[id].split = split;
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
  }

  void search(std::uint32_t id, const Vec3& q, Neighbor& best) const {
    const Node& n = nodes_[id];
    if (n.axis < 0) {
      for (auto i = n.begin; i < n.end; ++i) {
        const auto idx = order_[i];
        const double d2 = (points_[idx] - q).squaredNorm();
        if (d2 < best.squared_distance ||
            (d2 == best.squared_distance && idx < best.index)) {
          best = {idx, d2};
        }
      }
      return;
    }
    const double diff = q[n.axis] - n.split;
    const auto near = diff < 0 ? n.left : n.right;
    const auto far = diff < 0 ? n.right : n.left;
    search(near, q, best);
    // <= keeps equidistant candidates on the far side reachable.
    if (diff * diff <= best.squared_distance) search(far, q, best);
  }

  std::vector<Vec3> points_;
  std::vector<std::uint32_t> order_;
  std::vector<Node> nodes_;
};

}  // namespace foodvol
