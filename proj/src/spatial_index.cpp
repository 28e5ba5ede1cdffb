#include "sligeo/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

#include "sligeo/error.hpp"

namespace sligeo {

namespace {

constexpr std::size_t kLeafSize = 16;

bool neighbor_less(const Neighbor& a, const Neighbor& b) {
  return a.distance < b.distance || (a.distance == b.distance && a.id < b.id);
}

}  // namespace

SpatialIndex::SpatialIndex(PointSet points) : points_(std::move(points)) {
  order_.resize(points_.size());
  for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = i;
  nodes_.reserve(2 * (points_.size() / kLeafSize + 1));
  build(0, order_.size(), 0);
}

std::size_t SpatialIndex::build(std::size_t begin, std::size_t end, std::size_t depth) {
  const std::size_t dim = points_.dim();
  const std::size_t id = nodes_.size();
  nodes_.push_back(Node{begin, end, 0, 0});
  box_lo_.resize((id + 1) * dim, std::numeric_limits<double>::infinity());
  box_hi_.resize((id + 1) * dim, -std::numeric_limits<double>::infinity());
  for (std::size_t i = begin; i < end; ++i) {
    auto p = points_[order_[i]];
    for (std::size_t j = 0; j < dim; ++j) {
      box_lo_[id * dim + j] = std::min(box_lo_[id * dim + j], p[j]);
      box_hi_[id * dim + j] = std::max(box_hi_[id * dim + j], p[j]);
    }
  }
  if (end - begin <= kLeafSize) return id;

  // Split along the widest axis of the bounding box.
  std::size_t axis = depth % dim;
  double widest = -1.0;
  for (std::size_t j = 0; j < dim; ++j) {
    const double w = box_hi_[id * dim + j] - box_lo_[id * dim + j];
    if (w > widest) {
      widest = w;
      axis = j;
    }
  }
  if (widest <= 0.0) return id;  // all points coincide

  const std::size_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(begin),
                   order_.begin() + static_cast<std::ptrdiff_t>(mid),
                   order_.begin() + static_cast<std::ptrdiff_t>(end),
                   [&](std::size_t a, std::size_t b) {
                     const double pa = points_[a][axis];
                     const double pb = points_[b][axis];
                     return pa < pb || (pa == pb && a < b);
                   });
  const std::size_t left = build(begin, mid, depth + 1);
  const std::size_t right = build(mid, end, depth + 1);
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

double SpatialIndex::box_distance_sq(std::size_t node, std::span<const double> q) const {
  const std::size_t dim = points_.dim();
  double s = 0.0;
  for (std::size_t j = 0; j < dim; ++j) {
    const double lo = box_lo_[node * dim + j];
    const double hi = box_hi_[node * dim + j];
    double gap = 0.0;
    if (q[j] < lo) {
      gap = lo - q[j];
    } else if (q[j] > hi) {
      gap = q[j] - hi;
    }
    s += gap * gap;
  }
  return s;
}

double SpatialIndex::point_distance_sq(std::size_t id, std::span<const double> q) const {
  auto p = points_[id];
  double s = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    const double d = p[j] - q[j];
    s += d * d;
  }
  return s;
}

std::vector<Neighbor> SpatialIndex::nearest(std::span<const double> query, std::size_t m) const {
  if (query.size() != points_.dim()) throw InvalidArgument("query dimension mismatch");
  m = std::min(m, size());
  std::vector<Neighbor> out;
  if (m == 0) return out;

  // Max-heap on (distance, id) holding the best m candidates so far.
  auto heap_less = [](const Neighbor& a, const Neighbor& b) { return neighbor_less(a, b); };
  std::vector<Neighbor> heap;
  heap.reserve(m + 1);

  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    const std::size_t node = stack.back();
    stack.pop_back();
    if (heap.size() == m &&
        std::sqrt(box_distance_sq(node, query)) > heap.front().distance) {
      continue;
    }
    const Node& n = nodes_[node];
    if (n.left == 0) {
      for (std::size_t i = n.begin; i < n.end; ++i) {
        const std::size_t id = order_[i];
        Neighbor cand{id, std::sqrt(point_distance_sq(id, query))};
        if (heap.size() < m) {
          heap.push_back(cand);
          std::push_heap(heap.begin(), heap.end(), heap_less);
        } else if (neighbor_less(cand, heap.front())) {
          std::pop_heap(heap.begin(), heap.end(), heap_less);
          heap.back() = cand;
          std::push_heap(heap.begin(), heap.end(), heap_less);
        }
      }
      continue;
    }
    // Visit the nearer child first.
    const double dl = box_distance_sq(n.left, query);
    const double dr = box_distance_sq(n.right, query);
    if (dl <= dr) {
      stack.push_back(n.right);
      stack.push_back(n.left);
    } else {
      stack.push_back(n.left);
      stack.push_back(n.right);
    }
  }
  std::sort(heap.begin(), heap.end(), neighbor_less);
  return heap;
}

double SpatialIndex::knn_distance(std::span<const double> query, std::size_t k,
                                  bool exclude_self) const {
  const std::size_t n = size();
  if (k == 0) throw InvalidArgument("neighbor order k must be >= 1");
  if (exclude_self ? k >= n : k > n)
    throw InvalidArgument("neighbor order k=" + std::to_string(k) + " out of range for " +
                          std::to_string(n) + " points" +
                          (exclude_self ? " (self excluded)" : ""));
  const auto nn = nearest(query, exclude_self ? k + 1 : k);
  if (exclude_self && nn.front().distance == 0.0) return nn[k].distance;
  return nn[k - 1].distance;
}

std::vector<Neighbor> SpatialIndex::radius_neighbors(std::span<const double> query,
                                                     double radius) const {
  if (query.size() != points_.dim()) throw InvalidArgument("query dimension mismatch");
  if (!(radius >= 0.0)) throw InvalidArgument("search radius must be >= 0");
  std::vector<Neighbor> out;
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    const std::size_t node = stack.back();
    stack.pop_back();
    if (std::sqrt(box_distance_sq(node, query)) > radius) continue;
    const Node& n = nodes_[node];
    if (n.left == 0) {
      for (std::size_t i = n.begin; i < n.end; ++i) {
        const std::size_t id = order_[i];
        const double d = std::sqrt(point_distance_sq(id, query));
        if (d <= radius) out.push_back({id, d});
      }
    } else {
      stack.push_back(n.right);
      stack.push_back(n.left);
    }
  }
  std::sort(out.begin(), out.end(), neighbor_less);
  return out;
}

CoverRadii SpatialIndex::prepare_cover(std::span<const double> radii) const {
  if (radii.size() != size()) throw InvalidArgument("cover radii length must equal point count");
  CoverRadii cover;
  cover.radii_.assign(radii.begin(), radii.end());
  cover.node_max_.assign(nodes_.size(), 0.0);
  // Children are always created after their parent, so a reverse sweep sees
  // both children before the parent.
  for (std::size_t node = nodes_.size(); node-- > 0;) {
    const Node& n = nodes_[node];
    double m = 0.0;
    if (n.left == 0) {
      for (std::size_t i = n.begin; i < n.end; ++i) m = std::max(m, radii[order_[i]]);
    } else {
      m = std::max(cover.node_max_[n.left], cover.node_max_[n.right]);
    }
    cover.node_max_[node] = m;
  }
  return cover;
}

std::vector<Neighbor> SpatialIndex::covering_neighbors(std::span<const double> query,
                                                       const CoverRadii& cover) const {
  if (query.size() != points_.dim()) throw InvalidArgument("query dimension mismatch");
  if (cover.node_max_.size() != nodes_.size())
    throw InvalidArgument("cover radii were prepared for a different index");
  std::vector<Neighbor> out;
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    const std::size_t node = stack.back();
    stack.pop_back();
    if (std::sqrt(box_distance_sq(node, query)) > cover.node_max_[node]) continue;
    const Node& n = nodes_[node];
    if (n.left == 0) {
      for (std::size_t i = n.begin; i < n.end; ++i) {
        const std::size_t id = order_[i];
        const double d = std::sqrt(point_distance_sq(id, query));
        if (d <= cover.radii_[id]) out.push_back({id, d});
      }
    } else {
      stack.push_back(n.right);
      stack.push_back(n.left);
    }
  }
  std::sort(out.begin(), out.end(),
            [](const Neighbor& a, const Neighbor& b) { return a.id < b.id; });
  return out;
}

}  // namespace sligeo
