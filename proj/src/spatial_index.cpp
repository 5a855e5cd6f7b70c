#include "clgd/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace clgd {
namespace {

constexpr std::uint32_t kLeafSize = 16;

double squared_distance(const Vec3& a, const Vec3& b) {
  const double dx = a.x() - b.x();
  const double dy = a.y() - b.y();
  const double dz = a.z() - b.z();
  return dx * dx + dy * dy + dz * dz;
}

struct Candidate {
  double d2;
  std::uint32_t idx;
};

// Heap comparator; the heap top is the worst candidate under the
// (distance, index) order.
struct LessWorse {
  bool operator()(const Candidate& a, const Candidate& b) const {
    if (a.d2 != b.d2) return a.d2 < b.d2;
    return a.idx < b.idx;
  }
};

class KBest {
 public:
  KBest(std::vector<Candidate>& buf, std::size_t k) : heap_(buf), k_(k) {
    heap_.clear();
  }

  bool full() const { return heap_.size() == k_; }
  double worst_d2() const { return heap_.front().d2; }

  void offer(double d2, std::uint32_t idx) {
    if (heap_.size() < k_) {
      heap_.push_back({d2, idx});
      std::push_heap(heap_.begin(), heap_.end(), LessWorse{});
      return;
    }
    const Candidate& worst = heap_.front();
    if (d2 < worst.d2 || (d2 == worst.d2 && idx < worst.idx)) {
      std::pop_heap(heap_.begin(), heap_.end(), LessWorse{});
      heap_.back() = {d2, idx};
      std::push_heap(heap_.begin(), heap_.end(), LessWorse{});
    }
  }

  std::vector<Candidate>& sorted() {
    std::sort(heap_.begin(), heap_.end(), LessWorse{});
    return heap_;
  }

 private:
  std::vector<Candidate>& heap_;
  std::size_t k_;
};

thread_local std::vector<Candidate> t_scratch;

}  // namespace

SpatialIndex::SpatialIndex(const PointCloud& cloud) : cloud_(&cloud) {
  cloud.validate();
  order_.resize(cloud.size());
  for (std::uint32_t i = 0; i < order_.size(); ++i) order_[i] = i;
  nodes_.reserve(2 * cloud.size() / kLeafSize + 2);
  root_ = build(0, static_cast<std::uint32_t>(order_.size()));
}

std::uint32_t SpatialIndex::build(std::uint32_t begin, std::uint32_t end) {
  const std::uint32_t id = static_cast<std::uint32_t>(nodes_.size());
  nodes_.emplace_back();

  if (end - begin <= kLeafSize) {
    nodes_[id].axis = -1;
    nodes_[id].begin = begin;
    nodes_[id].end = end;
    return id;
  }

  Vec3 lo = (*cloud_)[order_[begin]];
  Vec3 hi = lo;
  for (std::uint32_t i = begin + 1; i < end; ++i) {
    const Vec3& p = (*cloud_)[order_[i]];
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const Vec3 extent = hi - lo;
  int axis = 0;
  if (extent.y() > extent[axis]) axis = 1;
  if (extent.z() > extent[axis]) axis = 2;

  const std::uint32_t mid = begin + (end - begin) / 2;
  const PointCloud& pts = *cloud_;
  // Total order (coordinate, index) keeps tree construction deterministic
  // even with duplicate coordinates.
  std::nth_element(order_.begin() + begin, order_.begin() + mid,
                   order_.begin() + end,
                   [&pts, axis](std::uint32_t a, std::uint32_t b) {
                     const double ca = pts[a][axis];
                     const double cb = pts[b][axis];
                     if (ca != cb) return ca < cb;
                     return a < b;
                   });

  const double split = pts[order_[mid]][axis];
  const std::uint32_t left = build(begin, mid);
  const std::uint32_t right = build(mid, end);
  nodes_[id].axis = axis;
  nodes_[id].split = split;
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

void SpatialIndex::knn_into(const Vec3& query, std::size_t k,
                            Neighborhood& out) const {
  if (k == 0) {
    throw std::invalid_argument("knn requires k >= 1");
  }
  if (k > size()) {
    throw std::invalid_argument("knn requires k <= cloud size (k=" +
                                std::to_string(k) + ", size=" +
                                std::to_string(size()) + ")");
  }

  KBest best(t_scratch, k);
  const PointCloud& pts = *cloud_;

  // Explicit stack; depth is bounded by the tree height.
  std::uint32_t stack[64];
  int top = 0;
  stack[top++] = root_;
  while (top > 0) {
    const Node& node = nodes_[stack[--top]];
    if (node.axis < 0) {
      for (std::uint32_t i = node.begin; i < node.end; ++i) {
        const std::uint32_t idx = order_[i];
        best.offer(squared_distance(query, pts[idx]), idx);
      }
      continue;
    }
    const double diff = query[node.axis] - node.split;
    const std::uint32_t near = diff < 0.0 ? node.left : node.right;
    const std::uint32_t far = diff < 0.0 ? node.right : node.left;
    // Visit the far side when it can still contain a candidate; <= keeps
    // exact-tie index ordering correct across the split plane.
    if (!best.full() || diff * diff <= best.worst_d2()) {
      stack[top++] = far;
    }
    stack[top++] = near;
  }

  auto& result = best.sorted();
  out.indices.resize(k);
  out.distances.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    out.indices[i] = result[i].idx;
    out.distances[i] = std::sqrt(result[i].d2);
  }
}

Neighborhood SpatialIndex::knn(const Vec3& query, std::size_t k) const {
  Neighborhood out;
  knn_into(query, k, out);
  return out;
}

double SpatialIndex::nearest_distance(const Vec3& query) const {
  thread_local Neighborhood nb;
  knn_into(query, 1, nb);
  return nb.distances[0];
}

double SpatialIndex::nearest_distance_excluding(std::size_t self) const {
  if (size() < 2) {
    throw std::invalid_argument(
        "nearest_distance_excluding requires at least 2 points");
  }
  thread_local Neighborhood nb;
  knn_into((*cloud_)[self], 2, nb);
  return nb.indices[0] == self ? nb.distances[1] : nb.distances[0];
}

std::vector<double> nearest_distances(const SpatialIndex& index,
                                      std::span<const Vec3> queries) {
  std::vector<double> out;
  out.reserve(queries.size());
  for (const Vec3& q : queries) {
    out.push_back(index.nearest_distance(q));
  }
  return out;
}

}  // namespace clgd
