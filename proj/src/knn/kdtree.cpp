#include "tered/knn/kdtree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

#include "tered/errors.hpp"
#include "tered/simd/kernels.hpp"

namespace tered::knn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using MaxHeap = std::priority_queue<Neighbor>;

void offer(MaxHeap& heap, std::size_t k, Neighbor nb) {
  if (heap.size() < k) {
    heap.push(nb);
  } else if (nb < heap.top()) {
    heap.pop();
    heap.push(nb);
  }
}

std::vector<Neighbor> drain(MaxHeap& heap) {
  std::vector<Neighbor> out(heap.size());
  for (std::size_t i = out.size(); i-- > 0;) {
    out[i] = heap.top();
    heap.pop();
  }
  return out;
}

}  // namespace

KdTree::KdTree(std::span<const double* const> columns, std::size_t n, std::size_t leaf_size)
    : n_(n), dims_(columns.size()), leaf_size_(std::max<std::size_t>(leaf_size, 1)) {
  if (dims_ == 0) throw InvalidArgumentError("k-d tree needs at least one dimension");
  perm_.resize(n_);
  std::iota(perm_.begin(), perm_.end(), std::size_t{0});
  // Build on the original columns via perm_, then gather.
  data_.assign(dims_ * n_, 0.0);
  for (std::size_t d = 0; d < dims_; ++d) std::copy(columns[d], columns[d] + n_, data_.begin() + d * n_);

  nodes_.reserve(2 * (n_ / leaf_size_ + 1));
  if (n_ > 0) build(0, n_);

  std::vector<double> ordered(dims_ * n_);
  for (std::size_t d = 0; d < dims_; ++d) {
    for (std::size_t pos = 0; pos < n_; ++pos) ordered[d * n_ + pos] = data_[d * n_ + perm_[pos]];
  }
  data_ = std::move(ordered);
}

std::size_t KdTree::build(std::size_t begin, std::size_t end) {
  const std::size_t id = nodes_.size();
  nodes_.push_back(Node{begin, end, 0, 0});
  lo_.resize(nodes_.size() * dims_);
  hi_.resize(nodes_.size() * dims_);

  std::size_t split_dim = 0;
  double best_spread = -1.0;
  for (std::size_t d = 0; d < dims_; ++d) {
    double lo = kInf, hi = -kInf;
    const double* col = data_.data() + d * n_;
    for (std::size_t p = begin; p < end; ++p) {
      const double v = col[perm_[p]];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    lo_[id * dims_ + d] = lo;
    hi_[id * dims_ + d] = hi;
    if (hi - lo > best_spread) {
      best_spread = hi - lo;
      split_dim = d;
    }
  }
  if (end - begin <= leaf_size_ || best_spread <= 0.0) return id;

  const double* col = data_.data() + split_dim * n_;
  const std::size_t mid = begin + (end - begin) / 2;
  std::nth_element(perm_.begin() + static_cast<std::ptrdiff_t>(begin), perm_.begin() + static_cast<std::ptrdiff_t>(mid),
                   perm_.begin() + static_cast<std::ptrdiff_t>(end), [col](std::size_t a, std::size_t b) {
                     return col[a] < col[b] || (col[a] == col[b] && a < b);
                   });
  const std::size_t left = build(begin, mid);
  const std::size_t right = build(mid, end);
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

double KdTree::box_min_dist(std::size_t node, std::span<const double> query) const {
  const double* lo = lo_.data() + node * dims_;
  const double* hi = hi_.data() + node * dims_;
  double acc = 0.0;
  for (std::size_t d = 0; d < dims_; ++d) {
    const double gap = std::max({lo[d] - query[d], query[d] - hi[d], 0.0});
    acc = std::max(acc, gap);
  }
  return acc;
}

double KdTree::box_max_dist(std::size_t node, std::span<const double> query) const {
  const double* lo = lo_.data() + node * dims_;
  const double* hi = hi_.data() + node * dims_;
  double acc = 0.0;
  for (std::size_t d = 0; d < dims_; ++d) {
    acc = std::max({acc, std::abs(query[d] - lo[d]), std::abs(hi[d] - query[d])});
  }
  return acc;
}

void KdTree::leaf_columns(std::size_t node, std::vector<const double*>& cols) const {
  cols.resize(dims_);
  for (std::size_t d = 0; d < dims_; ++d) cols[d] = data_.data() + d * n_ + nodes_[node].begin;
}

template <class Heap>
void KdTree::search(std::size_t node, std::span<const double> query, std::size_t k, std::size_t exclude, Heap& heap,
                    std::vector<double>& scratch, std::vector<const double*>& cols) const {
  const Node& nd = nodes_[node];
  if (nd.left == 0) {
    const std::size_t count = nd.end - nd.begin;
    leaf_columns(node, cols);
    scratch.resize(count);
    simd::chebyshev_distances(cols, query, count, scratch.data());
    for (std::size_t j = 0; j < count; ++j) {
      const std::size_t idx = perm_[nd.begin + j];
      if (idx == exclude) continue;
      offer(heap, k, Neighbor{scratch[j], idx});
    }
    return;
  }
  const double dl = box_min_dist(nd.left, query);
  const double dr = box_min_dist(nd.right, query);
  const std::size_t first = dl <= dr ? nd.left : nd.right;
  const std::size_t second = dl <= dr ? nd.right : nd.left;
  const double d_first = std::min(dl, dr);
  const double d_second = std::max(dl, dr);
  // A box at exactly the current worst distance may still hold a point that
  // wins the index tie-break, so only strictly farther boxes are pruned.
  if (heap.size() < k || d_first <= heap.top().dist) search(first, query, k, exclude, heap, scratch, cols);
  if (heap.size() < k || d_second <= heap.top().dist) search(second, query, k, exclude, heap, scratch, cols);
}

std::vector<Neighbor> KdTree::nearest(std::span<const double> query, std::size_t k, std::size_t exclude) const {
  if (query.size() != dims_) throw InvalidArgumentError("query dimension mismatch");
  MaxHeap heap;
  if (k == 0 || n_ == 0) return {};
  std::vector<double> scratch;
  std::vector<const double*> cols;
  search(0, query, k, exclude, heap, scratch, cols);
  return drain(heap);
}

double KdTree::kth_distance(std::span<const double> query, std::size_t k, std::size_t exclude) const {
  const auto nb = nearest(query, k, exclude);
  if (nb.size() < k) throw InvalidArgumentError("fewer than k candidate neighbours");
  return nb.back().dist;
}

std::size_t KdTree::count(std::size_t node, std::span<const double> query, double radius,
                          std::vector<const double*>& cols) const {
  if (box_min_dist(node, query) >= radius) return 0;
  const Node& nd = nodes_[node];
  if (box_max_dist(node, query) < radius) return nd.end - nd.begin;
  if (nd.left == 0) {
    leaf_columns(node, cols);
    return simd::count_within(cols, query, nd.end - nd.begin, radius);
  }
  return count(nd.left, query, radius, cols) + count(nd.right, query, radius, cols);
}

std::size_t KdTree::count_within(std::span<const double> query, double radius) const {
  if (query.size() != dims_) throw InvalidArgumentError("query dimension mismatch");
  if (n_ == 0) return 0;
  std::vector<const double*> cols;
  return count(0, query, radius, cols);
}

std::vector<Neighbor> brute_force_nearest(std::span<const double* const> columns, std::size_t n,
                                          std::span<const double> query, std::size_t k, std::size_t exclude) {
  if (query.size() != columns.size()) throw InvalidArgumentError("query dimension mismatch");
  std::vector<double> dist(n);
  simd::chebyshev_distances(columns, query, n, dist.data());
  MaxHeap heap;
  if (k == 0) return {};
  for (std::size_t i = 0; i < n; ++i) {
    if (i == exclude) continue;
    offer(heap, k, Neighbor{dist[i], i});
  }
  return drain(heap);
}

std::size_t brute_force_count_within(std::span<const double* const> columns, std::size_t n,
                                     std::span<const double> query, double radius) {
  if (query.size() != columns.size()) throw InvalidArgumentError("query dimension mismatch");
  return simd::count_within(columns, query, n, radius);
}

}  // namespace tered::knn
