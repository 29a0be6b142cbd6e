#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <vector>

namespace tered::knn {

/// A neighbour candidate. Neighbours are ordered by (distance, index) so the
/// k-nearest set is unique even under distance ties.
struct Neighbor {
  double dist = 0.0;
  std::size_t index = 0;

  friend auto operator<=>(const Neighbor&, const Neighbor&) = default;
};

/// Max-norm k-d tree over n points given as coordinate columns.
///
/// The tree keeps its own copy of the coordinates, reordered so that every
/// node covers a contiguous range; leaves are scanned with the SIMD kernels.
class KdTree {
 public:
  KdTree(std::span<const double* const> columns, std::size_t n, std::size_t leaf_size = 16);

  std::size_t size() const noexcept { return n_; }
  std::size_t dims() const noexcept { return dims_; }

  /// The k nearest points to `query`, skipping the point with original index
  /// `exclude` (pass size() to skip nothing). Sorted ascending.
  std::vector<Neighbor> nearest(std::span<const double> query, std::size_t k, std::size_t exclude) const;

  /// Distance to the k-th nearest point (same exclusion rule as nearest()).
  double kth_distance(std::span<const double> query, std::size_t k, std::size_t exclude) const;

  /// Number of points at max-norm distance strictly below `radius`.
  std::size_t count_within(std::span<const double> query, double radius) const;

 private:
  struct Node {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::size_t left = 0;  // child node ids; 0 marks a leaf (node 0 is the root)
    std::size_t right = 0;
  };

  std::size_t build(std::size_t begin, std::size_t end);
  double box_min_dist(std::size_t node, std::span<const double> query) const;
  double box_max_dist(std::size_t node, std::span<const double> query) const;
  template <class Heap>
  void search(std::size_t node, std::span<const double> query, std::size_t k, std::size_t exclude, Heap& heap,
              std::vector<double>& scratch, std::vector<const double*>& cols) const;
  std::size_t count(std::size_t node, std::span<const double> query, double radius,
                    std::vector<const double*>& cols) const;
  void leaf_columns(std::size_t node, std::vector<const double*>& cols) const;

  std::size_t n_ = 0;
  std::size_t dims_ = 0;
  std::size_t leaf_size_ = 16;
  std::vector<std::size_t> perm_;  // tree position -> original index
  std::vector<double> data_;       // dimension-major, tree order
  std::vector<Node> nodes_;
  std::vector<double> lo_;  // per node bounding box, nodes_.size() * dims_
  std::vector<double> hi_;
};

/// Reference implementations scanning every point.
std::vector<Neighbor> brute_force_nearest(std::span<const double* const> columns, std::size_t n,
                                          std::span<const double> query, std::size_t k, std::size_t exclude);
std::size_t brute_force_count_within(std::span<const double* const> columns, std::size_t n,
                                     std::span<const double> query, double radius);

}  // namespace tered::knn
