#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <span>
#include <string>
#include <vector>

#include "tered/errors.hpp"
#include "tered/panel.hpp"

namespace tered::te {

/// History/neighbour settings of the estimator. Defaults follow the common
/// EEG setting: 5 lags, 10 neighbours.
struct EmbeddingSpec {
  std::size_t max_lag = 5;
  std::size_t horizon = 1;
  std::size_t k_neighbors = 10;
  double jitter_amplitude = 1e-8;
  std::uint64_t seed = 0;
};

void check(const EmbeddingSpec& spec);

/// M joint points split into three coordinate blocks. For transfer entropy
/// the blocks are source past (L), target present (1), target past (L);
/// knn_cmi() estimates I(block1; block2 | block3).
///
/// Coordinates are stored dimension-major (column d is contiguous).
class EmbeddedCloud {
 public:
  EmbeddedCloud() = default;

  /// Builds a cloud from per-block coordinate columns (each of length M).
  static EmbeddedCloud from_blocks(const std::vector<std::vector<double>>& block1,
                                   const std::vector<std::vector<double>>& block2,
                                   const std::vector<std::vector<double>>& block3);

  std::size_t size() const noexcept { return m_; }
  std::size_t dims() const noexcept { return d1_ + d2_ + d3_; }
  std::size_t block1_dims() const noexcept { return d1_; }
  std::size_t block2_dims() const noexcept { return d2_; }
  std::size_t block3_dims() const noexcept { return d3_; }

  const double* column(std::size_t d) const { return data_.data() + d * m_; }
  double at(std::size_t point, std::size_t dim) const { return data_[dim * m_ + point]; }

  /// Dimension indices of block1 + block3, block2 + block3 and block3.
  std::vector<std::size_t> dims_13() const;
  std::vector<std::size_t> dims_23() const;
  std::vector<std::size_t> dims_3() const;

 private:
  friend EmbeddedCloud embed(std::span<const double>, std::span<const double>, const EmbeddingSpec&);
  std::vector<double> data_;
  std::size_t m_ = 0;
  std::size_t d1_ = 0;
  std::size_t d2_ = 0;
  std::size_t d3_ = 0;
};

/// Delay embedding: point for time t holds
/// [source(t-1..t-L), target(t-1+u), target(t-1..t-L)], M = N - L - u + 1.
/// Throws TooShortError unless N >= L + u + k + 1.
EmbeddedCloud embed(std::span<const double> source, std::span<const double> target, const EmbeddingSpec& spec);

/// Digamma function; absolute error below 1e-10 on [1e-3, 1e6]. Throws
/// DomainError for x <= 0.
double digamma(double x);

enum class NeighborSearch { automatic, tree, brute_force };

/// Point count below which `automatic` scans instead of building trees.
inline constexpr std::size_t kBruteForceBelow = 512;

struct KnnOptions {
  NeighborSearch search = NeighborSearch::automatic;
  std::size_t workers = 1;  // 0 = hardware concurrency
};

/// Nearest-neighbour conditional MI in nats:
///   psi(k) - < psi(n_13 + 1) + psi(n_23 + 1) - psi(n_3 + 1) >
/// with eps_i the max-norm distance to the k-th neighbour of point i in the
/// joint space and n_* the number of other points strictly closer than eps_i
/// in each subspace. Throws DegenerateGeometryError when more than 1% of the
/// points have eps_i == 0.
double knn_cmi_nats(const EmbeddedCloud& cloud, std::size_t k, const KnnOptions& opts = {});

/// knn_cmi_nats() converted to bits.
double knn_cmi(const EmbeddedCloud& cloud, std::size_t k, const KnnOptions& opts = {});

/// Order-fixed pairwise summation; the result depends only on the values.
double pairwise_sum(std::span<const double> values);

/// Deterministic tie-breaking noise for sample t of `channel`, uniform in
/// [-amplitude, amplitude), keyed by the pair seed.
double jitter(std::uint64_t pair_seed, std::size_t channel, std::size_t t, double amplitude);

/// Seed of the (source, target) pair; independent of evaluation order.
std::uint64_t pair_seed(std::uint64_t seed, ProcessId source, ProcessId target);

/// Standardize, jitter, embed and estimate. Returns the raw estimate in bits,
/// which may be slightly negative.
double transfer_entropy(const TimeSeriesPanel& panel, ProcessId source, ProcessId target, const EmbeddingSpec& spec,
                        const KnnOptions& opts = {});

/// Raised by te_matrix() when one pair fails; the original error is nested.
class PairEstimationError : public Error {
 public:
  PairEstimationError(ProcessId source, ProcessId target, const std::string& what)
      : Error(what), source_(source), target_(target) {}
  ProcessId source() const noexcept { return source_; }
  ProcessId target() const noexcept { return target_; }

 private:
  ProcessId source_;
  ProcessId target_;
};

/// Every ordered (source, target) pair with source != target, spread over
/// `workers` threads. Entries are identical to transfer_entropy() on the same
/// pair regardless of list order or worker count.
TEMatrix te_matrix(const TimeSeriesPanel& panel, const std::vector<ProcessId>& sources,
                   const std::vector<ProcessId>& targets, const EmbeddingSpec& spec, std::size_t workers = 1);

}  // namespace tered::te
