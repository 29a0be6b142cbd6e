#include "tered/te_estimator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <optional>

#include "tered/knn/kdtree.hpp"
#include "tered/parallel.hpp"

namespace tered::te {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::vector<std::size_t> iota_range(std::size_t begin, std::size_t end) {
  std::vector<std::size_t> out;
  for (std::size_t d = begin; d < end; ++d) out.push_back(d);
  return out;
}

// One coordinate subspace of the cloud, searched by tree or by scanning.
class Subspace {
 public:
  Subspace(const EmbeddedCloud& cloud, std::vector<std::size_t> dims, bool use_tree)
      : dims_(std::move(dims)), m_(cloud.size()) {
    for (auto d : dims_) cols_.push_back(cloud.column(d));
    if (use_tree && !dims_.empty()) tree_ = std::make_unique<knn::KdTree>(cols_, m_);
  }

  void gather(std::size_t i, std::vector<double>& q) const {
    q.resize(cols_.size());
    for (std::size_t d = 0; d < cols_.size(); ++d) q[d] = cols_[d][i];
  }

  double kth_distance(std::span<const double> q, std::size_t k, std::size_t self) const {
    if (tree_) return tree_->kth_distance(q, k, self);
    return knn::brute_force_nearest(cols_, m_, q, k, self).back().dist;
  }

  // Points other than `self` strictly inside `radius`; `self` is at distance 0.
  std::size_t count_others(std::span<const double> q, double radius) const {
    if (!(radius > 0.0)) return 0;
    if (dims_.empty()) return m_ - 1;
    const std::size_t n = tree_ ? tree_->count_within(q, radius) : knn::brute_force_count_within(cols_, m_, q, radius);
    return n - 1;
  }

 private:
  std::vector<std::size_t> dims_;
  std::size_t m_;
  std::vector<const double*> cols_;
  std::unique_ptr<knn::KdTree> tree_;
};

}  // namespace

void check(const EmbeddingSpec& spec) {
  if (spec.max_lag < 1) throw InvalidArgumentError("max_lag must be >= 1");
  if (spec.horizon < 1) throw InvalidArgumentError("horizon must be >= 1");
  if (spec.k_neighbors < 1) throw InvalidArgumentError("k_neighbors must be >= 1");
  if (!(spec.jitter_amplitude >= 0.0) || !std::isfinite(spec.jitter_amplitude)) {
    throw InvalidArgumentError("jitter_amplitude must be >= 0");
  }
}

EmbeddedCloud EmbeddedCloud::from_blocks(const std::vector<std::vector<double>>& block1,
                                         const std::vector<std::vector<double>>& block2,
                                         const std::vector<std::vector<double>>& block3) {
  EmbeddedCloud c;
  c.d1_ = block1.size();
  c.d2_ = block2.size();
  c.d3_ = block3.size();
  if (c.d1_ == 0 || c.d2_ == 0) throw InvalidArgumentError("blocks 1 and 2 need at least one dimension");
  c.m_ = block1.front().size();
  c.data_.reserve(c.dims() * c.m_);
  for (const auto* block : {&block1, &block2, &block3}) {
    for (const auto& col : *block) {
      if (col.size() != c.m_) throw LengthMismatchError("cloud columns differ in length");
      c.data_.insert(c.data_.end(), col.begin(), col.end());
    }
  }
  return c;
}

std::vector<std::size_t> EmbeddedCloud::dims_13() const {
  auto out = iota_range(0, d1_);
  auto tail = iota_range(d1_ + d2_, dims());
  out.insert(out.end(), tail.begin(), tail.end());
  return out;
}

std::vector<std::size_t> EmbeddedCloud::dims_23() const { return iota_range(d1_, dims()); }

std::vector<std::size_t> EmbeddedCloud::dims_3() const { return iota_range(d1_ + d2_, dims()); }

EmbeddedCloud embed(std::span<const double> source, std::span<const double> target, const EmbeddingSpec& spec) {
  check(spec);
  if (source.size() != target.size()) throw LengthMismatchError("source and target lengths differ");
  const std::size_t n = source.size();
  const std::size_t lags = spec.max_lag;
  const std::size_t u = spec.horizon;
  if (n < lags + u + spec.k_neighbors + 1) {
    throw TooShortError("series of length " + std::to_string(n) + " too short for max_lag=" + std::to_string(lags) +
                        ", horizon=" + std::to_string(u) + ", k=" + std::to_string(spec.k_neighbors));
  }
  EmbeddedCloud c;
  c.m_ = n - lags - u + 1;
  c.d1_ = lags;
  c.d2_ = 1;
  c.d3_ = lags;
  c.data_.resize(c.dims() * c.m_);
  // Point p corresponds to time t = p + L.
  for (std::size_t l = 1; l <= lags; ++l) {
    double* src_col = c.data_.data() + (l - 1) * c.m_;
    double* tgt_col = c.data_.data() + (lags + l) * c.m_;
    for (std::size_t p = 0; p < c.m_; ++p) {
      src_col[p] = source[p + lags - l];
      tgt_col[p] = target[p + lags - l];
    }
  }
  double* present = c.data_.data() + lags * c.m_;
  for (std::size_t p = 0; p < c.m_; ++p) present[p] = target[p + lags - 1 + u];
  return c;
}

double digamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("digamma is only defined here for finite x > 0");
  double acc = 0.0;
  while (x < 10.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // Asymptotic expansion with Bernoulli coefficients up to x^-12.
  const double tail =
      inv2 * (1.0 / 12 - inv2 * (1.0 / 120 - inv2 * (1.0 / 252 - inv2 * (1.0 / 240 - inv2 * (1.0 / 132 - inv2 * (691.0 / 32760))))));
  return acc + std::log(x) - 0.5 * inv - tail;
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double knn_cmi_nats(const EmbeddedCloud& cloud, std::size_t k, const KnnOptions& opts) {
  const std::size_t m = cloud.size();
  if (k < 1) throw InvalidArgumentError("k must be >= 1");
  if (m < k + 1) throw TooShortError("cloud has " + std::to_string(m) + " points, need more than k=" + std::to_string(k));

  const bool use_tree =
      opts.search == NeighborSearch::tree || (opts.search == NeighborSearch::automatic && m >= kBruteForceBelow);
  std::vector<std::size_t> all(cloud.dims());
  for (std::size_t d = 0; d < all.size(); ++d) all[d] = d;
  const Subspace joint(cloud, all, use_tree);
  const Subspace s13(cloud, cloud.dims_13(), use_tree);
  const Subspace s23(cloud, cloud.dims_23(), use_tree);
  const Subspace s3(cloud, cloud.dims_3(), use_tree);

  std::vector<double> terms(m);
  std::vector<unsigned char> zero_radius(m, 0);
  const std::size_t workers = opts.workers == 0 ? default_workers() : opts.workers;
  const std::size_t chunk = (m + workers - 1) / workers;
  parallel_for(workers, workers, [&](std::size_t w) {
    std::vector<double> q, q13, q23, q3;
    const std::size_t end = std::min(m, (w + 1) * chunk);
    for (std::size_t i = w * chunk; i < end; ++i) {
      joint.gather(i, q);
      const double eps = joint.kth_distance(q, k, i);
      s13.gather(i, q13);
      s23.gather(i, q23);
      s3.gather(i, q3);
      const auto n13 = static_cast<double>(s13.count_others(q13, eps));
      const auto n23 = static_cast<double>(s23.count_others(q23, eps));
      const auto n3 = static_cast<double>(s3.count_others(q3, eps));
      terms[i] = digamma(n13 + 1.0) + digamma(n23 + 1.0) - digamma(n3 + 1.0);
      zero_radius[i] = eps == 0.0 ? 1 : 0;
    }
  });

  const auto zeros = static_cast<std::size_t>(std::count(zero_radius.begin(), zero_radius.end(), 1));
  if (static_cast<double>(zeros) > 0.01 * static_cast<double>(m)) {
    throw DegenerateGeometryError(std::to_string(zeros) + " of " + std::to_string(m) +
                                  " points have a zero k-th neighbour distance");
  }
  return digamma(static_cast<double>(k)) - pairwise_sum(terms) / static_cast<double>(m);
}

double knn_cmi(const EmbeddedCloud& cloud, std::size_t k, const KnnOptions& opts) {
  return knn_cmi_nats(cloud, k, opts) * std::numbers::log2e;
}

std::uint64_t pair_seed(std::uint64_t seed, ProcessId source, ProcessId target) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ (0x9e3779b97f4a7c15ULL * (source.index + 1)));
  h = splitmix64(h ^ (0xc2b2ae3d27d4eb4fULL * (target.index + 1)));
  return h;
}

double jitter(std::uint64_t pair_seed_value, std::size_t channel, std::size_t t, double amplitude) {
  if (amplitude == 0.0) return 0.0;
  const std::uint64_t stream = splitmix64(pair_seed_value ^ (0xd6e8feb86659fd93ULL * (channel + 1)));
  const std::uint64_t bits = splitmix64(stream + static_cast<std::uint64_t>(t));
  const double u = static_cast<double>(bits >> 11) * 0x1.0p-53;  // [0, 1)
  return amplitude * (2.0 * u - 1.0);
}

namespace {

// Channels are standardized (unit variance), so the jitter scale is the
// amplitude itself.
std::vector<double> jittered(std::vector<double> x, std::uint64_t seed, std::size_t channel, double amplitude) {
  if (amplitude == 0.0) return x;
  for (std::size_t t = 0; t < x.size(); ++t) x[t] += jitter(seed, channel, t, amplitude);
  return x;
}

double estimate_pair(const std::vector<double>& source_std, const std::vector<double>& target_std, ProcessId source,
                     ProcessId target, const EmbeddingSpec& spec, const KnnOptions& opts) {
  const std::uint64_t ps = pair_seed(spec.seed, source, target);
  const auto s = jittered(source_std, ps, source.index, spec.jitter_amplitude);
  const auto t = jittered(target_std, ps, target.index, spec.jitter_amplitude);
  return knn_cmi(embed(s, t, spec), spec.k_neighbors, opts);
}

}  // namespace

double transfer_entropy(const TimeSeriesPanel& panel, ProcessId source, ProcessId target, const EmbeddingSpec& spec,
                        const KnnOptions& opts) {
  check(spec);
  if (source == target) throw SameProcessError("transfer entropy needs distinct source and target");
  const auto s = standardize_channel(panel.channel(source), panel.label(source));
  const auto t = standardize_channel(panel.channel(target), panel.label(target));
  return estimate_pair(s, t, source, target, spec, opts);
}

TEMatrix te_matrix(const TimeSeriesPanel& panel, const std::vector<ProcessId>& sources,
                   const std::vector<ProcessId>& targets, const EmbeddingSpec& spec, std::size_t workers) {
  check(spec);
  TEMatrix out(sources, targets);

  // Standardization failures surface per pair so the error names the pair.
  struct Standardized {
    std::vector<double> values;
    std::exception_ptr error;
  };
  std::map<std::size_t, Standardized> standardized;
  for (const auto* ids : {&sources, &targets}) {
    for (auto id : *ids) {
      if (standardized.contains(id.index)) continue;
      Standardized s;
      try {
        s.values = standardize_channel(panel.channel(id), panel.label(id));
      } catch (...) {
        s.error = std::current_exception();
      }
      standardized.emplace(id.index, std::move(s));
    }
  }
  auto channel = [&](ProcessId id) -> const std::vector<double>& {
    const auto& s = standardized.at(id.index);
    if (s.error) std::rethrow_exception(s.error);
    return s.values;
  };

  struct Pair {
    std::size_t r, c;
  };
  std::vector<Pair> pairs;
  for (std::size_t r = 0; r < sources.size(); ++r) {
    for (std::size_t c = 0; c < targets.size(); ++c) {
      if (sources[r] != targets[c]) pairs.push_back({r, c});
    }
  }

  std::vector<double> raw(pairs.size());
  parallel_for(pairs.size(), workers, [&](std::size_t p) {
    const ProcessId s = sources[pairs[p].r];
    const ProcessId t = targets[pairs[p].c];
    try {
      raw[p] = estimate_pair(channel(s), channel(t), s, t, spec, KnnOptions{});
    } catch (const std::exception& e) {
      std::throw_with_nested(PairEstimationError(
          s, t, "transfer entropy " + panel.label(s) + " -> " + panel.label(t) + " failed: " + e.what()));
    }
  });
  for (std::size_t p = 0; p < pairs.size(); ++p) out.set_raw(pairs[p].r, pairs[p].c, raw[p]);
  return out;
}

}  // namespace tered::te
