#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tered::discrete {

using Symbol = int;
using Outcome = std::vector<Symbol>;

/// Probability mass function over tuples of symbols.
///
/// All outcomes have the same arity; each tuple position is one random
/// variable. Construction validates the pmf (nonnegative, sums to 1 within
/// 1e-12, unique outcomes) and throws InvalidPmfError otherwise.
class FinitePmf {
 public:
  FinitePmf(std::vector<Outcome> outcomes, std::vector<double> probs);

  /// Single-variable pmf over symbols 0..probs.size()-1.
  static FinitePmf over_symbols(std::vector<double> probs);
  static FinitePmf uniform(std::size_t alphabet);

  std::size_t arity() const noexcept { return arity_; }
  std::size_t size() const noexcept { return probs_.size(); }
  const std::vector<Outcome>& outcomes() const noexcept { return outcomes_; }
  const std::vector<double>& probs() const noexcept { return probs_; }

  /// Pmf of the sub-tuple at `components` (in the given order).
  FinitePmf marginal(std::span<const std::size_t> components) const;

 private:
  FinitePmf() = default;
  std::vector<Outcome> outcomes_;
  std::vector<double> probs_;
  std::size_t arity_ = 0;
};

/// Independent product p(a) p(b) ...; the result's tuple concatenates the inputs'.
FinitePmf product(std::span<const FinitePmf> factors);

/// H(p) in bits (0 log 0 = 0).
double entropy(const FinitePmf& p);

/// I(X;Y) in bits for a pmf of arity 2.
double mutual_information(const FinitePmf& joint);

/// I(X;Y) where X and Y are the sub-tuples at `xs` and `ys`. The two groups may
/// overlap (composite variables sharing components).
double mutual_information(const FinitePmf& joint, std::span<const std::size_t> xs,
                          std::span<const std::size_t> ys);

/// Three independent variables A, B, C and the composites X=(A,B), Y=(A,C),
/// Z=(B,C). Minimal sufficient statistics are T_XY=A, T_XZ=B, T_YZ=C.
struct TripleExample {
  FinitePmf pmf_a;
  FinitePmf pmf_b;
  FinitePmf pmf_c;

  /// Joint pmf of (A, B, C).
  FinitePmf joint() const;
};

/// min(I(X;Y), I(X;Z), I(Y;Z)); equals min(H(A), H(B), H(C)).
double pairwise_min_mi(const TripleExample& t);

/// min(I(T_XY;T_XZ), I(T_XZ;T_YZ), I(T_XY;T_YZ)) with the analytic statistics.
double mss_redundancy(const TripleExample& t);

/// Specific information I(X; Z=z) = sum_x p(x|z) log2(p(x|z) / p(x)).
///
/// Note: the reference formula this measure is taken from prints p(z) in the
/// denominator; that form is not a specific information, p(x) is used here.
double specific_information(const FinitePmf& xz, Symbol z);

/// Average-minimum redundancy sum_z p(z) min(I(X;Z=z), I(Y;Z=z)) over a joint
/// pmf of arity 3 ordered (x, y, z).
double i_min_discrete(const FinitePmf& joint);

}  // namespace tered::discrete
