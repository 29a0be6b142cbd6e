#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tered/panel.hpp"

namespace tered::linsim {

/// Benchmark network: two AR(1) drivers psi and phi, two relays X and Y fed by
/// phi at lag 2, and a target Z fed by X, Y and psi at lag 2.
struct LinSysParams {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
  double e = 0.0;
  /// Noise standard deviations in channel order psi, phi, X, Y, Z.
  std::array<double, 5> noise_std{1.0, 1.0, 1.0, 1.0, 1.0};
  std::size_t length = 5000;
  std::size_t burn_in = 1000;
  std::uint64_t seed = 0;
};

/// Channel labels of simulate_benchmark() output.
inline const std::array<std::string, 5> kBenchmarkLabels{"psi", "phi", "X", "Y", "Z"};

enum BenchmarkChannel : std::size_t { kPsi = 0, kPhi = 1, kX = 2, kY = 3, kZ = 4 };

struct Coupling {
  std::size_t from = 0;
  std::size_t to = 0;
  std::size_t lag = 1;
  double gain = 0.0;
};

/// Generic first-order-noise linear network x_to[k] += gain * x_from[k - lag].
struct LagCouplingSpec {
  std::size_t n_processes = 0;
  std::vector<Coupling> couplings;
  std::vector<double> noise_std;  // one per process
  std::vector<std::string> labels;  // optional; defaults to p0, p1, ...
  std::size_t length = 1000;
  std::size_t burn_in = 1000;
  std::uint64_t seed = 0;

  std::size_t max_lag() const;
};

/// Expresses the benchmark system as a lag network (self-couplings included).
LagCouplingSpec to_lag_spec(const LinSysParams& p);

/// Companion (state-transition) matrix of the stacked state
/// [x_k, x_{k-1}, ..., x_{k-p+1}], p = max_lag().
Eigen::MatrixXd companion_matrix(const LagCouplingSpec& s);

/// Spectral radius of the companion matrix of a lag network.
double spectral_radius(const LagCouplingSpec& s);

/// Throws UnstableError/InvalidArgumentError on invariant violations.
void check(const LinSysParams& p);
void check(const LagCouplingSpec& s);

/// Runs the benchmark recursions from zero initial state, discards `burn_in`
/// samples and returns a panel labeled psi, phi, X, Y, Z.
TimeSeriesPanel simulate_benchmark(const LinSysParams& p);

TimeSeriesPanel simulate_lag_network(const LagCouplingSpec& s);

/// noise_var / (1 - a^2).
double stationary_variance_ar1(double a, double noise_var);

/// Seed of the noise stream of process `index`; streams are independent so
/// adding a process never perturbs the others' paths.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace tered::linsim
