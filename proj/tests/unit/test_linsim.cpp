#include <doctest.h>

#include <cmath>
#include <numeric>

#include "tered/errors.hpp"
#include "tered/linsim.hpp"

using namespace tered;
using namespace tered::linsim;

namespace {

std::vector<double> to_vec(std::span<const double> s) { return {s.begin(), s.end()}; }

double mean(const std::vector<double>& x) { return std::accumulate(x.begin(), x.end(), 0.0) / x.size(); }

double cov(const std::vector<double>& x, std::size_t lag_x, const std::vector<double>& y) {
  // Cov(y_k, x_{k - lag_x}).
  const double mx = mean(x), my = mean(y);
  double s = 0.0;
  for (std::size_t k = lag_x; k < y.size(); ++k) s += (y[k] - my) * (x[k - lag_x] - mx);
  return s / (y.size() - lag_x);
}

double corr(const std::vector<double>& x, const std::vector<double>& y) {
  return cov(x, 0, y) / std::sqrt(cov(x, 0, x) * cov(y, 0, y));
}

LinSysParams benchmark_params(std::uint64_t seed) {
  LinSysParams p{1.0 / 3, 0.2, 0.5, 1.0 / 3, 1.0 / 3};
  p.length = 5000;
  p.seed = seed;
  return p;
}

}  // namespace

TEST_CASE("stationary AR(1) variance") {
  CHECK(stationary_variance_ar1(0.0, 1.0) == 1.0);
  CHECK(std::abs(stationary_variance_ar1(1.0 / 3, 1.0) - 1.125) < 1e-15);
  CHECK(stationary_variance_ar1(0.0, 4.0) == 4.0);
  CHECK_THROWS_AS(stationary_variance_ar1(1.0, 1.0), UnstableError);
  CHECK_THROWS_AS(stationary_variance_ar1(-1.2, 1.0), UnstableError);
}

TEST_CASE("benchmark panel shape, labels and determinism") {
  const auto a = simulate_benchmark(benchmark_params(7));
  const auto b = simulate_benchmark(benchmark_params(7));
  const auto c = simulate_benchmark(benchmark_params(8));
  CHECK(a.channel_count() == 5);
  CHECK(a.sample_count() == 5000);
  CHECK(a.labels() == std::vector<std::string>{"psi", "phi", "X", "Y", "Z"});
  CHECK(a == b);
  CHECK_FALSE(a == c);
}

TEST_CASE("benchmark rejects unstable coefficients") {
  LinSysParams p;
  p.a = 1.0;
  CHECK_THROWS_AS(simulate_benchmark(p), UnstableError);
  p.a = 0.0;
  p.b = -1.5;
  CHECK_THROWS_AS(simulate_benchmark(p), UnstableError);
}

TEST_CASE("decoupled benchmark gives independent white noise") {
  LinSysParams p;
  p.length = 20000;
  p.seed = 3;
  const auto panel = simulate_benchmark(p);
  const double bound = 3.0 / std::sqrt(20000.0);
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = i + 1; j < 5; ++j) {
      CHECK(std::abs(corr(to_vec(panel.channel(ProcessId{i})), to_vec(panel.channel(ProcessId{j})))) < bound);
    }
  }
}

TEST_CASE("phi has the stationary AR(1) variance") {
  LinSysParams p;
  p.a = 1.0 / 3;
  p.length = 50000;
  p.seed = 1;
  const auto phi = to_vec(simulate_benchmark(p).channel(ProcessId{kPhi}));
  CHECK(std::abs(cov(phi, 0, phi) / 1.125 - 1.0) < 0.03);
}

TEST_CASE("a=b=0: variance of Z matches the closed-form expansion") {
  LinSysParams p{0.0, 0.0, 0.7, 0.6, 0.9};
  p.noise_std[kPhi] = std::sqrt(2.0);
  p.length = 100000;
  p.seed = 11;
  const auto z = to_vec(simulate_benchmark(p).channel(ProcessId{kZ}));
  const double c = 0.7, d = 0.6, e = 0.9, s2 = 2.0;
  const double expect = 4 * d * d * c * c * s2 + 2 * d * d + e * e + 1;
  CHECK(std::abs(cov(z, 0, z) / expect - 1.0) < 0.05);
}

TEST_CASE("c=0 leaves X independent of phi") {
  LinSysParams p{0.3, 0.2, 0.0, 0.5, 0.5};
  p.length = 20000;
  p.seed = 4;
  const auto panel = simulate_benchmark(p);
  CHECK(std::abs(corr(to_vec(panel.channel(ProcessId{kPhi})), to_vec(panel.channel(ProcessId{kX})))) <
        3.0 / std::sqrt(20000.0));
}

TEST_CASE("lag network: empty couplings and a single lagged coupling") {
  LagCouplingSpec s;
  s.n_processes = 2;
  s.noise_std = {1.0, 1.0};
  s.length = 50000;
  s.seed = 9;
  const auto white = simulate_lag_network(s);
  CHECK(white.labels() == std::vector<std::string>{"p0", "p1"});
  CHECK(std::abs(corr(to_vec(white.channel(ProcessId{0})), to_vec(white.channel(ProcessId{1})))) <
        3.0 / std::sqrt(50000.0));

  s.couplings = {{0, 1, 2, 0.8}};
  const auto net = simulate_lag_network(s);
  const auto x = to_vec(net.channel(ProcessId{0}));
  const auto z = to_vec(net.channel(ProcessId{1}));
  CHECK(std::abs(cov(x, 2, z) - 0.8 * cov(x, 0, x)) < 0.03);
  CHECK(std::abs(cov(x, 1, z)) < 0.03);
}

TEST_CASE("lag network rejects unstable and malformed specs") {
  LagCouplingSpec s;
  s.n_processes = 1;
  s.noise_std = {1.0};
  s.couplings = {{0, 0, 1, 1.01}};
  CHECK_THROWS_AS(simulate_lag_network(s), UnstableError);
  s.couplings = {{0, 0, 0, 0.5}};
  CHECK_THROWS_AS(simulate_lag_network(s), InvalidArgumentError);
  s.couplings = {{0, 3, 1, 0.5}};
  CHECK_THROWS_AS(simulate_lag_network(s), InvalidArgumentError);
  CHECK(spectral_radius(to_lag_spec(benchmark_params(0))) < 1.0);
}

TEST_CASE("benchmark expressed as a lag network reproduces the same samples") {
  auto p = benchmark_params(21);
  p.length = 3000;
  const auto direct = simulate_benchmark(p);
  const auto via_spec = simulate_lag_network(to_lag_spec(p));
  CHECK(direct == via_spec);
}

TEST_CASE("adding a process leaves the other sample paths unchanged") {
  LagCouplingSpec s;
  s.n_processes = 2;
  s.noise_std = {1.0, 1.0};
  s.couplings = {{0, 1, 1, 0.5}};
  s.length = 500;
  s.seed = 5;
  const auto small = simulate_lag_network(s);
  s.n_processes = 3;
  s.noise_std.push_back(2.0);
  const auto big = simulate_lag_network(s);
  CHECK(to_vec(small.channel(ProcessId{0})) == to_vec(big.channel(ProcessId{0})));
  CHECK(to_vec(small.channel(ProcessId{1})) == to_vec(big.channel(ProcessId{1})));
}
