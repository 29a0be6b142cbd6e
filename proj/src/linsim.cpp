#include "tered/linsim.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "tered/errors.hpp"

namespace tered::linsim {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::vector<double> noise_stream(std::uint64_t seed, std::size_t index, double sd, std::size_t n) {
  std::mt19937_64 gen(stream_seed(seed, index));
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> w(n);
  for (auto& v : w) v = sd * normal(gen);
  return w;
}

}  // namespace

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ (0xd1b54a32d192ed03ULL * (index + 1)));
}

std::size_t LagCouplingSpec::max_lag() const {
  std::size_t p = 1;
  for (const auto& c : couplings) p = std::max(p, c.lag);
  return p;
}

LagCouplingSpec to_lag_spec(const LinSysParams& p) {
  LagCouplingSpec s;
  s.n_processes = 5;
  s.labels.assign(kBenchmarkLabels.begin(), kBenchmarkLabels.end());
  s.noise_std.assign(p.noise_std.begin(), p.noise_std.end());
  s.length = p.length;
  s.burn_in = p.burn_in;
  s.seed = p.seed;
  // Order matches the summation order of simulate_benchmark().
  s.couplings = {
      {kPsi, kPsi, 1, p.a}, {kPhi, kPhi, 1, p.a}, {kX, kX, 1, p.b}, {kPhi, kX, 2, p.c},
      {kY, kY, 1, p.b},     {kPhi, kY, 2, p.c},   {kZ, kZ, 1, p.b}, {kX, kZ, 2, p.d},
      {kY, kZ, 2, p.d},     {kPsi, kZ, 2, p.e},
  };
  return s;
}

Eigen::MatrixXd companion_matrix(const LagCouplingSpec& s) {
  const auto n = static_cast<Eigen::Index>(s.n_processes);
  const auto p = static_cast<Eigen::Index>(s.max_lag());
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(n * p, n * p);
  for (const auto& c : s.couplings) {
    f(static_cast<Eigen::Index>(c.to), static_cast<Eigen::Index>((c.lag - 1) * s.n_processes + c.from)) += c.gain;
  }
  if (p > 1) f.block(n, 0, n * (p - 1), n * (p - 1)).setIdentity();
  return f;
}

double spectral_radius(const LagCouplingSpec& s) {
  const Eigen::MatrixXd f = companion_matrix(s);
  if (f.size() == 0) return 0.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(f, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

void check(const LinSysParams& p) {
  if (!(std::abs(p.a) < 1.0) || !(std::abs(p.b) < 1.0)) {
    throw UnstableError("benchmark system requires |a| < 1 and |b| < 1");
  }
  for (double sd : p.noise_std) {
    if (!(sd > 0.0) || !std::isfinite(sd)) throw InvalidArgumentError("noise standard deviations must be > 0");
  }
  for (double g : {p.c, p.d, p.e}) {
    if (!std::isfinite(g)) throw InvalidArgumentError("coupling gains must be finite");
  }
  if (p.length < 1) throw InvalidArgumentError("length must be >= 1");
}

void check(const LagCouplingSpec& s) {
  if (s.n_processes == 0) throw InvalidArgumentError("lag network needs at least one process");
  if (s.noise_std.size() != s.n_processes) throw InvalidArgumentError("need one noise_std per process");
  for (double sd : s.noise_std) {
    if (!(sd > 0.0) || !std::isfinite(sd)) throw InvalidArgumentError("noise standard deviations must be > 0");
  }
  if (!s.labels.empty() && s.labels.size() != s.n_processes) {
    throw InvalidArgumentError("need one label per process");
  }
  for (const auto& c : s.couplings) {
    if (c.from >= s.n_processes || c.to >= s.n_processes) throw InvalidArgumentError("coupling index out of range");
    if (c.lag < 1) throw InvalidArgumentError("coupling lags must be >= 1");
    if (!std::isfinite(c.gain)) throw InvalidArgumentError("coupling gains must be finite");
  }
  if (s.length < 1) throw InvalidArgumentError("length must be >= 1");
  const double rho = spectral_radius(s);
  if (!(rho < 1.0)) {
    throw UnstableError("lag network is not stable (spectral radius " + std::to_string(rho) + ")");
  }
}

TimeSeriesPanel simulate_benchmark(const LinSysParams& p) {
  check(p);
  const std::size_t total = p.length + p.burn_in;
  std::array<std::vector<double>, 5> w;
  std::array<std::vector<double>, 5> x;
  for (std::size_t i = 0; i < 5; ++i) {
    w[i] = noise_stream(p.seed, i, p.noise_std[i], total);
    x[i].assign(total, 0.0);
  }
  auto& psi = x[kPsi];
  auto& phi = x[kPhi];
  auto& xs = x[kX];
  auto& ys = x[kY];
  auto& zs = x[kZ];
  for (std::size_t k = 2; k < total; ++k) {
    psi[k] = p.a * psi[k - 1] + w[kPsi][k];
    phi[k] = p.a * phi[k - 1] + w[kPhi][k];
    xs[k] = p.b * xs[k - 1] + p.c * phi[k - 2] + w[kX][k];
    ys[k] = p.b * ys[k - 1] + p.c * phi[k - 2] + w[kY][k];
    zs[k] = p.b * zs[k - 1] + p.d * xs[k - 2] + p.d * ys[k - 2] + p.e * psi[k - 2] + w[kZ][k];
  }
  std::vector<std::vector<double>> channels;
  for (auto& ch : x) channels.emplace_back(ch.begin() + static_cast<std::ptrdiff_t>(p.burn_in), ch.end());
  return TimeSeriesPanel({kBenchmarkLabels.begin(), kBenchmarkLabels.end()}, channels);
}

TimeSeriesPanel simulate_lag_network(const LagCouplingSpec& s) {
  check(s);
  const std::size_t total = s.length + s.burn_in;
  const std::size_t start = s.max_lag();
  std::vector<std::vector<double>> w(s.n_processes);
  std::vector<std::vector<double>> x(s.n_processes, std::vector<double>(total, 0.0));
  for (std::size_t i = 0; i < s.n_processes; ++i) w[i] = noise_stream(s.seed, i, s.noise_std[i], total);

  // Couplings grouped per target, keeping their relative order.
  std::vector<std::vector<Coupling>> inbound(s.n_processes);
  for (const auto& c : s.couplings) inbound[c.to].push_back(c);

  for (std::size_t k = start; k < total; ++k) {
    for (std::size_t i = 0; i < s.n_processes; ++i) {
      double acc = 0.0;
      bool first = true;
      for (const auto& c : inbound[i]) {
        const double term = c.gain * x[c.from][k - c.lag];
        acc = first ? term : acc + term;
        first = false;
      }
      x[i][k] = acc + w[i][k];
    }
  }

  std::vector<std::string> labels = s.labels;
  if (labels.empty()) {
    for (std::size_t i = 0; i < s.n_processes; ++i) labels.push_back("p" + std::to_string(i));
  }
  std::vector<std::vector<double>> channels;
  for (auto& ch : x) channels.emplace_back(ch.begin() + static_cast<std::ptrdiff_t>(s.burn_in), ch.end());
  return TimeSeriesPanel(std::move(labels), channels);
}

double stationary_variance_ar1(double a, double noise_var) {
  if (!(std::abs(a) < 1.0)) throw UnstableError("AR(1) coefficient must satisfy |a| < 1");
  if (!(noise_var > 0.0)) throw InvalidArgumentError("noise variance must be > 0");
  return noise_var / (1.0 - a * a);
}

}  // namespace tered::linsim
