#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "tered/discrete_info.hpp"
#include "tered/errors.hpp"

using namespace tered;
using namespace tered::discrete;

namespace {

TripleExample bits(double pa, double pb, double pc) {
  return {FinitePmf::over_symbols({1 - pa, pa}), FinitePmf::over_symbols({1 - pb, pb}),
          FinitePmf::over_symbols({1 - pc, pc})};
}

// Direct triple loop over a dense p[x][y][z] table.
double brute_i_min(const std::vector<std::vector<std::vector<double>>>& p) {
  const std::size_t nx = p.size(), ny = p[0].size(), nz = p[0][0].size();
  std::vector<double> px(nx, 0.0), py(ny, 0.0), pz(nz, 0.0);
  std::vector<std::vector<double>> pxz(nx, std::vector<double>(nz, 0.0)), pyz(ny, std::vector<double>(nz, 0.0));
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y)
      for (std::size_t z = 0; z < nz; ++z) {
        px[x] += p[x][y][z];
        py[y] += p[x][y][z];
        pz[z] += p[x][y][z];
        pxz[x][z] += p[x][y][z];
        pyz[y][z] += p[x][y][z];
      }
  double total = 0.0;
  for (std::size_t z = 0; z < nz; ++z) {
    if (pz[z] <= 0) continue;
    double ix = 0.0, iy = 0.0;
    for (std::size_t x = 0; x < nx; ++x) {
      const double c = pxz[x][z] / pz[z];
      if (c > 0) ix += c * std::log2(c / px[x]);
    }
    for (std::size_t y = 0; y < ny; ++y) {
      const double c = pyz[y][z] / pz[z];
      if (c > 0) iy += c * std::log2(c / py[y]);
    }
    total += pz[z] * std::min(ix, iy);
  }
  return total;
}

}  // namespace

TEST_CASE("entropy examples") {
  CHECK(entropy(FinitePmf::uniform(2)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(entropy(FinitePmf::over_symbols({1.0})) == 0.0);
  CHECK(entropy(FinitePmf::over_symbols({0.0, 1.0})) == 0.0);
  CHECK(std::abs(entropy(FinitePmf::over_symbols({0.25, 0.75})) - 0.8112781244591328) < 1e-12);
}

TEST_CASE("entropy matches a direct log sum on 16 symbols") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> w(16);
  double s = 0.0;
  for (auto& v : w) s += (v = u(rng));
  double h = 0.0;
  for (auto& v : w) {
    v /= s;
    h -= v * std::log2(v);
  }
  CHECK(std::abs(entropy(FinitePmf::over_symbols(w)) - h) < 1e-12);
}

TEST_CASE("FinitePmf validation") {
  CHECK_THROWS_AS(FinitePmf::over_symbols({0.5, 0.6}), InvalidPmfError);
  CHECK_THROWS_AS(FinitePmf::over_symbols({1.5, -0.5}), InvalidPmfError);
  CHECK_THROWS_AS(FinitePmf({{0}, {0}}, {0.5, 0.5}), InvalidPmfError);
  CHECK_THROWS_AS(FinitePmf({{0}, {1, 1}}, {0.5, 0.5}), InvalidPmfError);
  CHECK_NOTHROW(FinitePmf::over_symbols({0.5, 0.5 + 1e-13}));
}

TEST_CASE("mutual information examples") {
  const FinitePmf ind({{0, 0}, {0, 1}, {1, 0}, {1, 1}}, {0.06, 0.14, 0.24, 0.56});
  CHECK(std::abs(mutual_information(ind)) < 1e-12);
  const FinitePmf same({{0, 0}, {1, 1}}, {0.5, 0.5});
  CHECK(std::abs(mutual_information(same) - 1.0) < 1e-12);

  // X=(A,B), Y=(A,C): I(X;Y) = H(A).
  const auto j = bits(0.5, 0.5, 0.5).joint();
  const std::size_t x[] = {0, 1}, y[] = {0, 2};
  CHECK(std::abs(mutual_information(j, x, y) - 1.0) < 1e-12);
}

TEST_CASE("mutual information equals H(X) + H(Y) - H(X,Y)") {
  const FinitePmf p({{0, 0}, {0, 1}, {1, 0}, {2, 1}}, {0.1, 0.2, 0.3, 0.4});
  const std::size_t a[] = {0}, b[] = {1};
  const double hx = entropy(p.marginal(a)), hy = entropy(p.marginal(b)), hxy = entropy(p);
  CHECK(std::abs(mutual_information(p) - (hx + hy - hxy)) < 1e-12);
}

TEST_CASE("three-bit example: pairwise minimum vs minimal sufficient statistics") {
  const auto t = bits(0.5, 0.5, 0.5);
  CHECK(std::abs(pairwise_min_mi(t) - 1.0) < 1e-12);
  CHECK(std::abs(mss_redundancy(t)) < 1e-12);

  CHECK(std::abs(pairwise_min_mi(bits(0.5, 0.0, 1.0))) < 1e-12);
  CHECK(std::abs(mss_redundancy(bits(0.0, 1.0, 0.0))) < 1e-12);

  const TripleExample quad{FinitePmf::uniform(4), FinitePmf::uniform(2), FinitePmf::uniform(2)};
  CHECK(std::abs(pairwise_min_mi(quad) - 1.0) < 1e-12);
}

TEST_CASE("mss redundancy never exceeds the pairwise minimum") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const auto t = bits(u(rng), u(rng), u(rng));
    CHECK(mss_redundancy(t) <= pairwise_min_mi(t) + 1e-12);
    CHECK(std::abs(pairwise_min_mi(t) - std::min({entropy(t.pmf_a), entropy(t.pmf_b), entropy(t.pmf_c)})) < 1e-12);
  }
}

TEST_CASE("i_min examples") {
  // Z independent of (X, Y).
  std::vector<Outcome> o;
  std::vector<double> p;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int z = 0; z < 2; ++z) {
        o.push_back({x, y, z});
        p.push_back((x == y ? 0.35 : 0.15) * 0.5);
      }
  CHECK(std::abs(i_min_discrete(FinitePmf(o, p))) < 1e-12);

  CHECK(std::abs(i_min_discrete(FinitePmf({{0, 0, 0}, {1, 1, 1}}, {0.5, 0.5})) - 1.0) < 1e-12);

  // Y = X, Z = X xor N with N a fair bit.
  const FinitePmf xor_noise({{0, 0, 0}, {0, 0, 1}, {1, 1, 1}, {1, 1, 0}}, {0.25, 0.25, 0.25, 0.25});
  CHECK(std::abs(i_min_discrete(xor_noise)) < 1e-12);
}

TEST_CASE("specific information uses p(x) in the denominator") {
  // X = Z: I(X; Z=z) = -log2 p(x=z).
  const FinitePmf xz({{0, 0}, {1, 1}}, {0.25, 0.75});
  CHECK(std::abs(specific_information(xz, 0) - 2.0) < 1e-12);
  CHECK(std::abs(specific_information(xz, 1) - std::log2(4.0 / 3.0)) < 1e-12);
}

TEST_CASE("i_min matches a brute-force evaluator and is bounded by the pairwise MIs") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> size(1, 4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int nx = size(rng), ny = size(rng), nz = size(rng);
    std::vector<std::vector<std::vector<double>>> dense(nx, std::vector<std::vector<double>>(ny, std::vector<double>(nz)));
    double s = 0.0;
    for (auto& a : dense)
      for (auto& b : a)
        for (auto& v : b) s += (v = u(rng) < 0.2 ? 0.0 : u(rng));
    if (s == 0.0) {
      dense[0][0][0] = s = 1.0;
    }
    std::vector<Outcome> o;
    std::vector<double> p;
    for (int x = 0; x < nx; ++x)
      for (int y = 0; y < ny; ++y)
        for (int z = 0; z < nz; ++z) {
          dense[x][y][z] /= s;
          o.push_back({x, y, z});
          p.push_back(dense[x][y][z]);
        }
    const FinitePmf joint(o, p);
    const double got = i_min_discrete(joint);
    CHECK(std::abs(got - brute_i_min(dense)) < 1e-12);
    const std::size_t xi[] = {0}, yi[] = {1}, zi[] = {2};
    CHECK(got <= std::min(mutual_information(joint, xi, zi), mutual_information(joint, yi, zi)) + 1e-12);
    CHECK(got >= 0.0);
  }
}
