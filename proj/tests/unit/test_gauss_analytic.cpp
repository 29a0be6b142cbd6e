#include <doctest.h>

#include <cmath>

#include "tered/errors.hpp"
#include "tered/gauss_analytic.hpp"

using namespace tered;
using namespace tered::gauss;
using linsim::kPhi;
using linsim::kPsi;
using linsim::kX;
using linsim::kY;
using linsim::kZ;

namespace {

Lemma2Params lp(double c, double d, double e, double s2, Variant v = Variant::rederived) { return {c, d, e, s2, v}; }

constexpr double grid[] = {0.25, 0.5, 1.0, 2.0};
constexpr double sigma_grid[] = {0.5, 1.0, 4.0, 9.0};

}  // namespace

TEST_CASE("closed form TE(phi -> X)") {
  CHECK(te_phi_to_x(lp(0, 1, 1, 1)) == 0.0);
  CHECK(std::abs(te_phi_to_x(lp(1, 1, 1, 3)) - 1.0) < 1e-15);
  CHECK(std::abs(te_phi_to_x(lp(1, 1, 1, 1)) - 0.5) < 1e-15);
}

TEST_CASE("closed form TE(phi -> Z)") {
  CHECK(std::abs(te_phi_to_z(lp(0, 1, 1, 1))) < 1e-15);
  CHECK(std::abs(te_phi_to_z(lp(1, 1, 1, 1)) - 0.5) < 1e-15);
  CHECK(std::abs(te_phi_to_z(lp(1, 0, 1, 1))) < 1e-15);
}

TEST_CASE("closed form TE(X -> Z) in both variants") {
  for (double d : grid) {
    for (double e : grid) {
      const double expect = 0.5 * std::log2((2 * d * d + e * e + 1) / (d * d + e * e + 1));
      CHECK(std::abs(te_x_to_z(lp(0, d, e, 1, Variant::printed)) - expect) < 1e-14);
      CHECK(std::abs(te_x_to_z(lp(0, d, e, 1, Variant::rederived)) - expect) < 1e-14);
    }
  }
  const double both = 0.5 * std::log2(8.0 / 3.5);  // 0.596322...
  CHECK(std::abs(te_x_to_z(lp(1, 1, 1, 1, Variant::printed)) - both) < 1e-14);
  CHECK(std::abs(te_x_to_z(lp(1, 1, 1, 1, Variant::rederived)) - both) < 1e-14);
  // Frozen from an independent Lyapunov/log-det computation.
  CHECK(std::abs(te_x_to_z(lp(1, 2, 1, 1, Variant::printed)) - 0.946542398042) < 1e-9);
  CHECK(std::abs(te_x_to_z(lp(1, 2, 1, 1, Variant::rederived)) - 0.850219859071) < 1e-9);
}

TEST_CASE("variant names") {
  CHECK(parse_variant("printed") == Variant::printed);
  CHECK(parse_variant("rederived") == Variant::rederived);
  CHECK(std::string(to_string(Variant::printed)) == "printed");
  CHECK_THROWS_AS(parse_variant("other"), InvalidArgumentError);
  CHECK(kDefaultVariant == Variant::rederived);
}

TEST_CASE("closed forms are zero at c=0 and increase in c=d") {
  for (double s2 : sigma_grid) {
    double prev[3] = {0.0, 0.0, 0.0};
    CHECK(std::abs(te_phi_to_x(lp(0, 0, 1, s2))) < 1e-15);
    CHECK(std::abs(te_phi_to_z(lp(0, 0, 1, s2))) < 1e-15);
    CHECK(std::abs(te_x_to_z(lp(0, 0, 1, s2))) < 1e-15);
    for (int i = 1; i <= 50; ++i) {
      const double c = 0.05 * i;
      const double now[3] = {te_phi_to_x(lp(c, c, 1, s2)), te_phi_to_z(lp(c, c, 1, s2)), te_x_to_z(lp(c, c, 1, s2))};
      for (int k = 0; k < 3; ++k) {
        CHECK(now[k] > prev[k]);
        prev[k] = now[k];
      }
    }
  }
}

TEST_CASE("xi bounds") {
  const auto [a, b] = xi_bounds(4.0);
  CHECK(a == 1.0);
  CHECK(b == 1.0);
  const auto [lo, hi] = xi_bounds(6.25);
  CHECK(lo == 0.5);
  CHECK(hi == 2.0);
  CHECK_THROWS_AS(xi_bounds(3.0), RegionUndefinedError);
  const auto [p, q] = xi_bounds(9.0);
  CHECK(std::abs(p * q - 1.0) < 1e-12);
}

TEST_CASE("published case regions") {
  CHECK(eq11_region(0.5, 1.0)->label == CaseLabel::phi_to_z);
  CHECK(eq11_region(2.0, 1.0)->label == CaseLabel::phi_to_x);
  CHECK(eq11_region(1.0, 1.0)->label == CaseLabel::phi_to_x);
  const auto r = eq11_region(1.0, 6.25);
  REQUIRE(r.has_value());
  CHECK(r->label == CaseLabel::x_to_z);
  CHECK(r->xi1 == 0.5);
  CHECK(r->xi2 == 2.0);
  CHECK_FALSE(eq11_region(3.0, 6.25).has_value());
  CHECK_FALSE(eq11_region(0.0, 1.0).has_value());
}

TEST_CASE("lemma2_min_term examples") {
  CHECK(lemma2_min_term(0.5, 1.0).argmin == CaseLabel::phi_to_z);
  CHECK(lemma2_min_term(2.0, 1.0).argmin == CaseLabel::phi_to_x);
  const auto m = lemma2_min_term(1.0, 6.25);
  REQUIRE(m.region.has_value());
  CHECK(m.region->label == CaseLabel::x_to_z);
  CHECK(m.value == std::min({m.te_phi_to_x, m.te_phi_to_z, m.te_x_to_z}));
  CHECK_THROWS_AS(lemma2_min_term(0.0, 1.0), InvalidArgumentError);
}

TEST_CASE("direct argmin agrees with the published regions below sigma^2 = 4") {
  for (double s2 : {0.5, 1.0, 2.0, 3.5}) {
    for (int i = 1; i <= 300; ++i) {
      const double c = 0.01 * i;
      if (std::abs(c - 1.0) < 1e-6) continue;
      for (Variant v : {Variant::printed, Variant::rederived}) {
        const auto m = lemma2_min_term(c, s2, v);
        REQUIRE(m.region.has_value());
        CHECK(m.argmin == m.region->label);
      }
    }
  }
}

TEST_CASE("gaussian conditional mutual information") {
  Eigen::MatrixXd block = Eigen::MatrixXd::Identity(4, 4);
  block(0, 1) = block(1, 0) = 0.3;
  block(2, 3) = block(3, 2) = -0.2;
  const std::size_t x2[] = {0, 1}, y2[] = {2, 3};
  CHECK(std::abs(gaussian_cmi_from_cov(block, x2, y2)) < 1e-15);

  Eigen::MatrixXd rho(2, 2);
  rho << 1.0, 0.5, 0.5, 1.0;
  const std::size_t x[] = {0}, y[] = {1}, z[] = {2};
  CHECK(std::abs(gaussian_cmi_from_cov(rho, x, y) - 0.20751874963942190) < 1e-12);

  // X = phi + n1, Y = phi + n2, conditioned on phi.
  Eigen::MatrixXd c(3, 3);
  c << 2.0, 1.0, 1.0, 1.0, 2.0, 1.0, 1.0, 1.0, 1.0;
  CHECK(std::abs(gaussian_cmi_from_cov(c, x, y, z)) < 1e-12);
  CHECK(gaussian_cmi_from_cov(c, x, y) > 0.2);

  Eigen::MatrixXd g(3, 3);
  g << 2.0, 0.5, 0.3, 0.5, 1.5, 0.4, 0.3, 0.4, 1.0;
  CHECK(std::abs(gaussian_cmi_from_cov(g, x, y, z) - 0.041891224941512) < 1e-12);

  Eigen::MatrixXd sing(2, 2);
  sing << 1.0, 1.0, 1.0, 1.0;
  CHECK_THROWS_AS(gaussian_cmi_from_cov(sing, x, y), SingularCovarianceError);
}

TEST_CASE("gaussian CMI is invariant under block-wise linear maps") {
  Eigen::MatrixXd c(5, 5);
  c << 2.0, 0.4, 0.3, 0.2, 0.1,  //
      0.4, 1.5, 0.2, 0.3, 0.2,   //
      0.3, 0.2, 1.8, 0.5, 0.3,   //
      0.2, 0.3, 0.5, 1.2, 0.1,   //
      0.1, 0.2, 0.3, 0.1, 1.0;
  Eigen::MatrixXd t = Eigen::MatrixXd::Identity(5, 5);
  t.block(0, 0, 2, 2) << 2.0, 1.0, -0.5, 3.0;
  t.block(2, 2, 2, 2) << 0.3, 0.0, 4.0, -1.0;
  const Eigen::MatrixXd c2 = t * c * t.transpose();
  const std::size_t x[] = {0, 1}, y[] = {2, 3}, z[] = {4};
  CHECK(std::abs(gaussian_cmi_from_cov(c, x, y, z) - gaussian_cmi_from_cov(c2, x, y, z)) < 1e-9);
}

TEST_CASE("stationary autocovariance") {
  linsim::LagCouplingSpec white;
  white.n_processes = 2;
  white.noise_std = {1.0, 2.0};
  const auto w = stationary_autocov(white, 3);
  CHECK(w.gamma.size() == 4);
  CHECK(std::abs(w.gamma[0](0, 0) - 1.0) < 1e-14);
  CHECK(std::abs(w.gamma[0](1, 1) - 4.0) < 1e-14);
  CHECK(w.gamma[2].cwiseAbs().maxCoeff() < 1e-14);

  linsim::LagCouplingSpec ar;
  ar.n_processes = 1;
  ar.noise_std = {1.0};
  ar.couplings = {{0, 0, 1, 1.0 / 3}};
  const auto a = stationary_autocov(ar, 2);
  CHECK(std::abs(a.gamma[0](0, 0) - 1.125) < 1e-14);
  CHECK(std::abs(a.gamma[1](0, 0) - 0.375) < 1e-14);
  CHECK(std::abs(a.cov(0, 0, 0, -1) - 0.375) < 1e-14);
  CHECK(std::abs(a.cov(0, -2, 0, 0) - 0.125) < 1e-14);

  const double c = 0.7, d = 0.6, e = 0.9, s2 = 2.0;
  const auto b = stationary_autocov(to_system(lp(c, d, e, s2)), 4);
  CHECK(std::abs(b.gamma[0](kZ, kZ) - (4 * d * d * c * c * s2 + 2 * d * d + e * e + 1)) < 1e-12);

  linsim::LagCouplingSpec bad = ar;
  bad.couplings = {{0, 0, 1, 1.0}};
  CHECK_THROWS_AS(stationary_autocov(bad, 2), UnstableError);
}

TEST_CASE("exact TE reproduces the closed forms on the a=b=0 grid") {
  int printed_hits = 0, rederived_hits = 0, tested = 0;
  for (double c : grid)
    for (double d : grid)
      for (double e : grid)
        for (double s2 : sigma_grid) {
          const auto sys = to_system(lp(c, d, e, s2));
          const auto cov = stationary_autocov(sys, 5);
          CHECK(std::abs(exact_te_linear(cov, ProcessId{kPhi}, ProcessId{kX}, 4) - te_phi_to_x(lp(c, d, e, s2))) < 1e-9);
          CHECK(std::abs(exact_te_linear(cov, ProcessId{kPhi}, ProcessId{kZ}, 4) - te_phi_to_z(lp(c, d, e, s2))) < 1e-9);
          if (d == 1.0) continue;
          const double xz = exact_te_linear(cov, ProcessId{kX}, ProcessId{kZ}, 4);
          const bool p = std::abs(xz - te_x_to_z(lp(c, d, e, s2, Variant::printed))) < 1e-9;
          const bool r = std::abs(xz - te_x_to_z(lp(c, d, e, s2, Variant::rederived))) < 1e-9;
          CHECK(p != r);
          printed_hits += p;
          rederived_hits += r;
          ++tested;
        }
  CHECK(rederived_hits == tested);
  CHECK(printed_hits == 0);
}

TEST_CASE("exact TE on the five-process benchmark") {
  const linsim::LinSysParams p{1.0 / 3, 0.2, 0.5, 1.0 / 3, 1.0 / 3};
  const auto cov = stationary_autocov(p, 8);
  // Frozen from an independent Lyapunov/log-det computation at L=5.
  CHECK(std::abs(exact_te_linear(cov, ProcessId{kPhi}, ProcessId{kX}, 5) - 0.1746198718) < 1e-9);
  CHECK(std::abs(exact_te_linear(cov, ProcessId{kPhi}, ProcessId{kZ}, 5) - 0.0693693838) < 1e-9);
  CHECK(std::abs(exact_te_linear(cov, ProcessId{kX}, ProcessId{kZ}, 5) - 0.1177546361) < 1e-9);
  CHECK(std::abs(exact_te_linear(cov, ProcessId{kPsi}, ProcessId{kZ}, 5) - 0.0595311445) < 1e-9);
  CHECK(std::abs(exact_te_linear(cov, ProcessId{kX}, ProcessId{kY}, 5) - 0.0025152636) < 1e-9);
  CHECK(std::abs(exact_te_linear(cov, ProcessId{kPsi}, ProcessId{kPhi}, 5)) < 1e-12);
  CHECK(std::abs(exact_te_linear(p, ProcessId{kPhi}, ProcessId{kX}, 3, 2) - 0.197692934888) < 1e-9);
}

TEST_CASE("exact TE of decoupled processes is zero") {
  linsim::LagCouplingSpec s;
  s.n_processes = 3;
  s.noise_std = {1.0, 0.5, 2.0};
  s.couplings = {{0, 0, 1, 0.5}, {2, 2, 2, -0.3}};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      if (i != j) CHECK(std::abs(exact_te_linear(s, ProcessId{i}, ProcessId{j}, 3)) < 1e-12);
}
