#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tered/linsim.hpp"
#include "tered/panel.hpp"

namespace tered::gauss {

/// Denominator form of the X->Z closed form. `printed` scales the conditional
/// variance term by d, `rederived` by d^2 (the exact Gaussian value).
enum class Variant { printed, rederived };

/// The variant that agrees with exact_te_linear(); checked by the test suite.
inline constexpr Variant kDefaultVariant = Variant::rederived;

const char* to_string(Variant v);
Variant parse_variant(const std::string& s);

/// Parameters of the closed forms for the a = b = 0 benchmark system with
/// unit noise on psi, X, Y, Z and stationary variance sigma_phi_sq of phi.
struct Lemma2Params {
  double c = 0.0;
  double d = 0.0;
  double e = 0.0;
  double sigma_phi_sq = 1.0;
  Variant variant = kDefaultVariant;
};

/// Benchmark parameters realizing a Lemma2Params (a = b = 0, noise_std[phi] =
/// sqrt(sigma_phi_sq)).
linsim::LinSysParams to_system(const Lemma2Params& p);

double te_phi_to_x(const Lemma2Params& p);
double te_phi_to_z(const Lemma2Params& p);
double te_x_to_z(const Lemma2Params& p);

enum class CaseLabel { phi_to_z, phi_to_x, x_to_z };
const char* to_string(CaseLabel l);

struct CaseRegion {
  CaseLabel label = CaseLabel::phi_to_z;
  std::optional<double> xi1;
  std::optional<double> xi2;
};

/// (xi1, xi2) = (s/2 - sqrt(s^2-4)/2, s/2 + sqrt(s^2-4)/2) with s = sqrt(sigma_phi_sq).
/// Throws RegionUndefinedError when sigma_phi_sq < 4.
std::pair<double, double> xi_bounds(double sigma_phi_sq);

/// Region predicted by the published case analysis for c = d, e = 1, or
/// nullopt where that analysis assigns no case (sigma^2 >= 4, c outside
/// [xi1, xi2]) or c <= 0.
std::optional<CaseRegion> eq11_region(double c, double sigma_phi_sq);

struct Lemma2Minimum {
  CaseLabel argmin = CaseLabel::phi_to_z;  // direct evaluation, first of phi_to_z, phi_to_x, x_to_z on ties
  double value = 0.0;                      // bits
  double te_phi_to_x = 0.0;
  double te_phi_to_z = 0.0;
  double te_x_to_z = 0.0;
  std::optional<CaseRegion> region;  // published case label for the same point
};

/// Evaluates the three closed forms at c = d, e = 1. Requires c > 0.
Lemma2Minimum lemma2_min_term(double c, double sigma_phi_sq, Variant variant = kDefaultVariant);

/// I(X;Y|Z) in bits for jointly Gaussian variables with covariance `cov`.
///
/// Index sets select rows/columns of `cov`; an empty `z` gives plain mutual
/// information. Throws SingularCovarianceError when an LDL^T pivot falls below
/// 1e-12 times the largest pivot. Tiny negative round-off is reported as 0.
double gaussian_cmi_from_cov(const Eigen::MatrixXd& cov, std::span<const std::size_t> x,
                             std::span<const std::size_t> y, std::span<const std::size_t> z = {});

/// Log-determinant (natural log) of a symmetric positive definite matrix.
double logdet_spd(const Eigen::MatrixXd& m);

/// Autocovariances Gamma(h) = E[x_{k+h} x_k^T], h = 0..max_lag, of a stable
/// lag network in its stationary regime.
struct StationaryCov {
  std::vector<Eigen::MatrixXd> gamma;
  std::vector<std::string> labels;

  std::size_t max_lag() const noexcept { return gamma.empty() ? 0 : gamma.size() - 1; }
  /// Cov(x_i(k + ti), x_j(k + tj)).
  double cov(std::size_t i, long ti, std::size_t j, long tj) const;
};

/// Solves the discrete Lyapunov equation S = F S F^T + Q for the companion
/// state and propagates lags. Throws UnstableError for non-stable systems.
StationaryCov stationary_autocov(const linsim::LagCouplingSpec& spec, std::size_t max_lag);
StationaryCov stationary_autocov(const linsim::LinSysParams& p, std::size_t max_lag);

/// Exact Gaussian TE I(source(t-1..t-L); target(t-1+horizon) | target(t-1..t-L)) in bits.
double exact_te_linear(const linsim::LagCouplingSpec& spec, ProcessId source, ProcessId target,
                       std::size_t history_len, std::size_t horizon = 1);
double exact_te_linear(const linsim::LinSysParams& p, ProcessId source, ProcessId target,
                       std::size_t history_len, std::size_t horizon = 1);
double exact_te_linear(const StationaryCov& cov, ProcessId source, ProcessId target, std::size_t history_len,
                       std::size_t horizon = 1);

}  // namespace tered::gauss
