#include "tered/gauss_analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tered/errors.hpp"

namespace tered::gauss {

namespace {

constexpr double kLog2e = std::numbers::log2e;

double half_log2_ratio(double num, double den) { return 0.5 * std::log(num / den) * kLog2e; }

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& m, const std::vector<std::size_t>& idx) {
  const auto n = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      out(i, j) = m(static_cast<Eigen::Index>(idx[static_cast<std::size_t>(i)]),
                    static_cast<Eigen::Index>(idx[static_cast<std::size_t>(j)]));
    }
  }
  return out;
}

std::vector<std::size_t> concat(std::initializer_list<std::span<const std::size_t>> parts) {
  std::vector<std::size_t> out;
  for (auto p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

}  // namespace

const char* to_string(Variant v) { return v == Variant::printed ? "printed" : "rederived"; }

Variant parse_variant(const std::string& s) {
  if (s == "printed") return Variant::printed;
  if (s == "rederived") return Variant::rederived;
  throw InvalidArgumentError("unknown variant '" + s + "' (expected printed|rederived)");
}

const char* to_string(CaseLabel l) {
  switch (l) {
    case CaseLabel::phi_to_z:
      return "phi_to_z";
    case CaseLabel::phi_to_x:
      return "phi_to_x";
    case CaseLabel::x_to_z:
      return "x_to_z";
  }
  return "?";
}

linsim::LinSysParams to_system(const Lemma2Params& p) {
  if (!(p.sigma_phi_sq > 0.0)) throw InvalidArgumentError("sigma_phi_sq must be > 0");
  linsim::LinSysParams s;
  s.a = 0.0;
  s.b = 0.0;
  s.c = p.c;
  s.d = p.d;
  s.e = p.e;
  s.noise_std = {1.0, std::sqrt(p.sigma_phi_sq), 1.0, 1.0, 1.0};
  return s;
}

double te_phi_to_x(const Lemma2Params& p) {
  if (!(p.sigma_phi_sq > 0.0)) throw InvalidArgumentError("sigma_phi_sq must be > 0");
  return half_log2_ratio(p.c * p.c * p.sigma_phi_sq + 1.0, 1.0);
}

double te_phi_to_z(const Lemma2Params& p) {
  if (!(p.sigma_phi_sq > 0.0)) throw InvalidArgumentError("sigma_phi_sq must be > 0");
  const double rest = 2.0 * p.d * p.d + p.e * p.e + 1.0;
  return half_log2_ratio(4.0 * p.d * p.d * p.c * p.c * p.sigma_phi_sq + rest, rest);
}

double te_x_to_z(const Lemma2Params& p) {
  if (!(p.sigma_phi_sq > 0.0)) throw InvalidArgumentError("sigma_phi_sq must be > 0");
  const double c2s = p.c * p.c * p.sigma_phi_sq;
  const double num = 4.0 * c2s * p.d * p.d + 2.0 * p.d * p.d + p.e * p.e + 1.0;
  // var(c phi | X past sample carrying it)
  const double v = c2s / (c2s + 1.0);
  const double scale = p.variant == Variant::printed ? p.d : p.d * p.d;
  const double den = scale * v + p.d * p.d + p.e * p.e + 1.0;
  return half_log2_ratio(num, den);
}

std::pair<double, double> xi_bounds(double sigma_phi_sq) {
  if (!(sigma_phi_sq >= 4.0)) {
    throw RegionUndefinedError("xi bounds need sigma_phi^2 >= 4 (got " + std::to_string(sigma_phi_sq) + ")");
  }
  const double s = std::sqrt(sigma_phi_sq);
  const double r = std::sqrt(sigma_phi_sq - 4.0);
  return {0.5 * s - 0.5 * r, 0.5 * s + 0.5 * r};
}

std::optional<CaseRegion> eq11_region(double c, double sigma_phi_sq) {
  if (!(c > 0.0)) return std::nullopt;
  if (sigma_phi_sq < 4.0) {
    return CaseRegion{c < 1.0 ? CaseLabel::phi_to_z : CaseLabel::phi_to_x, std::nullopt, std::nullopt};
  }
  const auto [xi1, xi2] = xi_bounds(sigma_phi_sq);
  if (c >= xi1 && c <= xi2) return CaseRegion{CaseLabel::x_to_z, xi1, xi2};
  return std::nullopt;
}

Lemma2Minimum lemma2_min_term(double c, double sigma_phi_sq, Variant variant) {
  if (!(c > 0.0)) throw InvalidArgumentError("lemma2_min_term requires c = d > 0");
  const Lemma2Params p{c, c, 1.0, sigma_phi_sq, variant};
  Lemma2Minimum m;
  m.te_phi_to_x = te_phi_to_x(p);
  m.te_phi_to_z = te_phi_to_z(p);
  m.te_x_to_z = te_x_to_z(p);
  m.argmin = CaseLabel::phi_to_z;
  m.value = m.te_phi_to_z;
  if (m.te_phi_to_x < m.value) {
    m.argmin = CaseLabel::phi_to_x;
    m.value = m.te_phi_to_x;
  }
  if (m.te_x_to_z < m.value) {
    m.argmin = CaseLabel::x_to_z;
    m.value = m.te_x_to_z;
  }
  m.region = eq11_region(c, sigma_phi_sq);
  return m;
}

double logdet_spd(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(m);
  if (ldlt.info() != Eigen::Success) throw SingularCovarianceError("LDL^T factorization failed");
  const Eigen::VectorXd piv = ldlt.vectorD();
  const double largest = piv.cwiseAbs().maxCoeff();
  if (!(largest > 0.0) || piv.minCoeff() < 1e-12 * largest) {
    throw SingularCovarianceError("covariance is singular or not positive definite");
  }
  return piv.array().log().sum();
}

double gaussian_cmi_from_cov(const Eigen::MatrixXd& cov, std::span<const std::size_t> x,
                             std::span<const std::size_t> y, std::span<const std::size_t> z) {
  if (cov.rows() != cov.cols()) throw InvalidArgumentError("covariance must be square");
  for (auto part : {x, y, z}) {
    for (auto i : part) {
      if (i >= static_cast<std::size_t>(cov.rows())) throw InvalidArgumentError("covariance index out of range");
    }
  }
  if (!cov.isApprox(cov.transpose(), 1e-12)) throw InvalidArgumentError("covariance must be symmetric");
  const double xz = logdet_spd(submatrix(cov, concat({x, z})));
  const double yz = logdet_spd(submatrix(cov, concat({y, z})));
  const double zz = logdet_spd(submatrix(cov, concat({z})));
  const double xyz = logdet_spd(submatrix(cov, concat({x, y, z})));
  const double nats = 0.5 * (xz + yz - zz - xyz);
  return std::max(nats * kLog2e, 0.0);
}

double StationaryCov::cov(std::size_t i, long ti, std::size_t j, long tj) const {
  const long h = ti - tj;
  const auto uh = static_cast<std::size_t>(h >= 0 ? h : -h);
  if (uh >= gamma.size()) throw InvalidArgumentError("lag exceeds computed autocovariance range");
  const auto& g = gamma[uh];
  return h >= 0 ? g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))
                : g(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
}

StationaryCov stationary_autocov(const linsim::LagCouplingSpec& spec, std::size_t max_lag) {
  linsim::check(spec);
  const Eigen::MatrixXd f = linsim::companion_matrix(spec);
  const auto n = static_cast<Eigen::Index>(spec.n_processes);
  const auto dim = f.rows();

  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double sd = spec.noise_std[static_cast<std::size_t>(i)];
    q(i, i) = sd * sd;
  }

  // Doubling iteration: S_{j+1} = S_j + A_j S_j A_j^T, A_{j+1} = A_j^2, which
  // sums F^k Q F^kT over k < 2^j.
  Eigen::MatrixXd s = q;
  Eigen::MatrixXd a = f;
  for (int iter = 0; iter < 200; ++iter) {
    const Eigen::MatrixXd inc = a * s * a.transpose();
    s += inc;
    a = (a * a).eval();
    if (inc.cwiseAbs().maxCoeff() <= 1e-18 * s.cwiseAbs().maxCoeff() && a.cwiseAbs().maxCoeff() < 1e-12) break;
    if (a.cwiseAbs().maxCoeff() == 0.0) break;
  }
  s = 0.5 * (s + s.transpose()).eval();

  StationaryCov out;
  out.labels = spec.labels;
  if (out.labels.empty()) {
    for (std::size_t i = 0; i < spec.n_processes; ++i) out.labels.push_back("p" + std::to_string(i));
  }
  Eigen::MatrixXd fh = Eigen::MatrixXd::Identity(dim, dim);
  for (std::size_t h = 0; h <= max_lag; ++h) {
    out.gamma.push_back((fh * s).topLeftCorner(n, n));
    fh = (f * fh).eval();
  }
  return out;
}

StationaryCov stationary_autocov(const linsim::LinSysParams& p, std::size_t max_lag) {
  linsim::check(p);
  return stationary_autocov(linsim::to_lag_spec(p), max_lag);
}

double exact_te_linear(const StationaryCov& cov, ProcessId source, ProcessId target, std::size_t history_len,
                       std::size_t horizon) {
  if (history_len < 1) throw InvalidArgumentError("history length must be >= 1");
  if (horizon < 1) throw InvalidArgumentError("horizon must be >= 1");
  const std::size_t n = cov.labels.size();
  if (source.index >= n || target.index >= n) throw InvalidArgumentError("process index out of range");
  if (source == target) throw SameProcessError("source and target are the same process");

  // Variables (process, time offset) in the embedding block order.
  std::vector<std::pair<std::size_t, long>> vars;
  const auto lag = [](std::size_t l) { return -static_cast<long>(l); };
  for (std::size_t l = 1; l <= history_len; ++l) vars.emplace_back(source.index, lag(l));
  vars.emplace_back(target.index, static_cast<long>(horizon) - 1);
  for (std::size_t l = 1; l <= history_len; ++l) vars.emplace_back(target.index, lag(l));

  const auto m = static_cast<Eigen::Index>(vars.size());
  Eigen::MatrixXd c(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const auto& [pi, ti] = vars[static_cast<std::size_t>(i)];
      const auto& [pj, tj] = vars[static_cast<std::size_t>(j)];
      c(i, j) = cov.cov(pi, ti, pj, tj);
    }
  }
  c = 0.5 * (c + c.transpose()).eval();

  std::vector<std::size_t> xs, ys{history_len}, zs;
  for (std::size_t l = 0; l < history_len; ++l) {
    xs.push_back(l);
    zs.push_back(history_len + 1 + l);
  }
  return gaussian_cmi_from_cov(c, xs, ys, zs);
}

double exact_te_linear(const linsim::LagCouplingSpec& spec, ProcessId source, ProcessId target,
                       std::size_t history_len, std::size_t horizon) {
  const auto cov = stationary_autocov(spec, history_len + horizon);
  return exact_te_linear(cov, source, target, history_len, horizon);
}

double exact_te_linear(const linsim::LinSysParams& p, ProcessId source, ProcessId target,
                       std::size_t history_len, std::size_t horizon) {
  linsim::check(p);
  return exact_te_linear(linsim::to_lag_spec(p), source, target, history_len, horizon);
}

}  // namespace tered::gauss
