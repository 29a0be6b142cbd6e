#include "tered/discrete_info.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>

#include "tered/errors.hpp"

namespace tered::discrete {

namespace {

double xlog2x_ratio(double p, double ratio) { return p > 0.0 ? p * std::log2(ratio) : 0.0; }

}  // namespace

FinitePmf::FinitePmf(std::vector<Outcome> outcomes, std::vector<double> probs)
    : outcomes_(std::move(outcomes)), probs_(std::move(probs)) {
  if (outcomes_.size() != probs_.size()) throw InvalidPmfError("outcome and probability counts differ");
  if (outcomes_.empty()) throw InvalidPmfError("pmf has no outcomes");
  arity_ = outcomes_.front().size();
  std::set<Outcome> seen;
  double total = 0.0;
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    if (outcomes_[i].size() != arity_) throw InvalidPmfError("outcomes have mixed arity");
    if (!(probs_[i] >= 0.0) || !std::isfinite(probs_[i])) {
      throw InvalidPmfError("probability " + std::to_string(i) + " is negative or not finite");
    }
    if (!seen.insert(outcomes_[i]).second) throw InvalidPmfError("duplicate outcome in pmf");
    total += probs_[i];
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw InvalidPmfError("probabilities sum to " + std::to_string(total) + ", not 1");
  }
}

FinitePmf FinitePmf::over_symbols(std::vector<double> probs) {
  std::vector<Outcome> outcomes;
  outcomes.reserve(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) outcomes.push_back({static_cast<Symbol>(i)});
  return FinitePmf(std::move(outcomes), std::move(probs));
}

FinitePmf FinitePmf::uniform(std::size_t alphabet) {
  return over_symbols(std::vector<double>(alphabet, 1.0 / static_cast<double>(alphabet)));
}

FinitePmf FinitePmf::marginal(std::span<const std::size_t> components) const {
  for (auto c : components) {
    if (c >= arity_) throw InvalidPmfError("marginal component out of range");
  }
  std::map<Outcome, double> acc;
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    Outcome key;
    key.reserve(components.size());
    for (auto c : components) key.push_back(outcomes_[i][c]);
    acc[key] += probs_[i];
  }
  FinitePmf out;
  out.arity_ = components.size();
  for (auto& [k, p] : acc) {
    out.outcomes_.push_back(k);
    out.probs_.push_back(p);
  }
  return out;
}

FinitePmf product(std::span<const FinitePmf> factors) {
  std::vector<Outcome> outcomes{Outcome{}};
  std::vector<double> probs{1.0};
  for (const auto& f : factors) {
    std::vector<Outcome> next_o;
    std::vector<double> next_p;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
      for (std::size_t j = 0; j < f.size(); ++j) {
        Outcome o = outcomes[i];
        o.insert(o.end(), f.outcomes()[j].begin(), f.outcomes()[j].end());
        next_o.push_back(std::move(o));
        next_p.push_back(probs[i] * f.probs()[j]);
      }
    }
    outcomes = std::move(next_o);
    probs = std::move(next_p);
  }
  return FinitePmf(std::move(outcomes), std::move(probs));
}

double entropy(const FinitePmf& p) {
  double h = 0.0;
  for (double q : p.probs()) {
    if (q > 0.0) h -= q * std::log2(q);
  }
  return std::max(h, 0.0);
}

double mutual_information(const FinitePmf& joint, std::span<const std::size_t> xs,
                          std::span<const std::size_t> ys) {
  // KL form sum p(x,y) log p(x,y)/(p(x)p(y)) over the union of components.
  std::vector<std::size_t> all(xs.begin(), xs.end());
  for (auto c : ys) {
    if (std::find(all.begin(), all.end(), c) == all.end()) all.push_back(c);
  }
  const FinitePmf pxy = joint.marginal(all);
  const FinitePmf px = joint.marginal(xs);
  const FinitePmf py = joint.marginal(ys);
  std::map<Outcome, double> mx, my;
  for (std::size_t i = 0; i < px.size(); ++i) mx[px.outcomes()[i]] = px.probs()[i];
  for (std::size_t i = 0; i < py.size(); ++i) my[py.outcomes()[i]] = py.probs()[i];

  auto project = [&](const Outcome& o, std::span<const std::size_t> comps) {
    Outcome key;
    for (auto c : comps) {
      auto pos = static_cast<std::size_t>(std::find(all.begin(), all.end(), c) - all.begin());
      key.push_back(o[pos]);
    }
    return key;
  };

  double mi = 0.0;
  for (std::size_t i = 0; i < pxy.size(); ++i) {
    const double p = pxy.probs()[i];
    if (p <= 0.0) continue;
    const double qx = mx[project(pxy.outcomes()[i], xs)];
    const double qy = my[project(pxy.outcomes()[i], ys)];
    mi += xlog2x_ratio(p, p / (qx * qy));
  }
  return std::max(mi, 0.0);
}

double mutual_information(const FinitePmf& joint) {
  if (joint.arity() != 2) throw InvalidPmfError("mutual_information expects a pmf over pairs");
  const std::array<std::size_t, 1> x{0}, y{1};
  return mutual_information(joint, x, y);
}

FinitePmf TripleExample::joint() const {
  for (const auto* p : {&pmf_a, &pmf_b, &pmf_c}) {
    if (p->arity() != 1) throw InvalidPmfError("triple example factors must be single variables");
  }
  const std::array<FinitePmf, 3> factors{pmf_a, pmf_b, pmf_c};
  return product(factors);
}

double pairwise_min_mi(const TripleExample& t) {
  const FinitePmf j = t.joint();
  const std::array<std::size_t, 2> x{0, 1}, y{0, 2}, z{1, 2};
  return std::min({mutual_information(j, x, y), mutual_information(j, x, z), mutual_information(j, y, z)});
}

double mss_redundancy(const TripleExample& t) {
  const FinitePmf j = t.joint();
  const std::array<std::size_t, 1> t_xy{0}, t_xz{1}, t_yz{2};
  return std::min({mutual_information(j, t_xy, t_xz), mutual_information(j, t_xz, t_yz),
                   mutual_information(j, t_xy, t_yz)});
}

double specific_information(const FinitePmf& xz, Symbol z) {
  if (xz.arity() != 2) throw InvalidPmfError("specific_information expects a pmf over (x, z)");
  std::map<Symbol, double> px;
  double pz = 0.0;
  for (std::size_t i = 0; i < xz.size(); ++i) {
    px[xz.outcomes()[i][0]] += xz.probs()[i];
    if (xz.outcomes()[i][1] == z) pz += xz.probs()[i];
  }
  if (pz <= 0.0) return 0.0;
  double info = 0.0;
  for (std::size_t i = 0; i < xz.size(); ++i) {
    if (xz.outcomes()[i][1] != z) continue;
    const double p_x_given_z = xz.probs()[i] / pz;
    info += xlog2x_ratio(p_x_given_z, p_x_given_z / px[xz.outcomes()[i][0]]);
  }
  return info;
}

double i_min_discrete(const FinitePmf& joint) {
  if (joint.arity() != 3) throw InvalidPmfError("i_min_discrete expects a pmf over (x, y, z)");
  const std::array<std::size_t, 2> xz_idx{0, 2}, yz_idx{1, 2};
  const std::array<std::size_t, 1> z_idx{2};
  const FinitePmf xz = joint.marginal(xz_idx);
  const FinitePmf yz = joint.marginal(yz_idx);
  const FinitePmf pz = joint.marginal(z_idx);
  double acc = 0.0;
  for (std::size_t i = 0; i < pz.size(); ++i) {
    const double w = pz.probs()[i];
    if (w <= 0.0) continue;
    const Symbol z = pz.outcomes()[i][0];
    acc += w * std::min(specific_information(xz, z), specific_information(yz, z));
  }
  return std::max(acc, 0.0);
}

}  // namespace tered::discrete
