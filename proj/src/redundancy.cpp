#include "tered/redundancy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "tered/errors.hpp"

namespace tered::select {

namespace {

double clamped(const TEMatrix& m, ProcessId from, ProcessId to) {
  const auto v = m.value(from, to);
  if (!v) throw InvalidArgumentError("TE matrix lacks entry " + std::to_string(from.index) + " -> " + std::to_string(to.index));
  return *v;
}

std::vector<ProcessId> by_index(std::vector<ProcessId> ids) {
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace

void check(const SelectionConfig& cfg) {
  if (!(cfg.eta_t >= 0.0 && cfg.eta_t <= 1.0)) throw InvalidArgumentError("eta_t must lie in [0, 1]");
  if (!(cfg.eta_h >= 0.0 && cfg.eta_h <= 1.0)) throw InvalidArgumentError("eta_h must lie in [0, 1]");
}

std::vector<std::size_t> min_fraction_subset(std::span<const double> weights, double eta) {
  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return weights[a] > weights[b]; });
  // Summing in greedy order makes the full prefix equal the total exactly.
  double total = 0.0;
  for (auto i : order) total += weights[i];
  std::vector<std::size_t> out;
  if (eta <= 0.0 || total <= 0.0) return out;
  const double threshold = eta * total;
  double acc = 0.0;
  for (auto i : order) {
    out.push_back(i);
    acc += weights[i];
    if (acc >= threshold) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

TargetRelevant target_relevant_set(const std::vector<ProcessId>& sources, std::span<const double> te_to_target,
                                   const SelectionConfig& cfg) {
  check(cfg);
  if (sources.size() != te_to_target.size()) throw LengthMismatchError("one TE value per source expected");
  std::vector<std::size_t> pos(sources.size());
  std::iota(pos.begin(), pos.end(), std::size_t{0});
  std::sort(pos.begin(), pos.end(), [&](std::size_t a, std::size_t b) { return sources[a] < sources[b]; });
  std::vector<double> w;
  double total = 0.0;
  for (auto p : pos) {
    w.push_back(te_to_target[p]);
    total += te_to_target[p];
  }
  TargetRelevant out;
  out.zero_mass = total <= 0.0;
  for (auto i : min_fraction_subset(w, cfg.eta_t)) out.members.push_back(sources[pos[i]]);
  return out;
}

std::vector<ProcessId> candidate_relevant_set(ProcessId i, const TEMatrix& among, const std::vector<ProcessId>& t_set,
                                              const SelectionConfig& cfg) {
  check(cfg);
  std::vector<ProcessId> others;
  for (auto j : by_index(t_set)) {
    if (j != i) others.push_back(j);
  }
  std::vector<double> w;
  for (auto j : others) w.push_back(clamped(among, i, j));
  std::vector<ProcessId> out;
  for (auto k : min_fraction_subset(w, cfg.eta_h)) out.push_back(others[k]);
  return out;
}

CandidateRedundancy candidate_redundancy(ProcessId i, const std::vector<ProcessId>& t_hat, const TEMatrix& among) {
  if (t_hat.empty()) return {0.0, true};
  double best = clamped(among, i, t_hat.front());
  for (auto j : t_hat) best = std::min(best, clamped(among, i, j));
  return {best, false};
}

HiddenChoice pick_hidden(const TEMatrix& among, const std::vector<ProcessId>& candidates,
                         const std::vector<ProcessId>& t_set, const SelectionConfig& cfg) {
  if (candidates.empty()) throw InvalidArgumentError("pick_hidden needs at least one candidate");
  HiddenChoice best;
  bool have = false;
  for (auto i : by_index(candidates)) {
    auto t_hat = candidate_relevant_set(i, among, t_set, cfg);
    const auto r = candidate_redundancy(i, t_hat, among);
    if (!have || r.value > best.redundancy) {
      best.hidden = i;
      best.relevant = std::move(t_hat);
      best.redundancy = r.value;
      best.empty_relevant = r.empty_set;
      have = true;
    }
  }
  best.all_zero = best.redundancy <= 0.0;
  return best;
}

HiddenChoice pick_hidden(const TEMatrix& among, const std::vector<ProcessId>& t_set, const SelectionConfig& cfg) {
  return pick_hidden(among, among.row_ids(), t_set, cfg);
}

double theorem1_bound(double r_phi_to_z, double r_phi_to_set, double r_set_to_z) {
  return std::min({r_phi_to_z, r_phi_to_set, r_set_to_z});
}

double lemma1_bound(double te_phi_z, double te_phi_x, double te_phi_y, double te_x_z, double te_y_z) {
  return std::min({te_phi_z, te_phi_x, te_phi_y, te_x_z, te_y_z});
}

RedundancyReport select_for_target(ProcessId target, const std::vector<ProcessId>& sources, const TEMatrix& to_target,
                                   const TEMatrix& among, const SelectionConfig& cfg) {
  check(cfg);
  RedundancyReport rep;
  rep.target = target;
  std::vector<ProcessId> own;
  for (auto s : by_index(sources)) {
    if (s != target) own.push_back(s);
  }
  if (own.empty()) {
    rep.degenerate_flags.push_back(kFlagEmptyCandidateSet);
    return rep;
  }
  std::vector<double> col;
  for (auto s : own) col.push_back(clamped(to_target, s, target));

  const auto t = target_relevant_set(own, col, cfg);
  rep.target_relevant = t.members;
  if (t.zero_mass) rep.degenerate_flags.push_back(kFlagZeroTargetMass);

  const auto h = pick_hidden(among, own, rep.target_relevant, cfg);
  rep.hidden = h.hidden;
  rep.relevant = h.relevant;
  rep.r_phi_to_set = h.redundancy;
  if (h.all_zero) rep.degenerate_flags.push_back(kFlagAllZeroRedundancy);

  rep.r_phi_to_z = clamped(to_target, rep.hidden, target);
  if (rep.relevant.empty()) {
    rep.degenerate_flags.push_back(kFlagEmptyRelevantSet);
    rep.r_set_to_z = 0.0;
  } else {
    rep.r_set_to_z = clamped(to_target, rep.relevant.front(), target);
    for (auto j : rep.relevant) rep.r_set_to_z = std::min(rep.r_set_to_z, clamped(to_target, j, target));
  }
  rep.bound = theorem1_bound(rep.r_phi_to_z, rep.r_phi_to_set, rep.r_set_to_z);
  return rep;
}

PipelineResult run_pipeline(const TimeSeriesPanel& panel, const std::vector<ProcessId>& targets,
                            const std::vector<ProcessId>& sources, const te::EmbeddingSpec& spec,
                            const SelectionConfig& cfg, std::size_t workers) {
  check(cfg);
  te::check(spec);
  const auto src = by_index(sources);
  PipelineResult out;
  out.to_targets = te::te_matrix(panel, src, targets, spec, workers);

  std::set<ProcessId> needed;
  for (auto z : targets) {
    std::vector<ProcessId> own;
    std::vector<double> col;
    for (auto s : src) {
      if (s == z) continue;
      own.push_back(s);
      col.push_back(clamped(out.to_targets, s, z));
    }
    for (auto j : target_relevant_set(own, col, cfg).members) needed.insert(j);
  }
  out.among_sources = te::te_matrix(panel, src, std::vector<ProcessId>(needed.begin(), needed.end()), spec, workers);

  for (auto z : targets) out.reports.push_back(select_for_target(z, src, out.to_targets, out.among_sources, cfg));
  return out;
}

}  // namespace tered::select
