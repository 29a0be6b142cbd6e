#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tered/panel.hpp"
#include "tered/te_estimator.hpp"

namespace tered::select {

/// Mass fractions for the target-relevant set (eta_t) and for the relevant
/// sources of a candidate hidden process (eta_h).
struct SelectionConfig {
  double eta_t = 0.8;
  double eta_h = 0.8;
};

void check(const SelectionConfig& cfg);

/// Smallest set of positions whose weights sum to at least eta * total.
/// Greedy over weights sorted descending, ties by ascending position. Returns
/// positions in ascending order; empty when eta == 0 or the total is 0.
std::vector<std::size_t> min_fraction_subset(std::span<const double> weights, double eta);

inline constexpr const char* kFlagZeroTargetMass = "zero_target_mass";
inline constexpr const char* kFlagEmptyCandidateSet = "empty_candidate_set";
inline constexpr const char* kFlagAllZeroRedundancy = "all_zero_redundancy";
inline constexpr const char* kFlagEmptyRelevantSet = "empty_relevant_set";

struct TargetRelevant {
  std::vector<ProcessId> members;  // ascending channel index
  bool zero_mass = false;
};

/// Target-relevant sources from clamped TE values (te_to_target[s] belongs to
/// sources[s]).
TargetRelevant target_relevant_set(const std::vector<ProcessId>& sources, std::span<const double> te_to_target,
                                   const SelectionConfig& cfg);

/// Members of t_set other than i that together receive an eta_h fraction of
/// i's transfer entropy into t_set. `among` must hold (i, j) for j in t_set.
std::vector<ProcessId> candidate_relevant_set(ProcessId i, const TEMatrix& among, const std::vector<ProcessId>& t_set,
                                              const SelectionConfig& cfg);

struct CandidateRedundancy {
  double value = 0.0;
  bool empty_set = false;
};

/// min over j in t_hat of TE(i -> j); 0 with empty_set when t_hat is empty.
CandidateRedundancy candidate_redundancy(ProcessId i, const std::vector<ProcessId>& t_hat, const TEMatrix& among);

struct HiddenChoice {
  ProcessId hidden;
  std::vector<ProcessId> relevant;
  double redundancy = 0.0;
  bool all_zero = false;
  bool empty_relevant = false;
};

/// Candidate with the largest redundancy, ties to the lowest channel index.
/// When every candidate scores 0 the first candidate is returned with
/// all_zero set.
HiddenChoice pick_hidden(const TEMatrix& among, const std::vector<ProcessId>& candidates,
                         const std::vector<ProcessId>& t_set, const SelectionConfig& cfg);

/// Same, with the matrix rows as candidates.
HiddenChoice pick_hidden(const TEMatrix& among, const std::vector<ProcessId>& t_set, const SelectionConfig& cfg);

double theorem1_bound(double r_phi_to_z, double r_phi_to_set, double r_set_to_z);

double lemma1_bound(double te_phi_z, double te_phi_x, double te_phi_y, double te_x_z, double te_y_z);

struct RedundancyReport {
  ProcessId target;
  std::vector<ProcessId> target_relevant;
  ProcessId hidden;
  std::vector<ProcessId> relevant;
  double r_phi_to_z = 0.0;
  double r_phi_to_set = 0.0;
  double r_set_to_z = 0.0;
  double bound = 0.0;
  std::vector<std::string> degenerate_flags;

  friend bool operator==(const RedundancyReport&, const RedundancyReport&) = default;
};

/// Selection for one target from precomputed matrices. `to_target` needs the
/// column of `target` for every source, `among` the source -> j entries for
/// every j that ends up in the target-relevant set.
RedundancyReport select_for_target(ProcessId target, const std::vector<ProcessId>& sources, const TEMatrix& to_target,
                                   const TEMatrix& among, const SelectionConfig& cfg);

struct PipelineResult {
  std::vector<RedundancyReport> reports;
  TEMatrix to_targets;     // sources x targets
  TEMatrix among_sources;  // sources x union of target-relevant sets
};

/// Estimates source -> target TE, then the source -> source entries the
/// selection needs (one shared matrix for all targets), then one report per
/// target. A process never counts as a source of itself.
PipelineResult run_pipeline(const TimeSeriesPanel& panel, const std::vector<ProcessId>& targets,
                            const std::vector<ProcessId>& sources, const te::EmbeddingSpec& spec,
                            const SelectionConfig& cfg, std::size_t workers = 1);

}  // namespace tered::select
