#include "tered/panel.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "tered/errors.hpp"

namespace tered {

TimeSeriesPanel::TimeSeriesPanel(std::vector<std::string> labels,
                                 const std::vector<std::vector<double>>& channels)
    : labels_(std::move(labels)) {
  if (labels_.size() != channels.size()) {
    throw LengthMismatchError("panel has " + std::to_string(labels_.size()) + " labels but " +
                              std::to_string(channels.size()) + " channels");
  }
  samples_ = channels.empty() ? 0 : channels.front().size();
  data_.reserve(samples_ * channels.size());
  for (std::size_t j = 0; j < channels.size(); ++j) {
    if (channels[j].size() != samples_) {
      throw LengthMismatchError("channel '" + labels_[j] + "' has " + std::to_string(channels[j].size()) +
                                " samples, expected " + std::to_string(samples_));
    }
    data_.insert(data_.end(), channels[j].begin(), channels[j].end());
  }
}

std::span<const double> TimeSeriesPanel::channel(ProcessId id) const {
  if (id.index >= labels_.size()) {
    throw InvalidArgumentError("process index " + std::to_string(id.index) + " out of range (J=" +
                               std::to_string(labels_.size()) + ")");
  }
  return {data_.data() + id.index * samples_, samples_};
}

std::optional<ProcessId> TimeSeriesPanel::find(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return ProcessId{static_cast<std::size_t>(it - labels_.begin())};
}

ProcessId TimeSeriesPanel::require(const std::string& label) const {
  if (auto id = find(label)) return *id;
  throw InvalidArgumentError("unknown channel label '" + label + "'");
}

TimeSeriesPanel validate_panel(const TimeSeriesPanel& panel) {
  if (panel.channel_count() > 0 && panel.sample_count() == 0) {
    throw LengthMismatchError("panel channels are empty (N must be >= 1)");
  }
  std::unordered_set<std::string> seen;
  for (const auto& label : panel.labels()) {
    if (!seen.insert(label).second) throw DuplicateLabelError(label);
  }
  for (std::size_t j = 0; j < panel.channel_count(); ++j) {
    auto x = panel.channel(ProcessId{j});
    for (std::size_t t = 0; t < x.size(); ++t) {
      if (!std::isfinite(x[t])) throw NonFiniteError(panel.labels()[j], t);
    }
  }
  return panel;
}

std::vector<double> standardize_channel(std::span<const double> x, const std::string& label) {
  const std::size_t n = x.size();
  if (n < 2) throw ConstantChannelError(label);
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  const double var = ss / static_cast<double>(n - 1);
  if (!(var >= 1e-15)) throw ConstantChannelError(label);
  const double inv_sd = 1.0 / std::sqrt(var);

  std::vector<double> out(n);
  for (std::size_t t = 0; t < n; ++t) out[t] = (x[t] - mean) * inv_sd;
  return out;
}

TimeSeriesPanel standardize(const TimeSeriesPanel& panel) {
  std::vector<std::vector<double>> channels;
  channels.reserve(panel.channel_count());
  for (std::size_t j = 0; j < panel.channel_count(); ++j) {
    channels.push_back(standardize_channel(panel.channel(ProcessId{j}), panel.labels()[j]));
  }
  return TimeSeriesPanel(panel.labels(), channels);
}

TEMatrix::TEMatrix(std::vector<ProcessId> row_ids, std::vector<ProcessId> col_ids)
    : rows_(std::move(row_ids)),
      cols_(std::move(col_ids)),
      values_(rows_.size() * cols_.size()),
      raw_(rows_.size() * cols_.size()) {}

void TEMatrix::set_raw(std::size_t r, std::size_t c, double raw) {
  if (rows_.at(r) == cols_.at(c)) {
    throw InvalidArgumentError("transfer entropy from a process to itself is undefined");
  }
  raw_[r * cols() + c] = raw;
  values_[r * cols() + c] = std::max(raw, 0.0);
}

std::optional<std::size_t> TEMatrix::row_of(ProcessId id) const {
  auto it = std::find(rows_.begin(), rows_.end(), id);
  if (it == rows_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - rows_.begin());
}

std::optional<std::size_t> TEMatrix::col_of(ProcessId id) const {
  auto it = std::find(cols_.begin(), cols_.end(), id);
  if (it == cols_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - cols_.begin());
}

std::optional<double> TEMatrix::value(ProcessId from, ProcessId to) const {
  auto r = row_of(from);
  auto c = col_of(to);
  if (!r || !c) return std::nullopt;
  return value(*r, *c);
}

std::optional<double> TEMatrix::raw(ProcessId from, ProcessId to) const {
  auto r = row_of(from);
  auto c = col_of(to);
  if (!r || !c) return std::nullopt;
  return raw(*r, *c);
}

}  // namespace tered
