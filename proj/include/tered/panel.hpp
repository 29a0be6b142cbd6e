#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tered {

/// Index of a channel inside a TimeSeriesPanel.
struct ProcessId {
  std::size_t index = 0;

  friend auto operator<=>(const ProcessId&, const ProcessId&) = default;
};

/// J labeled channels of N real samples each.
///
/// Samples of one channel are contiguous, so embedding windows are plain
/// reads from `channel(j)`. The constructor only enforces the shape (one label
/// per channel, equal lengths); value-level invariants are checked by
/// validate_panel().
class TimeSeriesPanel {
 public:
  TimeSeriesPanel() = default;
  TimeSeriesPanel(std::vector<std::string> labels, const std::vector<std::vector<double>>& channels);

  std::size_t channel_count() const noexcept { return labels_.size(); }
  std::size_t sample_count() const noexcept { return samples_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& label(ProcessId id) const { return labels_.at(id.index); }

  std::span<const double> channel(ProcessId id) const;
  double at(ProcessId id, std::size_t t) const { return channel(id)[t]; }

  /// Looks up a channel by label.
  std::optional<ProcessId> find(const std::string& label) const;
  ProcessId require(const std::string& label) const;

  friend bool operator==(const TimeSeriesPanel&, const TimeSeriesPanel&) = default;

 private:
  std::vector<std::string> labels_;
  std::size_t samples_ = 0;
  std::vector<double> data_;  // channel-major, J * N
};

/// Returns the panel unchanged if every sample is finite, labels are unique
/// and N >= 1. Throws NonFiniteError, DuplicateLabelError or LengthMismatchError.
TimeSeriesPanel validate_panel(const TimeSeriesPanel& panel);

/// Zero mean, unit (N-1) variance per channel. Throws ConstantChannelError when
/// a channel variance is below 1e-15.
TimeSeriesPanel standardize(const TimeSeriesPanel& panel);

/// Single-channel variant of standardize(); `label` is only used in errors.
std::vector<double> standardize_channel(std::span<const double> x, const std::string& label = "");

/// Pairwise transfer-entropy estimates in bits.
///
/// Entries whose source and target are the same process are absent
/// (std::nullopt), never zero. `values` are clamped at zero, `raw_values` are
/// the estimator output as-is.
class TEMatrix {
 public:
  TEMatrix() = default;
  TEMatrix(std::vector<ProcessId> row_ids, std::vector<ProcessId> col_ids);

  const std::vector<ProcessId>& row_ids() const noexcept { return rows_; }
  const std::vector<ProcessId>& col_ids() const noexcept { return cols_; }
  std::size_t rows() const noexcept { return rows_.size(); }
  std::size_t cols() const noexcept { return cols_.size(); }

  std::optional<double> value(std::size_t r, std::size_t c) const { return values_.at(r * cols() + c); }
  std::optional<double> raw(std::size_t r, std::size_t c) const { return raw_.at(r * cols() + c); }

  /// Lookup by process ids; nullopt for absent entries or ids not in the matrix.
  std::optional<double> value(ProcessId from, ProcessId to) const;
  std::optional<double> raw(ProcessId from, ProcessId to) const;

  /// Stores a raw estimate; the clamped value is derived. Setting a diagonal
  /// (same process) entry is rejected.
  void set_raw(std::size_t r, std::size_t c, double raw);

  std::optional<std::size_t> row_of(ProcessId id) const;
  std::optional<std::size_t> col_of(ProcessId id) const;

  friend bool operator==(const TEMatrix&, const TEMatrix&) = default;

 private:
  std::vector<ProcessId> rows_;
  std::vector<ProcessId> cols_;
  std::vector<std::optional<double>> values_;
  std::vector<std::optional<double>> raw_;
};

}  // namespace tered
