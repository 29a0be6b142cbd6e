#include "tered/io.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>

#include "tered/errors.hpp"

namespace tered::io {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string::npos) nl = text.size();
    std::string line = text.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    start = nl + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& field, double& out) {
  const std::string s = trim(field);
  if (s.empty()) return false;
  const char* first = s.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::string shortest(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string fixed4(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v + 0.0, std::chars_format::fixed, 4);
  return std::string(buf, r.ptr);
}

std::string fixed6(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v + 0.0, std::chars_format::fixed, 6);
  return std::string(buf, r.ptr);
}

const std::string& label_of(const std::vector<std::string>& labels, ProcessId id) {
  if (id.index >= labels.size()) throw InvalidArgumentError("process id " + std::to_string(id.index) + " has no label");
  return labels[id.index];
}

json ids_to_labels(const std::vector<std::string>& labels, const std::vector<ProcessId>& ids) {
  json out = json::array();
  for (auto id : ids) out.push_back(label_of(labels, id));
  return out;
}

json optional_number(std::optional<double> v) { return v ? json(*v) : json(nullptr); }

json matrix_json(const TEMatrix& m, const std::vector<std::string>& labels) {
  json raw = json::array(), values = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json raw_row = json::array(), val_row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) {
      raw_row.push_back(optional_number(m.raw(r, c)));
      val_row.push_back(optional_number(m.value(r, c)));
    }
    raw.push_back(std::move(raw_row));
    values.push_back(std::move(val_row));
  }
  return {{"from", ids_to_labels(labels, m.row_ids())},
          {"to", ids_to_labels(labels, m.col_ids())},
          {"raw", std::move(raw)},
          {"values", std::move(values)}};
}

}  // namespace

TimeSeriesPanel load_panel_csv(const fs::path& path) {
  std::string text = read_file(path);
  if (text.starts_with("\xEF\xBB\xBF")) text.erase(0, 3);
  const auto lines = split_lines(text);
  if (lines.empty()) throw ParseError(1, 1, "missing header row");

  std::vector<std::string> labels;
  for (const auto& f : split_fields(lines[0])) labels.push_back(trim(f));
  for (std::size_t c = 0; c < labels.size(); ++c) {
    if (labels[c].empty()) throw ParseError(1, c + 1, "empty channel label");
  }

  std::vector<std::vector<double>> data(labels.size());
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto fields = split_fields(lines[li]);
    if (fields.size() != labels.size()) {
      throw ParseError(li + 1, std::min(fields.size(), labels.size()) + 1,
                       "expected " + std::to_string(labels.size()) + " fields, found " + std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      double v = 0.0;
      if (!parse_double(fields[c], v)) throw ParseError(li + 1, c + 1, "not a number: '" + fields[c] + "'");
      if (!std::isfinite(v)) {
        throw NonFiniteError(labels[c], li - 1, li + 1, c + 1);
      }
      data[c].push_back(v);
    }
  }
  return validate_panel(TimeSeriesPanel(std::move(labels), std::move(data)));
}

void save_panel_csv(const TimeSeriesPanel& panel, const fs::path& path) {
  auto out = open_out(path);
  const auto& labels = panel.labels();
  for (std::size_t c = 0; c < labels.size(); ++c) out << (c ? "," : "") << labels[c];
  out << '\n';
  for (std::size_t t = 0; t < panel.sample_count(); ++t) {
    for (std::size_t c = 0; c < labels.size(); ++c) out << (c ? "," : "") << shortest(panel.at(ProcessId{c}, t));
    out << '\n';
  }
  finish(out, path);
}

void save_te_matrix_csv(const TEMatrix& m, const std::vector<std::string>& labels, const fs::path& path) {
  auto out = open_out(path);
  out << "from/to";
  for (auto id : m.col_ids()) out << ',' << label_of(labels, id);
  out << '\n';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    out << label_of(labels, m.row_ids()[r]);
    for (std::size_t c = 0; c < m.cols(); ++c) {
      const auto v = m.value(r, c);
      out << ',' << (v ? fixed4(*v) : std::string("--"));
    }
    out << '\n';
  }
  finish(out, path);
}

TEMatrix load_te_matrix_csv(const fs::path& path, const std::vector<std::string>& labels) {
  const auto lines = split_lines(read_file(path));
  if (lines.empty()) throw ParseError(1, 1, "missing header row");
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < labels.size(); ++i) index.emplace(labels[i], i);
  auto resolve = [&](const std::string& label, std::size_t line, std::size_t col) {
    const auto it = index.find(trim(label));
    if (it == index.end()) throw ParseError(line, col, "unknown label '" + label + "'");
    return ProcessId{it->second};
  };

  const auto header = split_fields(lines[0]);
  if (trim(header[0]) != "from/to") throw ParseError(1, 1, "first header cell must be 'from/to'");
  std::vector<ProcessId> cols, rows;
  for (std::size_t c = 1; c < header.size(); ++c) cols.push_back(resolve(header[c], 1, c + 1));
  for (std::size_t li = 1; li < lines.size(); ++li) rows.push_back(resolve(split_fields(lines[li])[0], li + 1, 1));

  TEMatrix m(rows, cols);
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto fields = split_fields(lines[li]);
    if (fields.size() != header.size()) throw ParseError(li + 1, std::min(fields.size(), header.size()) + 1, "ragged row");
    for (std::size_t c = 1; c < fields.size(); ++c) {
      if (trim(fields[c]) == "--") continue;
      double v = 0.0;
      if (!parse_double(fields[c], v) || !std::isfinite(v)) {
        throw ParseError(li + 1, c + 1, "not a number: '" + fields[c] + "'");
      }
      m.set_raw(li - 1, c - 1, v);
    }
  }
  return m;
}

json to_json(const ReportBundle& b) {
  json reports = json::array();
  for (const auto& r : b.reports) {
    json te_to_target = json::object();
    if (const auto col = b.to_targets.col_of(r.target)) {
      for (std::size_t row = 0; row < b.to_targets.rows(); ++row) {
        const auto raw = b.to_targets.raw(row, *col);
        if (!raw) continue;
        te_to_target[label_of(b.labels, b.to_targets.row_ids()[row])] = {{"raw", *raw},
                                                                          {"value", *b.to_targets.value(row, *col)}};
      }
    }
    reports.push_back({{"target", label_of(b.labels, r.target)},
                       {"target_relevant", ids_to_labels(b.labels, r.target_relevant)},
                       {"hidden", label_of(b.labels, r.hidden)},
                       {"relevant", ids_to_labels(b.labels, r.relevant)},
                       {"r_phi_to_z", r.r_phi_to_z},
                       {"r_phi_to_set", r.r_phi_to_set},
                       {"r_set_to_z", r.r_set_to_z},
                       {"bound", r.bound},
                       {"degenerate_flags", r.degenerate_flags},
                       {"te_to_target", std::move(te_to_target)}});
  }
  return {{"provenance",
           {{"tool", kToolName},
            {"version", kToolVersion},
            {"seed", b.seed},
            {"config", b.config},
            {"generated_at", b.generated_at}}},
          {"sources", ids_to_labels(b.labels, b.sources)},
          {"targets", ids_to_labels(b.labels, b.targets)},
          {"reports", std::move(reports)},
          {"te_matrix", matrix_json(b.to_targets, b.labels)},
          {"source_te_matrix", matrix_json(b.among_sources, b.labels)}};
}

void save_reports_json(const ReportBundle& b, const fs::path& path) {
  auto out = open_out(path);
  out << to_json(b).dump(2) << '\n';
  finish(out, path);
}

std::vector<fs::path> emit_plot_data(const ReportBundle& b, const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create '" + out_dir.string() + "': " + ec.message());

  std::vector<fs::path> written;
  {
    const auto path = out_dir / "curves.csv";
    auto out = open_out(path);
    out << "target,R_phi_to_z,R_phi_to_set,R_set_to_z,bound\n";
    for (const auto& r : b.reports) {
      out << label_of(b.labels, r.target) << ',' << fixed6(r.r_phi_to_z) << ',' << fixed6(r.r_phi_to_set) << ','
          << fixed6(r.r_set_to_z) << ',' << fixed6(r.bound) << '\n';
    }
    finish(out, path);
    written.push_back(path);
  }

  auto histogram = [&](const char* name, auto&& members_of) {
    std::map<std::size_t, std::size_t> counts;
    for (auto s : b.sources) counts[s.index] = 0;
    for (const auto& r : b.reports) {
      for (auto id : members_of(r)) ++counts[id.index];
    }
    const auto path = out_dir / name;
    auto out = open_out(path);
    out << "source,count\n";
    for (auto s : b.sources) out << label_of(b.labels, s) << ',' << counts[s.index] << '\n';
    finish(out, path);
    written.push_back(path);
  };
  // A hidden process picked by convention (nothing to choose from) is not counted.
  histogram("hidden_histogram.csv", [](const select::RedundancyReport& r) {
    const auto& f = r.degenerate_flags;
    const bool conventional = std::find(f.begin(), f.end(), select::kFlagAllZeroRedundancy) != f.end() ||
                              std::find(f.begin(), f.end(), select::kFlagEmptyCandidateSet) != f.end();
    return conventional ? std::vector<ProcessId>{} : std::vector<ProcessId>{r.hidden};
  });
  histogram("relevant_histogram.csv", [](const select::RedundancyReport& r) { return r.relevant; });
  histogram("target_relevant_histogram.csv", [](const select::RedundancyReport& r) { return r.target_relevant; });
  return written;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace tered::io
