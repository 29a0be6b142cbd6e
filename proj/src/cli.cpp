#include "tered/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "tered/discrete_info.hpp"
#include "tered/errors.hpp"
#include "tered/gauss_analytic.hpp"
#include "tered/io.hpp"
#include "tered/linsim.hpp"
#include "tered/redundancy.hpp"
#include "tered/te_estimator.hpp"

namespace tered::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct EstimationFlags {
  std::vector<std::string> sources;
  std::vector<std::string> targets;
  std::size_t max_lag = 5;
  std::size_t knn = 10;
  std::size_t horizon = 1;
  double jitter = 1e-8;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
};

void add_estimation_flags(CLI::App* app, EstimationFlags& f) {
  app->add_option("--sources", f.sources, "Source channel labels (comma separated; default: all)")->delimiter(',');
  app->add_option("--targets", f.targets, "Target channel labels (comma separated; default: all)")->delimiter(',');
  app->add_option("--max-lag", f.max_lag, "History length L")->capture_default_str()->check(CLI::PositiveNumber);
  app->add_option("--knn", f.knn, "Number of nearest neighbours k")->capture_default_str()->check(CLI::PositiveNumber);
  app->add_option("--horizon", f.horizon, "Prediction horizon u")->capture_default_str()->check(CLI::PositiveNumber);
  app->add_option("--jitter", f.jitter, "Tie-breaking noise amplitude (in standard deviations)")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  app->add_option("--seed", f.seed, "Seed of the tie-breaking noise")->capture_default_str();
  app->add_option("--workers", f.workers, "Worker threads (0 = all cores); does not affect results")
      ->capture_default_str();
}

te::EmbeddingSpec to_spec(const EstimationFlags& f) {
  te::EmbeddingSpec s;
  s.max_lag = f.max_lag;
  s.k_neighbors = f.knn;
  s.horizon = f.horizon;
  s.jitter_amplitude = f.jitter;
  s.seed = f.seed;
  return s;
}

json estimation_json(const EstimationFlags& f) {
  return {{"max_lag", f.max_lag}, {"knn", f.knn}, {"horizon", f.horizon}, {"jitter_amplitude", f.jitter}, {"seed", f.seed}};
}

std::vector<ProcessId> resolve(const TimeSeriesPanel& panel, const std::vector<std::string>& labels) {
  std::vector<ProcessId> out;
  if (labels.empty()) {
    for (std::size_t i = 0; i < panel.channel_count(); ++i) out.push_back(ProcessId{i});
    return out;
  }
  for (const auto& l : labels) out.push_back(panel.require(l));
  return out;
}

std::vector<std::string> labels_of(const TimeSeriesPanel& panel, const std::vector<ProcessId>& ids) {
  std::vector<std::string> out;
  for (auto id : ids) out.push_back(panel.label(id));
  return out;
}

void write_sidecar(const fs::path& output, const json& config, std::uint64_t seed) {
  fs::path path = output;
  path += ".json";
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  const json doc = {{"provenance",
                     {{"tool", io::kToolName},
                      {"version", io::kToolVersion},
                      {"seed", seed},
                      {"config", config},
                      {"generated_at", io::utc_timestamp()}}}};
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

std::string num(double v, int decimals) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v + 0.0, std::chars_format::fixed, decimals);
  return std::string(buf, r.ptr);
}

linsim::LagCouplingSpec read_network(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  json j;
  try {
    j = json::parse(in);
    linsim::LagCouplingSpec s;
    s.n_processes = j.at("n_processes").get<std::size_t>();
    for (const auto& c : j.value("couplings", json::array())) {
      s.couplings.push_back({c.at("from").get<std::size_t>(), c.at("to").get<std::size_t>(),
                             c.value("lag", std::size_t{1}), c.at("gain").get<double>()});
    }
    s.noise_std = j.value("noise_std", std::vector<double>(s.n_processes, 1.0));
    s.labels = j.value("labels", std::vector<std::string>{});
    return s;
  } catch (const json::exception& e) {
    throw ParseError(0, 0, "network spec '" + path.string() + "': " + e.what());
  }
}

// ---- simulate ------------------------------------------------------------

struct SimulateFlags {
  std::string model = "benchmark";
  std::string network;
  std::string output;
  double a = 1.0 / 3, b = 0.2, c = 0.5, d = 1.0 / 3, e = 1.0 / 3;
  std::vector<double> noise_std{1, 1, 1, 1, 1};
  std::size_t length = 5000;
  std::size_t burn_in = 1000;
  std::uint64_t seed = 0;
};

int do_simulate(const SimulateFlags& f, std::ostream& out) {
  TimeSeriesPanel panel;
  json config = {{"command", "simulate"}, {"model", f.model}, {"length", f.length}, {"burn_in", f.burn_in}, {"seed", f.seed}};
  if (f.model == "benchmark") {
    if (f.noise_std.size() != 5) throw InvalidArgumentError("--noise-std needs 5 values (psi, phi, X, Y, Z)");
    linsim::LinSysParams p{f.a, f.b, f.c, f.d, f.e};
    std::copy(f.noise_std.begin(), f.noise_std.end(), p.noise_std.begin());
    p.length = f.length;
    p.burn_in = f.burn_in;
    p.seed = f.seed;
    config.update({{"a", f.a}, {"b", f.b}, {"c", f.c}, {"d", f.d}, {"e", f.e}, {"noise_std", f.noise_std}});
    panel = linsim::simulate_benchmark(p);
  } else {
    if (f.network.empty()) throw InvalidArgumentError("--model network needs --network <spec.json>");
    auto s = read_network(f.network);
    s.length = f.length;
    s.burn_in = f.burn_in;
    s.seed = f.seed;
    config["network"] = f.network;
    panel = linsim::simulate_lag_network(s);
  }
  io::save_panel_csv(panel, f.output);
  write_sidecar(f.output, config, f.seed);
  out << "wrote " << panel.channel_count() << " channels x " << panel.sample_count() << " samples to " << f.output
      << '\n';
  return kExitOk;
}

// ---- te-matrix -----------------------------------------------------------

int do_te_matrix(const std::string& input, const std::string& output, const EstimationFlags& f, std::ostream& out) {
  const auto panel = io::load_panel_csv(input);
  const auto sources = resolve(panel, f.sources);
  const auto targets = resolve(panel, f.targets);
  const auto m = te::te_matrix(panel, sources, targets, to_spec(f), f.workers);
  io::save_te_matrix_csv(m, panel.labels(), output);
  json config = {{"command", "te-matrix"},
                 {"input", input},
                 {"sources", labels_of(panel, sources)},
                 {"targets", labels_of(panel, targets)},
                 {"estimation", estimation_json(f)}};
  write_sidecar(output, config, f.seed);
  out << "wrote " << m.rows() << " x " << m.cols() << " TE matrix (bits) to " << output << '\n';
  return kExitOk;
}

// ---- select --------------------------------------------------------------

int do_select(const std::string& input, const std::string& output, const EstimationFlags& f,
              const select::SelectionConfig& cfg, std::ostream& out) {
  const auto panel = io::load_panel_csv(input);
  const auto sources = resolve(panel, f.sources);
  const auto targets = resolve(panel, f.targets);
  const auto result = select::run_pipeline(panel, targets, sources, to_spec(f), cfg, f.workers);

  io::ReportBundle b;
  b.labels = panel.labels();
  b.sources = result.to_targets.row_ids();
  b.targets = targets;
  b.reports = result.reports;
  b.to_targets = result.to_targets;
  b.among_sources = result.among_sources;
  b.seed = f.seed;
  b.generated_at = io::utc_timestamp();
  b.config = {{"command", "select"},
              {"input", input},
              {"sources", labels_of(panel, sources)},
              {"targets", labels_of(panel, targets)},
              {"estimation", estimation_json(f)},
              {"selection", {{"eta_t", cfg.eta_t}, {"eta_h", cfg.eta_h}}}};

  const fs::path dir(output);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
  io::save_reports_json(b, dir / "reports.json");
  io::save_te_matrix_csv(b.to_targets, b.labels, dir / "te_matrix.csv");
  io::save_te_matrix_csv(b.among_sources, b.labels, dir / "source_te_matrix.csv");
  io::emit_plot_data(b, dir);

  for (const auto& r : b.reports) {
    out << "target " << b.labels[r.target.index] << ": hidden " << b.labels[r.hidden.index] << ", relevant {";
    for (std::size_t i = 0; i < r.relevant.size(); ++i) out << (i ? ", " : "") << b.labels[r.relevant[i].index];
    out << "}, bound " << num(r.bound, 4) << " bits";
    for (const auto& flag : r.degenerate_flags) out << " [" << flag << "]";
    out << '\n';
  }
  return kExitOk;
}

// ---- closed-form ---------------------------------------------------------

struct ClosedFormFlags {
  std::vector<double> c{0.25, 0.5, 1, 2};
  std::vector<double> d{0.25, 0.5, 1, 2};
  std::vector<double> e{0.25, 0.5, 1, 2};
  std::vector<double> sigma2{0.5, 1, 4, 9};
  std::string variant = gauss::to_string(gauss::kDefaultVariant);
  std::string output;
};

int do_closed_form(const ClosedFormFlags& f, std::ostream& out) {
  const auto variant = gauss::parse_variant(f.variant);
  std::ostringstream csv;
  csv << "c,d,e,sigma_phi_sq,variant,te_phi_to_x,te_phi_to_z,te_x_to_z,min_term,argmin,eq11_region,xi1,xi2\n";
  for (double s2 : f.sigma2) {
    for (double c : f.c) {
      for (double d : f.d) {
        for (double e : f.e) {
          const gauss::Lemma2Params p{c, d, e, s2, variant};
          const double px = gauss::te_phi_to_x(p), pz = gauss::te_phi_to_z(p), xz = gauss::te_x_to_z(p);
          auto label = gauss::CaseLabel::phi_to_z;
          double best = pz;
          if (px < best) label = gauss::CaseLabel::phi_to_x, best = px;
          if (xz < best) label = gauss::CaseLabel::x_to_z, best = xz;
          std::string region, xi1, xi2;
          if (c == d && e == 1.0) {
            if (const auto r = gauss::eq11_region(c, s2)) {
              region = gauss::to_string(r->label);
              if (r->xi1) xi1 = num(*r->xi1, 6);
              if (r->xi2) xi2 = num(*r->xi2, 6);
            }
          }
          csv << num(c, 4) << ',' << num(d, 4) << ',' << num(e, 4) << ',' << num(s2, 4) << ',' << f.variant << ','
              << num(px, 6) << ',' << num(pz, 6) << ',' << num(xz, 6) << ',' << num(best, 6) << ','
              << gauss::to_string(label) << ',' << region << ',' << xi1 << ',' << xi2 << '\n';
        }
      }
    }
  }
  if (f.output.empty()) {
    out << csv.str();
  } else {
    std::ofstream file(f.output, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot open '" + f.output + "' for writing");
    file << csv.str();
    if (!file) throw IoError("write to '" + f.output + "' failed");
    out << "wrote closed forms to " << f.output << '\n';
  }
  return kExitOk;
}

// ---- discrete-demo -------------------------------------------------------

int do_discrete_demo(double pa, double pb, double pc, std::ostream& out) {
  using namespace discrete;
  const TripleExample t{FinitePmf::over_symbols({1 - pa, pa}), FinitePmf::over_symbols({1 - pb, pb}),
                        FinitePmf::over_symbols({1 - pc, pc})};
  const auto abc = t.joint();
  // Composite symbols X=(A,B), Y=(A,C), Z=(B,C) as 2-bit codes.
  std::vector<Outcome> xyz;
  for (const auto& o : abc.outcomes()) xyz.push_back({2 * o[0] + o[1], 2 * o[0] + o[2], 2 * o[1] + o[2]});
  const FinitePmf composite(xyz, abc.probs());
  const std::size_t x[] = {0}, y[] = {1}, z[] = {2};

  out << "A, B, C independent bits with P(1) = " << num(pa, 4) << ", " << num(pb, 4) << ", " << num(pc, 4) << '\n'
      << "X = (A,B), Y = (A,C), Z = (B,C)\n"
      << "I(X;Y) = " << num(mutual_information(composite, x, y), 6) << " bits\n"
      << "I(X;Z) = " << num(mutual_information(composite, x, z), 6) << " bits\n"
      << "I(Y;Z) = " << num(mutual_information(composite, y, z), 6) << " bits\n"
      << "pairwise minimum MI = " << num(pairwise_min_mi(t), 6) << " bits\n"
      << "redundancy of minimal sufficient statistics = " << num(mss_redundancy(t), 6) << " bits\n"
      << "I_min(X,Y;Z) = " << num(i_min_discrete(composite), 6) << " bits\n";
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Directed redundancy analysis of multichannel time series", "tered"};
  app.require_subcommand(1);
  app.set_version_flag("--version", io::kToolVersion);

  SimulateFlags sim;
  auto* simulate = app.add_subcommand("simulate", "Simulate the benchmark system or a lag network to a panel CSV");
  simulate->add_option("--model", sim.model, "benchmark or network")
      ->capture_default_str()
      ->check(CLI::IsMember({"benchmark", "network"}));
  simulate->add_option("--network", sim.network, "Lag network spec (JSON) for --model network");
  simulate->add_option("-o,--output", sim.output, "Panel CSV to write")->required();
  simulate->add_option("--a", sim.a, "AR coefficient of psi and phi")->capture_default_str();
  simulate->add_option("--b", sim.b, "AR coefficient of X, Y and Z")->capture_default_str();
  simulate->add_option("--c", sim.c, "phi -> X, Y gain")->capture_default_str();
  simulate->add_option("--d", sim.d, "X, Y -> Z gain")->capture_default_str();
  simulate->add_option("--e", sim.e, "psi -> Z gain")->capture_default_str();
  simulate->add_option("--noise-std", sim.noise_std, "Noise std of psi, phi, X, Y, Z")->delimiter(',');
  simulate->add_option("--length", sim.length, "Samples kept")->capture_default_str()->check(CLI::PositiveNumber);
  simulate->add_option("--burn-in", sim.burn_in, "Samples discarded first")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Noise seed")->capture_default_str();

  std::string tm_input, tm_output;
  EstimationFlags tm_flags;
  auto* te_matrix = app.add_subcommand("te-matrix", "Estimate the transfer entropy matrix of a panel");
  te_matrix->add_option("-i,--input", tm_input, "Panel CSV")->required();
  te_matrix->add_option("-o,--output", tm_output, "TE matrix CSV to write")->required();
  add_estimation_flags(te_matrix, tm_flags);

  std::string sel_input, sel_output;
  EstimationFlags sel_flags;
  select::SelectionConfig sel_cfg;
  auto* sel = app.add_subcommand("select", "Run the redundancy selection and write reports and plot data");
  sel->add_option("-i,--input", sel_input, "Panel CSV")->required();
  sel->add_option("-o,--output", sel_output, "Output directory")->required();
  add_estimation_flags(sel, sel_flags);
  sel->add_option("--eta-t", sel_cfg.eta_t, "Target-relevant mass fraction")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  sel->add_option("--eta-h", sel_cfg.eta_h, "Relevant-source mass fraction")->capture_default_str()->check(CLI::Range(0.0, 1.0));

  ClosedFormFlags cf;
  auto* closed = app.add_subcommand("closed-form", "Evaluate the closed-form TEs and case regions over a grid");
  closed->add_option("--c", cf.c, "Values of c")->delimiter(',');
  closed->add_option("--d", cf.d, "Values of d")->delimiter(',');
  closed->add_option("--e", cf.e, "Values of e")->delimiter(',');
  closed->add_option("--sigma2", cf.sigma2, "Values of the stationary variance of phi")->delimiter(',');
  closed->add_option("--variant", cf.variant, "X -> Z closed form: printed or rederived")
      ->capture_default_str()
      ->check(CLI::IsMember({"printed", "rederived"}));
  closed->add_option("-o,--output", cf.output, "CSV to write (default: standard output)");

  double pa = 0.5, pb = 0.5, pc = 0.5;
  auto* demo = app.add_subcommand("discrete-demo", "Print the three-bit redundancy example");
  demo->add_option("--p-a", pa, "P(A = 1)")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  demo->add_option("--p-b", pb, "P(B = 1)")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  demo->add_option("--p-c", pc, "P(C = 1)")->capture_default_str()->check(CLI::Range(0.0, 1.0));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*simulate) return do_simulate(sim, out);
    if (*te_matrix) return do_te_matrix(tm_input, tm_output, tm_flags, out);
    if (*sel) return do_select(sel_input, sel_output, sel_flags, sel_cfg, out);
    if (*closed) return do_closed_form(cf, out);
    if (*demo) return do_discrete_demo(pa, pb, pc, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace tered::cli
