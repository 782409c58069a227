#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "config.hpp"
#include "qmem/calibration.hpp"
#include "qmem/decoherence.hpp"
#include "qmem/fidelity.hpp"
#include "qmem/microscopic.hpp"
#include "qmem/montecarlo.hpp"
#include "qmem/report.hpp"

namespace qmem::cli {
namespace {

using nlohmann::json;
using report::CsvWriter;

class Writer {
 public:
  explicit Writer(const RunOptions& options) : options_(options) {
    std::error_code ec;
    std::filesystem::create_directories(options_.out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + options_.out_dir.string());
  }

  void text(const std::string& file, const std::string& content) {
    const auto path = options_.out_dir / file;
    std::ofstream out(path, std::ios::binary);
    out << content;
    out.close();
    if (!out) throw IoError("cannot write " + path.string());
    written_.push_back(path);
  }

  void json_file(const std::string& file, const json& j) { text(file, j.dump(2) + "\n"); }

  const Outputs& written() const { return written_; }

 private:
  const RunOptions& options_;
  Outputs written_;
};

std::uint64_t seed_of(const Section& root, const RunOptions& options) {
  if (options.seed) {
    root.integer("seed", 0);  // still validated and marked as known
    return *options.seed;
  }
  return root.integer("seed");
}

StorageParams storage_from(const Section& s, std::optional<StorageParams> defaults = {}) {
  StorageParams p = defaults.value_or(StorageParams{});
  p.k = defaults ? s.number("k", p.k) : s.number("k");
  p.g = defaults ? s.number("g", p.g) : s.number("g");
  p.k_readout = s.number("k_readout", p.k_readout);
  p.atomic_init_var_x = s.number("atomic_init_var_x", p.atomic_init_var_x);
  p.atomic_init_var_p = s.number("atomic_init_var_p", p.atomic_init_var_p);
  s.finish();
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(s.path() + ": " + e.what());
  }
  return p;
}

CoherentSet set_from(const Section& s) {
  CoherentSet set{s.number("n_min", 0.0), s.number("n_max")};
  s.finish();
  try {
    set.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(s.path() + ": " + e.what());
  }
  return set;
}

QuadratureSpec quadrature_from(const std::optional<Section>& s) {
  QuadratureSpec q;
  if (!s) return q;
  q.tolerance = s->number("tolerance", q.tolerance);
  q.radial_nodes = s->integer("radial_nodes", q.radial_nodes);
  q.angular_nodes = s->integer("angular_nodes", q.angular_nodes);
  q.max_doublings = s->integer("max_doublings", q.max_doublings);
  s->finish();
  try {
    q.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(s->path() + ": " + e.what());
  }
  return q;
}

ChannelSummary channel_from(const Section& s, std::string* label) {
  if (label) *label = s.string("label", "channel");
  const std::string units = s.string("units", "canonical");
  if (units != "canonical" && units != "pn") {
    throw ConfigError(s.path() + ".units must be \"canonical\" or \"pn\"");
  }
  ChannelSummary c{s.number("gain_x"), s.number("gain_p"), s.number("var_x"), s.number("var_p")};
  s.finish();
  if (units == "pn") {
    c.var_x = from_pn_units(c.var_x);
    c.var_p = from_pn_units(c.var_p);
  }
  if (!(c.var_x > 0.0) || !(c.var_p > 0.0)) {
    throw ConfigError(s.path() + ": variances must be > 0");
  }
  return c;
}

json set_json(const CoherentSet& s) { return {{"n_min", s.n_min}, {"n_max", s.n_max}}; }

json channel_json(const ChannelSummary& c) {
  return {{"gain_x", c.gain_x}, {"gain_p", c.gain_p}, {"var_x", c.var_x}, {"var_p", c.var_p}};
}

// ---------------------------------------------------------------- store

void write_histogram_rows(CsvWriter& csv, const std::string& arm, const HistogramSeries& h) {
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    csv.cell(arm)
        .cell(h.bin_edges[i])
        .cell(h.bin_edges[i + 1])
        .cell(static_cast<unsigned long long>(h.counts[i]))
        .cell(h.scaled_by)
        .cell(h.reference->mean)
        .cell(h.reference->variance);
    csv.end_row();
  }
}

}  // namespace

Outputs cmd_store(const json& config, const RunOptions& options) {
  const Section root(config, "");
  const Section in = root.child("input");
  const CoherentInput input{in.number("x"), in.number("p")};
  in.finish();
  const StorageParams params = storage_from(root.child("storage"));
  const std::uint64_t trials = root.integer("trials");
  if (trials < kMinTrialsForEstimate) {
    throw ConfigError(fmt::format("trials must be >= {}", kMinTrialsForEstimate));
  }
  const std::uint64_t seed = seed_of(root, options);
  const std::uint64_t bins = root.integer("bins", 50);
  if (bins < 5) throw ConfigError("bins must be >= 5");
  const auto threads = static_cast<int>(root.integer("threads", 0));
  root.finish();

  const auto rec_p = run_series(input, params, Arm::P, trials, seed, threads);
  const auto rec_x = run_series(input, params, Arm::X, trials, seed, threads);
  const ReconstructedState state = estimate_channel(rec_p, rec_x, params.k_readout);
  const ChannelSummary analytic = store_channel(params);

  const HistogramSeries hist_p =
      make_histogram(rec_p, bins, display_scale(Arm::P, params.k_readout),
                     ideal_reference(input, Arm::P, params.k_readout));
  const HistogramSeries hist_x =
      make_histogram(rec_x, bins, display_scale(Arm::X, params.k_readout),
                     ideal_reference(input, Arm::X, params.k_readout));

  Writer w(options);
  if (options.wants("csv")) {
    std::ostringstream trials_csv;
    CsvWriter t(trials_csv, {"trial_id", "arm", "feedback_outcome", "verification_outcome"});
    for (const auto* series : {&rec_p, &rec_x}) {
      for (const auto& r : *series) {
        t.cell(static_cast<unsigned long long>(r.trial_id))
            .cell(std::string(arm_name(r.arm)))
            .cell(r.feedback_outcome)
            .cell(r.verification_outcome);
        t.end_row();
      }
    }
    w.text("store_trials.csv", trials_csv.str());

    std::ostringstream hist_csv;
    CsvWriter h(hist_csv, {"arm", "bin_left", "bin_right", "count", "scaled_by",
                           "reference_mean", "reference_var"});
    write_histogram_rows(h, "x", hist_x);
    write_histogram_rows(h, "p", hist_p);
    w.text("store_histograms.csv", hist_csv.str());
  }
  if (options.wants("json")) {
    json j;
    j["input"] = {{"x", input.x}, {"p", input.p}};
    j["trials_per_arm"] = trials;
    j["seed"] = seed;
    j["reconstructed"] = {
        {"mean_x", state.mean_x}, {"mean_x_se", state.mean_x_se},
        {"mean_p", state.mean_p}, {"mean_p_se", state.mean_p_se},
        {"var_x", state.var_x},   {"var_x_se", state.var_x_se},
        {"var_p", state.var_p},   {"var_p_se", state.var_p_se},
        {"var_x_negative", state.var_x_negative},
        {"var_p_negative", state.var_p_negative}};
    if (input.x != 0.0 && input.p != 0.0) {
      const GainEstimate g = estimate_gains(state, input);
      j["gains"] = {{"gain_x", g.gain_x},
                    {"gain_x_se", g.gain_x_se},
                    {"gain_p", g.gain_p},
                    {"gain_p_se", g.gain_p_se}};
    }
    j["analytic_channel"] = channel_json(analytic);
    j["analytic_mean_x"] = analytic.gain_x * input.p;
    j["analytic_mean_p"] = -analytic.gain_p * input.x;
    w.json_file("store_state.json", j);
  }
  if (options.wants("svg")) {
    w.text("store_histograms.svg",
           report::histogram_pair_svg(hist_x, "X_A memory (x-arm)", hist_p, "P_A memory (p-arm)"));
  }
  return w.written();
}

// ------------------------------------------------------------- fidelity

Outputs cmd_fidelity(const json& config, const RunOptions& options) {
  const Section root(config, "");
  std::vector<CoherentSet> sets;
  for (const auto& s : root.children("sets")) sets.push_back(set_from(s));
  if (sets.empty()) throw ConfigError("sets must not be empty");

  std::vector<std::pair<std::string, ChannelSummary>> channels;
  if (root.has("channels")) {
    for (const auto& c : root.children("channels")) {
      std::string label;
      const ChannelSummary ch = channel_from(c, &label);
      channels.emplace_back(label, ch);
    }
  } else {
    channels.emplace_back("ideal_css", store_channel(StorageParams{}));
  }
  const QuadratureSpec quad = quadrature_from(root.optional_child("quadrature"));
  const std::vector<double> boundary_gains =
      root.optional_numbers("boundary_gains").value_or(std::vector<double>{1.0});
  root.finish();

  struct Row {
    CoherentSet set;
    std::string label;
    ChannelSummary channel;
    double fidelity;
  };
  struct Boundary {
    std::string label;
    double g;
    double bound_pn;
    double below_33_pn;
  };
  std::vector<Row> rows;
  std::vector<Boundary> boundaries;
  // "33% below" the classical line is 0.67 of it.
  for (double g : boundary_gains) {
    const double bound = to_pn_units(classical_variance_bound(g));
    boundaries.push_back({fmt::format("gain_{}", g), g, bound, 0.67 * bound});
  }
  json optima = json::array();
  for (const auto& set : sets) {
    for (const auto& [label, ch] : channels) {
      rows.push_back({set, label, ch, average_fidelity(set, ch, quad).value});
    }
    const ClassicalOptimum opt = optimize_classical_gain(set.n_min, set.n_max);
    rows.push_back({set, "classical_optimum", classical_channel(opt.g_opt), opt.f_max});
    const double bound = to_pn_units(classical_variance_bound(opt.g_opt));
    boundaries.push_back({fmt::format("set_{}_{}", set.n_min, set.n_max), opt.g_opt, bound,
                          0.67 * bound});
    optima.push_back({{"set", set_json(set)}, {"g_opt", opt.g_opt}, {"f_max", opt.f_max}});
  }

  Writer w(options);
  if (options.wants("csv")) {
    std::ostringstream f;
    CsvWriter csv(f, {"n_min", "n_max", "label", "gain_x", "gain_p", "var_x", "var_p",
                      "fidelity"});
    for (const auto& r : rows) {
      csv.cell(r.set.n_min)
          .cell(r.set.n_max)
          .cell(r.label)
          .cell(r.channel.gain_x)
          .cell(r.channel.gain_p)
          .cell(r.channel.var_x)
          .cell(r.channel.var_p)
          .cell(r.fidelity);
      csv.end_row();
    }
    w.text("fidelity.csv", f.str());

    std::ostringstream b;
    CsvWriter bcsv(b, {"label", "g", "classical_bound_pn", "below_33pct_pn"});
    for (const auto& x : boundaries) {
      bcsv.cell(x.label).cell(x.g).cell(x.bound_pn).cell(x.below_33_pn);
      bcsv.end_row();
    }
    w.text("variance_boundaries.csv", b.str());
  }
  if (options.wants("json")) {
    json j;
    j["rows"] = json::array();
    for (const auto& r : rows) {
      j["rows"].push_back({{"set", set_json(r.set)},
                           {"label", r.label},
                           {"channel", channel_json(r.channel)},
                           {"fidelity", r.fidelity}});
    }
    j["classical_optima"] = optima;
    j["boundaries"] = json::array();
    for (const auto& x : boundaries) {
      j["boundaries"].push_back({{"label", x.label},
                                 {"g", x.g},
                                 {"classical_bound_pn", x.bound_pn},
                                 {"below_33pct_pn", x.below_33_pn}});
    }
    w.json_file("fidelity.json", j);
  }
  if (options.wants("svg")) {
    std::vector<report::Series> series;
    for (const auto& set : sets) {
      report::Series s{fmt::format("n in [{}, {}]", set.n_min, set.n_max), {}, {}, false};
      for (int i = 0; i <= 200; ++i) {
        const double g = i / 200.0;
        s.x.push_back(g);
        s.y.push_back(classical_fidelity(g, set.n_min, set.n_max));
      }
      series.push_back(std::move(s));
    }
    w.text("classical_fidelity.svg",
           report::line_plot_svg({"Measure-and-prepare fidelity", "gain g", "fidelity"}, series));
  }
  return w.written();
}

// ------------------------------------------------------------ calibrate

namespace {

std::vector<CalibrationPoint> read_calibration_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(path + ": empty calibration file");
  std::vector<CalibrationPoint> points;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 4) throw ConfigError(fmt::format("{}:{}: expected 4 columns", path, lineno));
    try {
      points.push_back({std::stod(cells[0]), std::stod(cells[1]), std::stod(cells[2]),
                        std::stoull(cells[3])});
    } catch (const std::exception&) {
      throw ConfigError(fmt::format("{}:{}: malformed number", path, lineno));
    }
  }
  return points;
}

}  // namespace

Outputs cmd_calibrate(const json& config, const RunOptions& options) {
  const Section root(config, "");
  std::vector<CalibrationPoint> points;
  json source;
  if (root.has("input_csv")) {
    const std::string path = root.string("input_csv", "");
    points = read_calibration_csv(path);
    source = {{"input_csv", path}};
  } else {
    const double k2 = root.number("k2_per_unit");
    const double quad_coeff = root.number("classical_coeff", 0.0);
    const std::vector<double> jx = root.numbers("jx_values");
    const std::uint64_t cycles = root.integer("n_cycles");
    const std::uint64_t seed = seed_of(root, options);
    SynthesisOptions synth;
    synth.shot_noise_cycles = root.integer("shot_noise_cycles", 0);
    try {
      points = synthesize_series(k2, quad_coeff, jx, cycles, seed, synth);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    source = {{"k2_per_unit", k2}, {"classical_coeff", quad_coeff}, {"n_cycles", cycles},
              {"seed", seed}};
  }
  const std::optional<double> jx_max = root.optional_number("jx_max");
  std::optional<PnlSensitivity> sens;
  if (auto s = root.optional_child("sensitivity")) {
    const CoherentSet set = set_from(s->child("set"));
    const ChannelSummary ch = channel_from(s->child("channel"), nullptr);
    const double rel = s->number("rel", 0.1);
    s->finish();
    sens = pnl_sensitivity(set, ch, rel);
  }
  root.finish();

  CalibrationFit fit;
  try {
    fit = fit_pnl(points, jx_max);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  Writer w(options);
  if (options.wants("csv")) {
    std::ostringstream f;
    CsvWriter csv(f, {"jx_proxy", "normalized_noise", "se", "n_cycles"});
    for (const auto& p : points) {
      csv.cell(p.jx_proxy).cell(p.normalized_noise).cell(p.se).cell(
          static_cast<unsigned long long>(p.n_cycles));
      csv.end_row();
    }
    w.text("calibration.csv", f.str());
  }
  if (options.wants("json")) {
    json j;
    j["source"] = source;
    j["fit"] = {{"slope", fit.slope},
                {"slope_se", fit.slope_se},
                {"quadratic_coeff", fit.quadratic_coeff},
                {"linear_coeff_quadratic_fit", fit.linear_coeff_quadratic_fit},
                {"chi2_per_dof", fit.chi2_per_dof},
                {"jx_max", fit.jx_max},
                {"n_used", fit.n_used}};
    if (sens) {
      j["pnl_sensitivity"] = {{"rel", sens->rel},
                              {"f_nominal", sens->f_nominal},
                              {"f_low", sens->f_low},
                              {"f_high", sens->f_high},
                              {"excursion", sens->excursion()}};
    }
    w.json_file("calibration_fit.json", j);
  }
  if (options.wants("svg")) {
    report::Series data{"measured", {}, {}, false};
    report::Series line{"linear fit", {}, {}, true};
    double xmax = 0.0;
    for (const auto& p : points) {
      data.x.push_back(p.jx_proxy);
      data.y.push_back(p.normalized_noise);
      xmax = std::max(xmax, p.jx_proxy);
    }
    line.x = {0.0, xmax};
    line.y = {0.0, fit.slope * xmax};
    w.text("calibration.svg",
           report::line_plot_svg({"Projection noise calibration", "spin size proxy",
                                  "normalized atomic noise"},
                                 {data, line}));
  }
  return w.written();
}

// ---------------------------------------------------------- microscopic

Outputs cmd_microscopic(const json& config, const RunOptions& options) {
  const Section root(config, "");
  micro::PhysicalParams p;
  std::optional<double> a_coupling;
  if (auto s = root.optional_child("physical")) {
    a_coupling = s->optional_number("a_coupling");
    p.j_x = s->number("j_x", p.j_x);
    const double flux = s->number("photon_flux", 5e14);
    p.photon_flux = [flux](double) { return flux; };
    p.omega = s->number("omega", p.omega);
    p.duration = s->number("duration", p.duration);
    p.bins = s->integer("bins", p.bins);
    s->finish();
  }
  const double k_target = root.number("k_target", 1.0);
  const double tolerance = root.number("tolerance", 0.01);
  std::vector<double> cycles = {3.25, 5.25, 10.25, 17.25, 32.25};
  if (auto c = root.optional_numbers("sweep_cycles")) cycles = *c;
  root.finish();
  try {
    p = a_coupling ? (p.a_coupling = *a_coupling, p) : micro::with_k_theory(p, k_target);
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  const micro::BinnedMap map = micro::propagate_binned(p);
  const micro::EffectiveCouplings eff = micro::demodulate(map, micro::lockin_weights(p));
  const double kt = micro::k_theory(p);
  const double rel_error = std::abs(eff.k_eff - kt) / kt;

  std::vector<double> omega_t;
  for (double c : cycles) omega_t.push_back(2.0 * std::numbers::pi * c);
  const auto sweep = micro::leakage_sweep(p, omega_t);
  const double slope = sweep.size() >= 2 ? micro::loglog_slope(sweep) : 0.0;
  const bool ok = rel_error < tolerance && eff.spurious() < tolerance;

  Writer w(options);
  if (options.wants("csv")) {
    std::ostringstream f;
    CsvWriter csv(f, {"omega_t", "k_eff", "k_theory", "leakage"});
    for (const auto& s : sweep) {
      csv.cell(s.omega_t).cell(s.k_eff).cell(s.k_theory).cell(s.leakage);
      csv.end_row();
    }
    w.text("microscopic_sweep.csv", f.str());
  }
  if (options.wants("json")) {
    json j;
    j["params"] = {{"a_coupling", p.a_coupling}, {"j_x", p.j_x},   {"omega", p.omega},
                   {"duration", p.duration},     {"bins", p.bins}, {"omega_t", p.omega * p.duration}};
    j["k_eff"] = eff.k_eff;
    j["k_back"] = eff.k_back;
    j["k_theory"] = kt;
    j["relative_error"] = rel_error;
    j["sin_leakage"] = eff.sin_leakage;
    j["cross_talk"] = eff.cross_talk;
    j["symplectic_defect"] = map.symplectic_defect();
    j["tolerance"] = tolerance;
    j["within_tolerance"] = ok;
    j["leakage_loglog_slope"] = slope;
    w.json_file("microscopic.json", j);
  }
  if (options.wants("svg") && !sweep.empty()) {
    report::Series s{"leakage / k_eff", {}, {}, false};
    report::Series ref{"1 / (omega T)", {}, {}, true};
    for (const auto& pt : sweep) {
      s.x.push_back(std::log10(pt.omega_t));
      s.y.push_back(std::log10(std::max(pt.leakage, 1e-300)));
      ref.x.push_back(std::log10(pt.omega_t));
      ref.y.push_back(-std::log10(pt.omega_t));
    }
    w.text("microscopic_sweep.svg",
           report::line_plot_svg({"Sideband leakage", "log10(omega T)", "log10(leakage)"},
                                 {s, ref}));
  }
  if (!ok) {
    throw NumericalError(fmt::format(
        "microscopic: |k_eff - k_theory| / k_theory = {:.3g}, spurious = {:.3g}, tolerance {:g}",
        rel_error, eff.spurious(), tolerance));
  }
  return w.written();
}

// ------------------------------------------------------------- lifetime

Outputs cmd_lifetime(const json& config, const RunOptions& options) {
  const Section root(config, "");
  CoherentSet set{0.0, 10.0};
  if (auto s = root.optional_child("set")) set = set_from(*s);
  StorageParams defaults;
  defaults.k = 0.84;
  defaults.g = 0.80;
  StorageParams params = defaults;
  if (auto s = root.optional_child("storage")) params = storage_from(*s, defaults);
  const double excess = root.number("excess_noise_rate", 0.0);
  const std::optional<double> tau_given = root.optional_number("tau");
  const double t_cross = root.number("t_cross", 4e-3);
  const double t_max = root.number("t_max", 10e-3);
  const double step = root.number("t_step", 0.5e-3);
  root.finish();
  if (!(step > 0.0) || !(t_max > 0.0)) throw ConfigError("t_max and t_step must be > 0");

  const ClassicalOptimum opt = optimize_classical_gain(set.n_min, set.n_max);
  const double tau = tau_given ? *tau_given : calibrate_tau(set, params, excess, t_cross, opt.f_max);
  const DecayParams decay{tau, excess};
  try {
    decay.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  std::vector<double> times;
  const auto n = static_cast<std::size_t>(std::llround(t_max / step));
  for (std::size_t i = 0; i <= n; ++i) times.push_back(static_cast<double>(i) * step);
  const auto curve = fidelity_vs_time(set, params, decay, times);
  const auto crossing = find_crossing(curve, opt.f_max);
  bool monotone = true;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    monotone = monotone && curve[i].fidelity <= curve[i - 1].fidelity;
  }

  Writer w(options);
  if (options.wants("csv")) {
    std::ostringstream f;
    CsvWriter csv(f, {"t_ms", "fidelity", "classical_limit"});
    for (const auto& pt : curve) {
      csv.cell(pt.t * 1e3).cell(pt.fidelity).cell(opt.f_max);
      csv.end_row();
    }
    w.text("lifetime.csv", f.str());
  }
  if (options.wants("json")) {
    json j;
    j["set"] = set_json(set);
    j["storage"] = {{"k", params.k}, {"g", params.g}};
    j["channel_t0"] = channel_json(store_channel(params));
    j["tau_s"] = tau;
    j["tau_calibrated"] = !tau_given.has_value();
    j["excess_noise_rate"] = excess;
    j["classical_limit"] = opt.f_max;
    j["classical_g_opt"] = opt.g_opt;
    j["crossing_ms"] = crossing ? json(*crossing * 1e3) : json(nullptr);
    j["monotone_non_increasing"] = monotone;
    j["fidelity_t0"] = curve.front().fidelity;
    j["note"] = "t = 0 value is the model's own; no backward extrapolation from data";
    w.json_file("lifetime.json", j);
  }
  if (options.wants("svg")) {
    report::Series f{"fidelity", {}, {}, false};
    report::Series c{"classical limit", {}, {}, true};
    for (const auto& pt : curve) {
      f.x.push_back(pt.t * 1e3);
      f.y.push_back(pt.fidelity);
      c.x.push_back(pt.t * 1e3);
      c.y.push_back(opt.f_max);
    }
    w.text("lifetime.svg",
           report::line_plot_svg({"Fidelity vs storage time", "t (ms)", "fidelity"}, {f, c}));
  }
  return w.written();
}

// ------------------------------------------------------------- dispatch

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"store", "fidelity", "calibrate", "microscopic",
                                                 "lifetime"};
  return names;
}

int run_command(const std::string& name, const json& config, const RunOptions& options,
                std::ostream& log, std::ostream& err) {
  try {
    Outputs out;
    if (name == "store") out = cmd_store(config, options);
    else if (name == "fidelity") out = cmd_fidelity(config, options);
    else if (name == "calibrate") out = cmd_calibrate(config, options);
    else if (name == "microscopic") out = cmd_microscopic(config, options);
    else if (name == "lifetime") out = cmd_lifetime(config, options);
    else throw ConfigError("unknown command: " + name);
    for (const auto& p : out) log << p.string() << '\n';
    return kOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigFailure;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kIoFailure;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kIoFailure;
  }
}

}  // namespace qmem::cli
