// Copyright 2026 The ncfisher Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ncf/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "ncf/dataset.hpp"
#include "ncf/errors.hpp"
#include "ncf/estimators.hpp"
#include "ncf/fluctuation.hpp"
#include "ncf/monte_carlo.hpp"
#include "ncf/phase_maps.hpp"

namespace ncf {

namespace {

Json opt(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

Json envelope(const RunConfig& c, Json results, const Json& warnings) {
  Json doc;
  doc["command"] = to_string(c.command);
  doc["config_echo"] = c.echo;
  doc["seed"] = c.seed;
  doc["results"] = std::move(results);
  doc["warnings"] = warnings;
  return doc;
}

Json phase_json(const PhaseCheck& phase) {
  Json d = Json::object();
  for (const auto& [name, value] : phase.derivatives) d[name] = value;
  return {{"status", to_string(phase.status)},
          {"valid", phase.valid()},
          {"reason", phase.reason},
          {"derivatives", d}};
}

Json variance_json(const VarianceReport& r) {
  return {{"beta", r.beta},         {"theta1", opt(r.theta1)},
          {"vartheta", opt(r.vartheta)}, {"theta2", opt(r.theta2)},
          {"eta1", opt(r.eta1)},    {"eta2", opt(r.eta2)},
          {"eta3", opt(r.eta3)},    {"eta", opt(r.eta)}};
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

double normal_quantile(double u) {
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (normal_cdf(mid) < u ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

CommandOutput cmd_phase(const RunConfig& config) {
  ModelSpec m = config.model;
  m.finalize();
  Json rows = Json::array();
  Json warnings = Json::array();
  CsvTable table{"phase", {}, {}};
  const SpectralLaw h = m.bulk;
  const Json no_value = nullptr;

  if (m.kind == ModelKind::cca) {
    if (config.c1 || config.c2) {
      warnings.push_back("ratio overrides are ignored for CCA models");
    }
    const CcaContext ctx =
        make_cca_context(m.bulk, {m.p, m.q, m.n}, config.cca_form);
    const bool zero_bulk =
        m.bulk.atoms().size() == 1 && m.bulk.max_location() == 0.0;
    table.header = {"alpha", "f", "psi_xi", "psi_c", "psi", "t", "valid",
                    "status", "eta1", "eta2", "eta3", "eta", "phi"};
    for (const SpikeSpec& s : m.spikes) {
      const CcaLimit lim = cca_chain(s.value, ctx);
      Json row = {{"alpha", s.value},     {"f", opt(lim.f)},
                  {"psi_xi", opt(lim.psi_xi)}, {"psi_c", opt(lim.psi_c)},
                  {"psi", opt(lim.psi)},  {"t", opt(lim.t)},
                  {"phase", phase_json(lim.phase)},
                  {"failed_stage", lim.failed_stage}};
      std::optional<CcaScale> sc;
      if (lim.phase.valid()) {
        sc = eta(lim, ctx);
        row["variance"] = {{"eta1", sc->eta1},
                           {"eta2", sc->eta2},
                           {"eta3", sc->eta3},
                           {"eta", sc->eta},
                           {"beta", beta(m.field)}};
      } else {
        warnings.push_back("alpha = " + std::to_string(s.value) +
                           " is not a separated spike: " + lim.phase.reason);
      }
      std::optional<double> phi;
      if (zero_bulk) {
        const ZeroBulkCca z = phi_zero_case(s.value, double(m.p) / m.n,
                                            double(m.q) / m.n);
        phi = z.phi;
        row["closed_form"] = {{"phi", z.phi}, {"alpha_r", z.alpha_r}};
      }
      rows.push_back(row);
      table.rows.push_back(
          {s.value, opt(lim.f), opt(lim.psi_xi), opt(lim.psi_c), opt(lim.psi),
           opt(lim.t), lim.phase.valid(), to_string(lim.phase.status),
           sc ? Json(sc->eta1) : no_value, sc ? Json(sc->eta2) : no_value,
           sc ? Json(sc->eta3) : no_value, sc ? Json(sc->eta) : no_value,
           opt(phi)});
    }
    Json results = {{"model", to_string(m.kind)},
                    {"ratios",
                     {{"c3", ctx.c3}, {"c4", ctx.c4},
                      {"r1", double(m.p) / m.n}, {"r2", double(m.q) / m.n}}},
                    {"spikes", rows}};
    return {envelope(config, results, warnings), {table}};
  }

  const double c1 = config.c1.value_or(double(m.p) / m.n);
  const bool fisher = m.kind == ModelKind::fisher;
  const double c2 = fisher ? config.c2.value_or(double(m.p) / m.big_n) : 0.0;
  table.header = {"spike", "lambda_c", "lambda", "valid", "status", "theta1"};
  if (fisher) {
    table.header.push_back("vartheta");
    table.header.push_back("theta2");
  }
  for (const SpikeSpec& s : m.spikes) {
    const SpikeLimit lim = fisher
                               ? fisher_spike_limit(s, h, c1, c2)
                               : covariance_spike_limit(s.value, h, c1);
    Json row = {{"spike", s.value},
                {"multiplicity", s.multiplicity},
                {"lambda_c", opt(lim.lambda_c)},
                {"lambda", opt(lim.lambda)},
                {"phase", phase_json(lim.phase)}};
    std::vector<Json> cells = {s.value, opt(lim.lambda_c), opt(lim.lambda),
                               lim.phase.valid(), to_string(lim.phase.status)};
    if (lim.phase.valid()) {
      if (fisher) {
        const FisherScale fs =
            theta2(s.value, *lim.lambda_c, *lim.lambda, h, c1, c2);
        row["variance"] = {{"theta1", fs.theta1},
                           {"vartheta", fs.vartheta},
                           {"theta2", fs.theta2},
                           {"beta", beta(m.field)}};
        cells.insert(cells.end(), {fs.theta1, fs.vartheta, fs.theta2});
      } else {
        const double t1 = theta1_formula(s.value, *lim.lambda_c, h, c1);
        row["variance"] = {{"theta1", t1}, {"beta", beta(m.field)}};
        cells.push_back(t1);
      }
    } else {
      warnings.push_back("spike " + std::to_string(s.value) +
                         " is not separated: " + lim.phase.reason);
      cells.resize(table.header.size(), no_value);
    }
    rows.push_back(row);
    table.rows.push_back(cells);
  }
  Json ratios = {{"c1", c1}};
  if (fisher) ratios["c2"] = c2;
  Json results = {{"model", to_string(m.kind)},
                  {"ratios", ratios},
                  {"asymptotic_ratios", config.c1.has_value() ||
                                            config.c2.has_value()},
                  {"spikes", rows}};
  return {envelope(config, results, warnings), {table}};
}

namespace {

CommandOutput run_clt_command(const RunConfig& config) {
  CltOptions o;
  o.spike_index = config.spike_index;
  o.mode = config.mode;
  o.reps = config.reps;
  o.seed = config.seed;
  o.threads = config.threads;
  o.center_override = config.center;
  const ExperimentSummary s = run_clt(config.model, o);
  Json warnings = Json::array();
  if (config.center) warnings.push_back("centre overridden by configuration");

  Json reps = Json::array();
  CsvTable samples{"samples", {"replication"}, {}};
  const std::size_t width =
      s.replications.empty() ? 0 : s.replications.front().gamma.size();
  for (std::size_t k = 0; k < width; ++k) {
    samples.header.push_back("eigenvalue_" + std::to_string(k + 1));
  }
  for (std::size_t k = 0; k < width; ++k) {
    samples.header.push_back("gamma_" + std::to_string(k + 1));
  }
  for (std::size_t i = 0; i < s.replications.size(); ++i) {
    const auto& r = s.replications[i];
    reps.push_back({{"eigenvalues", r.eigenvalues}, {"gamma", r.gamma}});
    std::vector<Json> row = {static_cast<int>(i)};
    for (double v : r.eigenvalues) row.push_back(v);
    for (double v : r.gamma) row.push_back(v);
    samples.rows.push_back(row);
  }

  Json results = {{"mode", s.mode},
                  {"spike_index", config.spike_index},
                  {"spike", config.model.spikes.at(config.spike_index).value},
                  {"reps", s.reps},
                  {"center", config.center.value_or(s.theory.center)},
                  {"limit", s.theory.center},
                  {"variance_scale", s.theory.variance_scale},
                  {"root_dim", s.theory.root_dim},
                  {"variance_report", variance_json(s.theory.report)},
                  {"mean", opt(s.mean)},
                  {"variance", opt(s.variance)},
                  {"ks_distance", s.ks ? Json(s.ks->distance) : Json(nullptr)},
                  {"ks_p_value", s.ks ? Json(s.ks->p_value) : Json(nullptr)},
                  {"goe_distance", opt(s.goe_distance)},
                  {"replications", reps}};
  std::vector<CsvTable> tables = {samples};

  if (config.mode == CltMode::normal) {
    std::vector<double> g;
    for (const auto& r : s.replications) g.push_back(r.gamma[0]);
    const int bins = 32;
    const double lo = -4.0, hi = 4.0, w = (hi - lo) / bins;
    std::vector<int> counts(bins, 0);
    int below = 0, above = 0;
    for (double v : g) {
      if (v < lo) {
        ++below;
      } else if (v >= hi) {
        ++above;
      } else {
        ++counts[std::min(bins - 1, static_cast<int>((v - lo) / w))];
      }
    }
    CsvTable hist{"histogram",
                  {"bin_lo", "bin_hi", "count", "density", "normal_density"},
                  {}};
    Json hj = Json::array();
    for (int b = 0; b < bins; ++b) {
      const double a = lo + b * w, e = a + w;
      const double dens = counts[b] / (g.size() * w);
      const double nd = (normal_cdf(e) - normal_cdf(a)) / w;
      hist.rows.push_back({a, e, counts[b], dens, nd});
      hj.push_back({{"bin_lo", a}, {"bin_hi", e}, {"count", counts[b]},
                    {"density", dens}, {"normal_density", nd}});
    }
    std::vector<double> sorted = g;
    std::sort(sorted.begin(), sorted.end());
    CsvTable qq{"qq", {"theoretical", "sample"}, {}};
    Json qj = Json::array();
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      const double t = normal_quantile((i + 0.5) / sorted.size());
      qq.rows.push_back({t, sorted[i]});
      qj.push_back({t, sorted[i]});
    }
    results["histogram"] = {{"bins", hj}, {"below", below}, {"above", above}};
    results["qq"] = qj;
    tables.push_back(hist);
    tables.push_back(qq);
  }
  return {envelope(config, results, warnings), tables};
}

CommandOutput run_mse_command(const RunConfig& config) {
  MseOptions o;
  o.paths = config.estimators;
  o.p_grid = config.p_grid;
  o.reps = config.reps;
  o.seed = config.seed;
  o.threads = config.threads;
  o.estimator = config.estimator;
  const ExperimentSummary s = run_mse(config.model, o);
  Json warnings = Json::array();
  Json entries = Json::array();
  CsvTable table{"mse",
                 {"p", "estimator", "spike", "true_value", "mse",
                  "mean_estimate", "failures"},
                 {}};
  for (const MseEntry& e : s.mse) {
    entries.push_back({{"p", e.p},
                       {"estimator", to_string(e.path)},
                       {"spike_index", e.spike_index},
                       {"true_value", e.true_value},
                       {"mse", e.mse},
                       {"mean_estimate", e.mean_estimate},
                       {"failures", e.failures},
                       {"reps", s.reps}});
    table.rows.push_back({e.p, to_string(e.path), e.spike_index, e.true_value,
                          e.mse, e.mean_estimate, e.failures});
    if (e.failures > 0) {
      warnings.push_back(std::to_string(e.failures) + " replications of " +
                         to_string(e.path) + " at p = " +
                         std::to_string(e.p) + " gave no estimate");
    }
  }
  Json results = {{"reps", s.reps}, {"entries", entries}};
  return {envelope(config, results, warnings), {table}};
}

}  // namespace

CommandOutput cmd_simulate(const RunConfig& config) {
  if (config.command == Command::clt) return run_clt_command(config);
  if (config.command == Command::mse) return run_mse_command(config);
  throw ConfigError("simulate handles clt and mse only");
}

CommandOutput cmd_cca_analyze(const RunConfig& config) {
  if (config.input.empty()) throw ConfigError("cca-analyze needs --input");
  const DatasetFrame frame =
      ingest_csv(config.input, config.x_cols, config.y_cols);
  const int p = frame.p, q = frame.q, n = frame.retained();
  const std::vector<double> spectrum = cca_spectrum(frame);
  const auto estimates = estimate_cca(spectrum, p, q, n, {}, config.estimator);

  Json warnings = Json::array();
  if (frame.dropped > 0) {
    warnings.push_back(std::to_string(frame.dropped) +
                       " rows dropped for missing or non-numeric cells");
  }
  Json est = Json::array();
  Json scales = Json::array();
  CsvTable table{"cca",
                 {"index", "lambda_sq", "canonical_correlation",
                  "fisher_scale", "exclusion_set_size", "adjusted_ratio",
                  "local_st", "a_tilde", "a_hat", "rho_sq", "t", "eta",
                  "note"},
                 {}};
  // Variance scales assume an empty bulk, the only one known from data.
  const CcaContext ctx = make_cca_context(DiscreteMeasure::point_mass(0.0),
                                          {p, q, n}, config.cca_form);
  std::vector<double> fisher_scale;
  for (const CcaEstimate& e : estimates) {
    fisher_scale.push_back(e.fisher_scale);
    Json j = {{"index", e.index},
              {"lambda_sq", e.lambda_sq},
              {"fisher_scale", e.fisher_scale},
              {"rho_sq", opt(e.rho_sq)},
              {"note", e.note}};
    if (e.fisher) {
      j["exclusion_set_size"] = e.fisher->exclusion_set_size;
      j["adjusted_ratio"] = e.fisher->adjusted_ratio;
      j["local_st"] = e.fisher->local_st;
      j["a_tilde"] = opt(e.fisher->intermediate);
      j["a_hat"] = e.fisher->estimate;
    }
    est.push_back(j);

    std::optional<double> t, eta_v;
    if (e.rho_sq) {
      const CcaLimit lim = cca_chain(*e.rho_sq, ctx);
      Json s = {{"index", e.index}, {"alpha", *e.rho_sq},
                {"phase", phase_json(lim.phase)}};
      if (lim.phase.valid()) {
        const CcaScale sc = eta(lim, ctx);
        t = lim.t;
        eta_v = sc.eta;
        s["t"] = *lim.t;
        s["eta1"] = sc.eta1;
        s["eta2"] = sc.eta2;
        s["eta3"] = sc.eta3;
        s["eta"] = sc.eta;
        s["beta"] = 2.0;
      }
      scales.push_back(s);
    }
    const Json none = nullptr;
    table.rows.push_back(
        {e.index, e.lambda_sq, std::sqrt(e.lambda_sq), e.fisher_scale,
         e.fisher ? Json(e.fisher->exclusion_set_size) : none,
         e.fisher ? Json(e.fisher->adjusted_ratio) : none,
         e.fisher ? Json(e.fisher->local_st) : none,
         e.fisher ? opt(e.fisher->intermediate) : none,
         e.fisher ? Json(e.fisher->estimate) : none, opt(e.rho_sq), opt(t),
         opt(eta_v), e.note});
  }
  std::vector<double> cc;
  for (double v : spectrum) cc.push_back(std::sqrt(v));
  Json results = {
      {"n_retained", n},
      {"dropped", frame.dropped},
      {"p", p},
      {"q", q},
      {"columns",
       {{"x", std::vector<std::string>(frame.columns.begin(),
                                       frame.columns.begin() + p)},
        {"y", std::vector<std::string>(frame.columns.begin() + p,
                                       frame.columns.end())}}},
      {"spectrum", spectrum},
      {"canonical_correlations", cc},
      {"fisher_scale", fisher_scale},
      {"estimates", est},
      {"variance_scales", scales},
      {"tracy_widom_p_value", "not computed (out of scope)"}};
  return {envelope(config, results, warnings), {table}};
}

CommandOutput cmd_lsd(const RunConfig& config) {
  ModelSpec m = config.model;
  m.finalize();
  const double c1 = config.c1.value_or(double(m.p) / m.n);
  std::string kind = config.grid.transform;
  if (kind == "auto") {
    kind = m.kind == ModelKind::covariance ? "m2"
           : m.kind == ModelKind::fisher   ? "m3"
                                           : "silverstein";
  }
  const double b = std::sqrt(m.bulk.max_location());
  Transform transform = M1Transform{m.bulk};
  double scale = 0.0;
  double c2 = 0.0;
  if (kind == "m2") {
    transform = M2Transform{m.bulk, c1};
    scale = (b + 1.0 + std::sqrt(c1)) * (b + 1.0 + std::sqrt(c1));
  } else if (kind == "m3") {
    if (m.kind != ModelKind::fisher && !config.c2) {
      throw ConfigError("m3 needs a Fisher model or ratios.c2");
    }
    c2 = config.c2.value_or(double(m.p) / m.big_n);
    transform = M3Transform{m.bulk, c1, c2};
    const double g = 1.0 - std::sqrt(c2);
    scale = (b + 1.0 + std::sqrt(c1)) * (b + 1.0 + std::sqrt(c1)) / (g * g);
  } else if (kind == "silverstein") {
    transform = SilversteinTransform{m.bulk, c1};
    scale = b * b * (1.0 + std::sqrt(c1)) * (1.0 + std::sqrt(c1));
  } else {
    throw ConfigError("unknown transform '" + kind + "'");
  }
  const double edge = upper_support_edge(transform, 2.0 * scale + 1.0);

  Json points = Json::array();
  CsvTable table{"lsd", {"x", "st_re", "st_im", "density", "cdf"}, {}};
  const LsdGrid& g = config.grid;
  double cdf = 0.0, prev_x = 0.0, prev_d = 0.0;
  for (int i = 0; i < g.count; ++i) {
    const double x = g.from + (g.to - g.from) * i / (g.count - 1);
    const double d = density(transform, x, g.eta);
    const double im = d * M_PI;
    double re = 0.0;
    {
      // Real part from the same complex evaluation.
      const double h = g.eta;
      const StSolution s =
          kind == "m2"   ? solve_m2(m.bulk, c1, Complex(x, h))
          : kind == "m3" ? solve_m3(m.bulk, c1, c2, Complex(x, h))
                         : solve_silverstein(m.bulk, c1, Complex(x, h));
      re = s.value.real();
    }
    if (i > 0) cdf += 0.5 * (d + prev_d) * (x - prev_x);
    prev_x = x;
    prev_d = d;
    points.push_back({{"x", x}, {"st_re", re}, {"st_im", im},
                      {"density", d}, {"cdf", cdf}});
    table.rows.push_back({x, re, im, d, cdf});
  }
  Json results = {{"transform", kind},
                  {"c1", c1},
                  {"c2", c2},
                  {"eta", g.eta},
                  {"upper_edge", edge},
                  {"points", points}};
  return {envelope(config, results, Json::array()), {table}};
}

CommandOutput run_command(const RunConfig& config) {
  switch (config.command) {
    case Command::phase:
      return cmd_phase(config);
    case Command::clt:
    case Command::mse:
      return cmd_simulate(config);
    case Command::cca_analyze:
      return cmd_cca_analyze(config);
    case Command::lsd:
      return cmd_lsd(config);
  }
  throw ConfigError("unknown command");
}

namespace {

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write '" + path + "'");
  f << text;
  if (!f) throw IoError("write to '" + path + "' failed");
}

std::string table_text(const CsvTable& t) {
  std::ostringstream s;
  write_csv(s, t);
  return s.str();
}

}  // namespace

void emit(const CommandOutput& output, const RunConfig& config,
          std::ostream& stdout_stream) {
  const bool csv = config.format == OutputFormat::csv;
  const std::string primary = csv ? table_text(output.tables.front())
                                  : canonical_json(output.document);
  if (config.out.empty()) {
    stdout_stream << primary;
    return;
  }
  write_file(config.out, primary);
  if (config.command != Command::clt) return;
  const std::filesystem::path out(config.out);
  const auto stem = (out.parent_path() / out.stem()).string();
  for (std::size_t i = csv ? 1 : 0; i < output.tables.size(); ++i) {
    write_file(stem + "_" + output.tables[i].name + ".csv",
               table_text(output.tables[i]));
  }
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) ||
      dynamic_cast<const SpecError*>(&e) ||
      dynamic_cast<const Json::exception*>(&e)) {
    return 1;
  }
  if (dynamic_cast<const IoError*>(&e)) return 3;
  return 2;
}

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Spiked noncentral Fisher and CCA eigenvalue toolkit"};
  app.require_subcommand(1, 1);

  std::string config_path, out_path, format, input;
  std::uint64_t seed = 0;
  int reps = 0, threads = 0;
  std::vector<std::string> x_cols, y_cols;
  struct Flags {
    CLI::Option *config, *seed, *reps, *out, *format, *threads, *input,
        *x_cols, *y_cols;
  };
  std::vector<std::pair<CLI::App*, Flags>> subs;
  const std::pair<const char*, const char*> names[] = {
      {"phase", "Spike limits, phase checks and variance scales"},
      {"clt", "Monte Carlo check of the spike CLT"},
      {"mse", "Monte Carlo MSE of the spike estimators"},
      {"cca-analyze", "Estimate population canonical correlations from CSV"},
      {"lsd", "Stieltjes transform and density of the bulk law"}};
  for (const auto& [name, help] : names) {
    CLI::App* sub = app.add_subcommand(name, help);
    Flags f{};
    f.config = sub->add_option("--config", config_path, "JSON config file");
    f.seed = sub->add_option("--seed", seed, "Master seed");
    f.reps = sub->add_option("--reps", reps, "Replications");
    f.out = sub->add_option("--out", out_path, "Output path (default stdout)");
    f.format = sub->add_option("--format", format, "json or csv")
                   ->check(CLI::IsMember({"json", "csv"}));
    f.threads = sub->add_option("--threads", threads,
                                "Worker threads (0 = all cores)");
    f.input = sub->add_option("--input", input, "Input CSV");
    f.x_cols = sub->add_option("--x-cols", x_cols, "x columns")
                   ->delimiter(',');
    f.y_cols = sub->add_option("--y-cols", y_cols, "y columns")
                   ->delimiter(',');
    subs.emplace_back(sub, f);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 1;
  }

  try {
    const auto& [sub, f] = *std::find_if(
        subs.begin(), subs.end(), [](const auto& s) { return s.first->parsed(); });
    Json doc = Json::object();
    if (f.config->count()) {
      std::ifstream in(config_path);
      if (!in) throw IoError("cannot open config '" + config_path + "'");
      try {
        doc = Json::parse(in);
      } catch (const Json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
      }
    }
    if (f.seed->count()) doc["seed"] = seed;
    if (f.reps->count()) doc["reps"] = reps;
    if (f.out->count()) doc["out"] = out_path;
    if (f.format->count()) doc["format"] = format;
    if (f.threads->count()) doc["threads"] = threads;
    if (f.input->count()) doc["input"] = input;
    if (f.x_cols->count()) doc["x_cols"] = x_cols;
    if (f.y_cols->count()) doc["y_cols"] = y_cols;
    const RunConfig config = parse_run_config(parse_command(sub->get_name()), doc);
    emit(run_command(config), config, out);
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

}  // namespace ncf
