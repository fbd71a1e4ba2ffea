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

#include "ncf/config.hpp"

#include <set>

#include "ncf/errors.hpp"

namespace ncf {

namespace {

void reject_unknown(const Json& doc, const std::set<std::string>& allowed,
                    const std::string& where) {
  if (!doc.is_object()) throw ConfigError(where + " must be a JSON object");
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw ConfigError("unknown key '" + it.key() + "' in " + where);
    }
  }
}

template <class T>
T get(const Json& doc, const char* key, T fallback) {
  if (!doc.contains(key)) return fallback;
  try {
    return doc.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

double number(const Json& v, const char* what) {
  if (!v.is_number()) throw ConfigError(std::string(what) + " must be a number");
  return v.get<double>();
}

DiscreteMeasure parse_bulk(const Json& v) {
  if (v.is_number()) return DiscreteMeasure::point_mass(v.get<double>());
  if (!v.is_array()) {
    throw ConfigError("bulk must be a number or a list of atoms");
  }
  std::vector<Atom> atoms;
  for (const Json& a : v) {
    reject_unknown(a, {"location", "weight"}, "bulk atom");
    atoms.push_back({number(a.at("location"), "bulk location"),
                     number(a.at("weight"), "bulk weight")});
  }
  return DiscreteMeasure(std::move(atoms));
}

std::vector<SpikeSpec> parse_spikes(const Json& v) {
  if (!v.is_array()) throw ConfigError("spikes must be a list");
  std::vector<SpikeSpec> out;
  for (const Json& s : v) {
    SpikeSpec spec;
    if (s.is_number()) {
      spec.value = s.get<double>();
    } else {
      reject_unknown(s, {"value", "multiplicity"}, "spike");
      spec.value = number(s.at("value"), "spike value");
      spec.multiplicity = get<int>(s, "multiplicity", 1);
    }
    out.push_back(spec);
  }
  return out;
}

template <class E>
E pick(const std::string& value, std::initializer_list<std::pair<const char*, E>> options,
       const char* what) {
  for (const auto& [name, e] : options) {
    if (value == name) return e;
  }
  throw ConfigError(std::string("unknown ") + what + " '" + value + "'");
}

}  // namespace

const char* to_string(Command command) {
  switch (command) {
    case Command::phase:
      return "phase";
    case Command::clt:
      return "clt";
    case Command::mse:
      return "mse";
    case Command::cca_analyze:
      return "cca-analyze";
    case Command::lsd:
      return "lsd";
  }
  return "phase";
}

Command parse_command(const std::string& name) {
  return pick<Command>(name,
                       {{"phase", Command::phase},
                        {"clt", Command::clt},
                        {"mse", Command::mse},
                        {"cca-analyze", Command::cca_analyze},
                        {"lsd", Command::lsd}},
                       "command");
}

ModelSpec parse_model(const Json& doc) {
  reject_unknown(doc,
                 {"kind", "p", "n", "N", "q", "bulk", "spikes", "field",
                  "separation"},
                 "model");
  ModelSpec m;
  m.kind = pick<ModelKind>(get<std::string>(doc, "kind", "fisher"),
                           {{"covariance", ModelKind::covariance},
                            {"fisher", ModelKind::fisher},
                            {"cca", ModelKind::cca}},
                           "model kind");
  m.p = get<int>(doc, "p", 200);
  m.n = get<int>(doc, "n", m.kind == ModelKind::cca ? 1000 : 2000);
  m.big_n = get<int>(doc, "N", m.kind == ModelKind::fisher ? 1000 : 0);
  m.q = get<int>(doc, "q", m.kind == ModelKind::cca ? m.p : 0);
  if (doc.contains("bulk")) {
    m.bulk = parse_bulk(doc.at("bulk"));
  } else if (m.kind == ModelKind::cca) {
    m.bulk = DiscreteMeasure::point_mass(0.5);
  }
  if (doc.contains("spikes")) {
    m.spikes = parse_spikes(doc.at("spikes"));
  } else if (m.kind == ModelKind::cca) {
    m.spikes = {{10.0 / 11.0, 1, {}}, {15.0 / 17.0, 1, {}}};
  } else {
    m.spikes = {{10.0, 1, {}}, {7.5, 1, {}}};
  }
  m.field = pick<Field>(get<std::string>(doc, "field", "real"),
                        {{"real", Field::real}, {"complex", Field::complex}},
                        "field");
  m.separation = get<double>(doc, "separation", 0.01);
  return m;
}

RunConfig parse_run_config(Command command, const Json& doc) {
  reject_unknown(doc,
                 {"model", "ratios", "spike", "mode", "center", "estimators",
                  "p_grid", "threshold", "fisher_form", "cca_form", "input",
                  "out", "format", "seed", "reps", "threads", "x_cols",
                  "y_cols", "grid"},
                 "config");
  RunConfig c;
  c.command = command;
  c.model = parse_model(doc.value("model", Json::object()));
  if (doc.contains("ratios")) {
    const Json& r = doc.at("ratios");
    reject_unknown(r, {"c1", "c2"}, "ratios");
    if (r.contains("c1")) c.c1 = number(r.at("c1"), "c1");
    if (r.contains("c2")) c.c2 = number(r.at("c2"), "c2");
  }
  c.spike_index = get<int>(doc, "spike", 0);
  c.mode = pick<CltMode>(get<std::string>(doc, "mode", "normal"),
                         {{"normal", CltMode::normal},
                          {"goe_pair", CltMode::goe_pair}},
                         "clt mode");
  if (doc.contains("center")) c.center = number(doc.at("center"), "center");
  for (const auto& e : get<std::vector<std::string>>(doc, "estimators", {})) {
    c.estimators.push_back(pick<EstimatorPath>(
        e,
        {{"cov", EstimatorPath::cov},
         {"fisher", EstimatorPath::fisher},
         {"cca", EstimatorPath::cca}},
        "estimator"));
  }
  c.p_grid = get<std::vector<int>>(doc, "p_grid", {});
  c.estimator.threshold = get<double>(doc, "threshold", 0.2);
  c.estimator.form =
      pick<FisherEstimatorForm>(get<std::string>(doc, "fisher_form", "minus"),
                                {{"minus", FisherEstimatorForm::minus},
                                 {"literal_plus",
                                  FisherEstimatorForm::literal_plus}},
                                "fisher_form");
  c.cca_form = pick<CovarianceMapForm>(
      get<std::string>(doc, "cca_form", "standard"),
      {{"standard", CovarianceMapForm::standard},
       {"literal_minus", CovarianceMapForm::literal_minus}},
      "cca_form");
  c.input = get<std::string>(doc, "input", "");
  c.out = get<std::string>(doc, "out", "");
  c.format = pick<OutputFormat>(get<std::string>(doc, "format", "json"),
                                {{"json", OutputFormat::json},
                                 {"csv", OutputFormat::csv}},
                                "format");
  c.seed = get<std::uint64_t>(doc, "seed", kDefaultSeed);
  c.reps = get<int>(doc, "reps", 500);
  if (c.reps < 1) throw ConfigError("reps must be at least 1");
  c.threads = get<int>(doc, "threads", 1);
  if (c.threads < 0) throw ConfigError("threads must be nonnegative");
  c.x_cols = get<std::vector<std::string>>(doc, "x_cols", {});
  c.y_cols = get<std::vector<std::string>>(doc, "y_cols", {});
  if (doc.contains("grid")) {
    const Json& g = doc.at("grid");
    reject_unknown(g, {"from", "to", "count", "eta", "transform"}, "grid");
    c.grid.from = get<double>(g, "from", c.grid.from);
    c.grid.to = get<double>(g, "to", c.grid.to);
    c.grid.count = get<int>(g, "count", c.grid.count);
    c.grid.eta = get<double>(g, "eta", c.grid.eta);
    c.grid.transform = get<std::string>(g, "transform", c.grid.transform);
    if (c.grid.count < 2 || !(c.grid.to > c.grid.from) || !(c.grid.eta > 0)) {
      throw ConfigError("grid needs count >= 2, to > from and eta > 0");
    }
  }
  if (c.estimators.empty()) {
    if (c.model.kind == ModelKind::fisher) {
      c.estimators = {EstimatorPath::cov, EstimatorPath::fisher};
    } else if (c.model.kind == ModelKind::cca) {
      c.estimators = {EstimatorPath::cca};
    } else {
      c.estimators = {EstimatorPath::cov};
    }
  }
  c.echo = doc;
  c.echo.erase("out");
  c.echo.erase("threads");
  return c;
}

}  // namespace ncf
