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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ncf/estimators.hpp"
#include "ncf/monte_carlo.hpp"
#include "ncf/phase_maps.hpp"
#include "ncf/report.hpp"

namespace ncf {

enum class Command { phase, clt, mse, cca_analyze, lsd };
enum class OutputFormat { json, csv };

const char* to_string(Command command);
Command parse_command(const std::string& name);

inline constexpr std::uint64_t kDefaultSeed = 20221018;

struct LsdGrid {
  double from = 0.0;
  double to = 5.0;
  int count = 101;
  double eta = 1e-3;
  std::string transform = "auto";  // auto | m2 | m3 | silverstein
};

struct RunConfig {
  Command command = Command::phase;
  ModelSpec model;
  // Limit ratios in place of the finite-n ones (phase and lsd).
  std::optional<double> c1;
  std::optional<double> c2;
  int spike_index = 0;
  CltMode mode = CltMode::normal;
  std::optional<double> center;
  std::vector<EstimatorPath> estimators;
  std::vector<int> p_grid;
  EstimatorOptions estimator;
  CovarianceMapForm cca_form = CovarianceMapForm::standard;
  std::string input;
  std::string out;
  OutputFormat format = OutputFormat::json;
  std::uint64_t seed = kDefaultSeed;
  int reps = 500;
  int threads = 1;
  std::vector<std::string> x_cols;
  std::vector<std::string> y_cols;
  LsdGrid grid;
  // Configuration as given, without execution-only fields.
  Json echo;
};

// The model defaults to the Fisher design p=200, n=2000, N=1000 with
// spikes 10 and 7.5 over a unit bulk. Unknown keys are rejected.
RunConfig parse_run_config(Command command, const Json& doc);
ModelSpec parse_model(const Json& doc);

}  // namespace ncf
