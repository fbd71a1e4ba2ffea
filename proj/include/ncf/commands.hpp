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

#include <exception>
#include <ostream>
#include <vector>

#include "ncf/config.hpp"
#include "ncf/report.hpp"

namespace ncf {

struct CommandOutput {
  Json document;  // command, config_echo, seed, results, warnings
  std::vector<CsvTable> tables;  // first table is the primary CSV output
};

CommandOutput cmd_phase(const RunConfig& config);
// clt or mse, depending on config.command.
CommandOutput cmd_simulate(const RunConfig& config);
CommandOutput cmd_cca_analyze(const RunConfig& config);
CommandOutput cmd_lsd(const RunConfig& config);
CommandOutput run_command(const RunConfig& config);

// Writes the primary output to config.out (stdout when empty). With an
// output path, extra tables go next to it as <stem>_<table>.csv.
void emit(const CommandOutput& output, const RunConfig& config,
          std::ostream& stdout_stream);

// 0 ok, 1 usage, 2 domain or phase, 3 io.
int exit_code_for(const std::exception& e);

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace ncf
