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

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace ncf {

using Json = nlohmann::json;

// Sorted keys, two-space indent, doubles with 17 significant digits and
// non-finite values as null.
std::string canonical_json(const Json& value);

struct CsvTable {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<Json>> rows;
};

// Floats in %.16e, integers as integers, null as an empty cell.
void write_csv(std::ostream& out, const CsvTable& table);

}  // namespace ncf
