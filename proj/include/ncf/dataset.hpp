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

#include <istream>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ncf {

// Selected x then y columns of a CSV file, with incomplete rows removed.
struct DatasetFrame {
  std::vector<std::string> columns;
  int p = 0;
  int q = 0;
  Eigen::MatrixXd values;  // retained rows x (p + q), not centred
  int dropped = 0;

  int retained() const { return static_cast<int>(values.rows()); }
};

// Selectors match a header name first, then a 0-based column index.
DatasetFrame parse_csv(std::istream& in, const std::vector<std::string>& x_cols,
                       const std::vector<std::string>& y_cols);
DatasetFrame ingest_csv(const std::string& path,
                        const std::vector<std::string>& x_cols,
                        const std::vector<std::string>& y_cols);

// Throws unless more rows than p + q were retained.
void require_sample_size(const DatasetFrame& frame);

// Squared sample canonical correlations, descending, after centring.
std::vector<double> cca_spectrum(const DatasetFrame& frame);

}  // namespace ncf
