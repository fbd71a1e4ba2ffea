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
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ncf::testing {

// n complete rows whose x/y blocks have exactly the given squared sample
// canonical correlations, mixed by random invertible maps and shifted.
// `missing_rows` extra rows carry an empty or non-numeric cell.
void write_exact_cca_csv(const std::string& path,
                         const std::vector<double>& lambda_sq, int q, int n,
                         int missing_rows, std::uint64_t seed);

// Gaussian rows with population canonical correlations sqrt(rho_sq).
void write_gaussian_cca_csv(const std::string& path,
                            const std::vector<double>& rho_sq, int p, int q,
                            int n, std::uint64_t seed);

Eigen::MatrixXd gaussian_matrix(int rows, int cols, std::uint64_t seed);

std::vector<std::string> column_names(const std::string& prefix, int count);

std::string temp_path(const std::string& name);

}  // namespace ncf::testing
