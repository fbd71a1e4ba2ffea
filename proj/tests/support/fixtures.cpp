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

#include "fixtures.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "ncf/monte_carlo.hpp"

namespace ncf::testing {

Eigen::MatrixXd gaussian_matrix(int rows, int cols, std::uint64_t seed) {
  ReplicationRng rng(seed, 0);
  Eigen::MatrixXd m(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) m(i, j) = rng.normal();
  }
  return m;
}

std::vector<std::string> column_names(const std::string& prefix, int count) {
  std::vector<std::string> out;
  for (int i = 0; i < count; ++i) out.push_back(prefix + std::to_string(i + 1));
  return out;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

namespace {

void write_rows(const std::string& path, const Eigen::MatrixXd& x,
                const Eigen::MatrixXd& y, int missing_rows) {
  std::ofstream f(path);
  const int p = x.cols(), q = y.cols();
  auto xs = column_names("x", p);
  auto ys = column_names("y", q);
  for (int j = 0; j < p; ++j) f << (j ? "," : "") << xs[j];
  for (int j = 0; j < q; ++j) f << "," << ys[j];
  f << "\n";
  char buf[40];
  auto row = [&](int i, int hole) {
    for (int j = 0; j < p + q; ++j) {
      if (j) f << ",";
      if (j == hole) {
        f << (i % 2 ? "NA" : "");
        continue;
      }
      std::snprintf(buf, sizeof buf, "%.17g", j < p ? x(i, j) : y(i, j - p));
      f << buf;
    }
    f << "\n";
  };
  for (int i = 0; i < x.rows(); ++i) {
    if (i < missing_rows) row(i, (3 * i + 1) % (p + q));
    row(i, -1);
  }
}

}  // namespace

void write_exact_cca_csv(const std::string& path,
                         const std::vector<double>& lambda_sq, int q, int n,
                         int missing_rows, std::uint64_t seed) {
  const int p = static_cast<int>(lambda_sq.size());
  Eigen::MatrixXd g = gaussian_matrix(n, p + q, seed);
  g = g.rowwise() - g.colwise().mean();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  const Eigen::MatrixXd basis =
      qr.householderQ() * Eigen::MatrixXd::Identity(n, p + q);
  const Eigen::MatrixXd u = basis.leftCols(p);
  Eigen::MatrixXd y = basis.rightCols(q);
  for (int i = 0; i < p; ++i) {
    const double l = std::sqrt(lambda_sq[i]);
    y.col(i) = l * u.col(i) + std::sqrt(1.0 - lambda_sq[i]) * y.col(i);
  }
  // Invertible mixing and offsets leave canonical correlations unchanged.
  Eigen::MatrixXd a = gaussian_matrix(p, p, seed + 1);
  a.diagonal().array() += 3.0;
  Eigen::MatrixXd b = gaussian_matrix(q, q, seed + 2);
  b.diagonal().array() += 3.0;
  Eigen::MatrixXd x = 10.0 * u * a;
  y = 10.0 * y * b;
  for (int j = 0; j < p; ++j) x.col(j).array() += 5.0 * (j + 1);
  for (int j = 0; j < q; ++j) y.col(j).array() -= 2.0 * (j + 1);
  write_rows(path, x, y, missing_rows);
}

void write_gaussian_cca_csv(const std::string& path,
                            const std::vector<double>& rho_sq, int p, int q,
                            int n, std::uint64_t seed) {
  Eigen::MatrixXd x = gaussian_matrix(n, p, seed);
  Eigen::MatrixXd y = gaussian_matrix(n, q, seed + 1);
  for (int i = 0; i < static_cast<int>(rho_sq.size()); ++i) {
    const double r = std::sqrt(rho_sq[i]);
    y.col(i) = r * x.col(i) + std::sqrt(1.0 - rho_sq[i]) * y.col(i);
  }
  write_rows(path, x, y, 0);
}

}  // namespace ncf::testing
