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

#include "ncf/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>

#include "ncf/errors.hpp"

namespace ncf {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  cells.push_back(trim(cur));
  return cells;
}

bool parse_number(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && std::isfinite(out);
}

int resolve(const std::vector<std::string>& header, const std::string& sel) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == sel) return static_cast<int>(i);
  }
  if (!sel.empty() &&
      std::all_of(sel.begin(), sel.end(),
                  [](unsigned char c) { return std::isdigit(c); })) {
    const long idx = std::strtol(sel.c_str(), nullptr, 10);
    if (idx < static_cast<long>(header.size())) return static_cast<int>(idx);
  }
  throw ConfigError("unknown column '" + sel + "'");
}

}  // namespace

DatasetFrame parse_csv(std::istream& in, const std::vector<std::string>& x_cols,
                       const std::vector<std::string>& y_cols) {
  if (x_cols.empty() || y_cols.empty()) {
    throw ConfigError("both x and y column selectors are required");
  }
  std::string line;
  if (!std::getline(in, line)) throw IoError("CSV input has no header row");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
    line.erase(0, 3);
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = split_row(line);

  std::vector<int> idx;
  for (const auto& s : x_cols) idx.push_back(resolve(header, s));
  for (const auto& s : y_cols) idx.push_back(resolve(header, s));
  if (std::set<int>(idx.begin(), idx.end()).size() != idx.size()) {
    throw ConfigError("x and y column selections overlap or repeat");
  }

  DatasetFrame frame;
  frame.p = static_cast<int>(x_cols.size());
  frame.q = static_cast<int>(y_cols.size());
  for (int i : idx) frame.columns.push_back(header[i]);

  std::vector<double> flat;
  int rows = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const std::vector<std::string> cells = split_row(line);
    std::vector<double> row;
    bool complete = true;
    for (int i : idx) {
      double v;
      if (i >= static_cast<int>(cells.size()) || !parse_number(cells[i], v)) {
        complete = false;
        break;
      }
      row.push_back(v);
    }
    if (!complete) {
      ++frame.dropped;
      continue;
    }
    flat.insert(flat.end(), row.begin(), row.end());
    ++rows;
  }
  const int cols = frame.p + frame.q;
  frame.values.resize(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) frame.values(r, c) = flat[r * cols + c];
  }
  return frame;
}

DatasetFrame ingest_csv(const std::string& path,
                        const std::vector<std::string>& x_cols,
                        const std::vector<std::string>& y_cols) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return parse_csv(in, x_cols, y_cols);
}

void require_sample_size(const DatasetFrame& frame) {
  const int cols = frame.p + frame.q;
  if (frame.retained() <= cols) {
    throw InsufficientDataError("retained " + std::to_string(frame.retained()) +
                                " rows, need more than p + q = " +
                                std::to_string(cols));
  }
}

std::vector<double> cca_spectrum(const DatasetFrame& frame) {
  require_sample_size(frame);
  if (frame.p > frame.q) {
    throw ConfigError("the x block must not have more columns than y");
  }
  Eigen::MatrixXd z = frame.values.rowwise() - frame.values.colwise().mean();
  const Eigen::MatrixXd x = z.leftCols(frame.p);
  const Eigen::MatrixXd y = z.rightCols(frame.q);
  // Orthonormal bases of the two column spaces; the singular values of
  // Qx' Qy are the canonical correlations.
  Eigen::HouseholderQR<Eigen::MatrixXd> qx(x), qy(y);
  const Eigen::MatrixXd rx = qx.matrixQR().topRows(frame.p)
                                 .triangularView<Eigen::Upper>();
  const Eigen::MatrixXd ry = qy.matrixQR().topRows(frame.q)
                                 .triangularView<Eigen::Upper>();
  auto full_rank = [](const Eigen::MatrixXd& r) {
    const Eigen::VectorXd d = r.diagonal().cwiseAbs();
    return d.minCoeff() > 1e-10 * d.maxCoeff();
  };
  if (!full_rank(rx) || !full_rank(ry)) {
    throw NumericalRankError("a column block is rank deficient");
  }
  const Eigen::MatrixXd q1 =
      qx.householderQ() * Eigen::MatrixXd::Identity(z.rows(), frame.p);
  const Eigen::MatrixXd q2 =
      qy.householderQ() * Eigen::MatrixXd::Identity(z.rows(), frame.q);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(q1.transpose() * q2);
  std::vector<double> out;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    const double s = std::min(svd.singularValues()(i), 1.0);
    out.push_back(s * s);
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

}  // namespace ncf
