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

#include <algorithm>
#include <cmath>
#include <complex>

#include "ncf/errors.hpp"
#include "ncf/monte_carlo.hpp"

namespace ncf {

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

}  // namespace

double kolmogorov_survival(double lambda) {
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_normal(std::span<const double> samples) {
  if (samples.size() < 20) {
    throw InsufficientDataError("KS test needs at least 20 samples");
  }
  std::vector<double> x(samples.begin(), samples.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = normal_cdf(x[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  const double root = std::sqrt(n);
  KsResult r;
  r.distance = d;
  r.p_value = kolmogorov_survival((root + 0.12 + 0.11 / root) * d);
  return r;
}

std::vector<std::array<double, 2>> sample_goe_pairs(int count, Field field,
                                                    std::uint64_t seed) {
  ReplicationRng rng(seed, 0);
  std::vector<std::array<double, 2>> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double a = rng.normal();
    const double b = rng.normal();
    double off2;
    if (field == Field::real) {
      const double z = rng.normal() * M_SQRT1_2;
      off2 = z * z;
    } else {
      const double re = rng.normal() * M_SQRT1_2;
      const double im = rng.normal() * M_SQRT1_2;
      off2 = re * re + im * im;
    }
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (a - b);
    const double r = std::sqrt(half * half + off2);
    out.push_back({mid + r, mid - r});
  }
  return out;
}

double joint_cdf_distance(std::span<const std::array<double, 2>> sample,
                          std::span<const std::array<double, 2>> reference) {
  if (sample.empty() || reference.empty()) {
    throw InsufficientDataError("joint CDF distance of an empty sample");
  }
  auto cdf = [](std::span<const std::array<double, 2>> s, double x, double y) {
    std::size_t c = 0;
    for (const auto& v : s) c += (v[0] <= x && v[1] <= y);
    return double(c) / s.size();
  };
  double d = 0.0;
  for (const auto& pt : sample) {
    d = std::max(d, std::abs(cdf(sample, pt[0], pt[1]) -
                             cdf(reference, pt[0], pt[1])));
  }
  return d;
}

}  // namespace ncf
