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

#include "ncf/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ncf/errors.hpp"
#include "ncf/phase_maps.hpp"

namespace ncf {

LocalStieltjes local_stieltjes_at(std::span<const double> eigs, double center,
                                  std::span<const int> forced, double denom,
                                  double threshold) {
  const int p = static_cast<int>(eigs.size());
  if (p < 2) throw InsufficientDataError("spectrum needs at least 2 values");
  if (center == 0.0) throw DomainError("local ST centred at zero");
  if (!(denom > 0.0)) throw DomainError("denominator must be positive");
  std::vector<char> excluded(p, 0);
  for (int i : forced) {
    if (i < 0 || i >= p) throw DomainError("forced index out of range");
    excluded[i] = 1;
  }
  for (int i = 0; i < p; ++i) {
    if (std::abs(eigs[i] - center) / std::abs(center) <= threshold) {
      excluded[i] = 1;
    }
  }
  int set_size = 0;
  double sum = 0.0;
  for (int i = 0; i < p; ++i) {
    if (excluded[i]) {
      ++set_size;
    } else {
      sum += 1.0 / (eigs[i] - center);
    }
  }
  if (set_size == p) {
    throw DomainError("degenerate spectrum: every eigenvalue is excluded");
  }
  return {sum / (p - set_size), (p - set_size) / denom, set_size};
}

LocalStieltjes local_stieltjes(std::span<const double> eigs, int k,
                               double denom, double threshold) {
  if (k < 0 || k >= static_cast<int>(eigs.size())) {
    throw DomainError("target index out of range");
  }
  const int forced[] = {k};
  return local_stieltjes_at(eigs, eigs[k], forced, denom, threshold);
}

double invert_covariance_map(double lambda_c, double m2, double c1) {
  const double b = 1.0 + c1 * m2;
  return lambda_c * b * b - (1.0 - c1) * b;
}

FisherInversion invert_fisher_map(double lambda, double m3, double c1,
                                  double c2, FisherEstimatorForm form) {
  const double den = 1.0 + c2 * lambda * m3;
  if (std::abs(den) < 1e-12) {
    throw SingularityError("1 + c2 lambda m3 vanishes");
  }
  FisherInversion out{};
  out.a_tilde = lambda * den;
  out.m2 = m3 / den;
  const double b = 1.0 + c1 * out.m2;
  const double sign = form == FisherEstimatorForm::minus ? -1.0 : 1.0;
  out.a_hat = b * (out.a_tilde * b + sign * (1.0 - c1));
  return out;
}

namespace {

struct Observation {
  double center;
  std::vector<int> forced;
};

Observation observe(std::span<const double> eigs, int k, int block) {
  const int p = static_cast<int>(eigs.size());
  if (block < 1 || k < 0 || k + block > p) {
    throw DomainError("target block out of range");
  }
  Observation o{0.0, {}};
  for (int i = k; i < k + block; ++i) {
    o.center += eigs[i];
    o.forced.push_back(i);
  }
  o.center /= block;
  return o;
}

void check_length(std::span<const double> eigs, int p) {
  if (static_cast<int>(eigs.size()) != p) {
    throw DomainError("spectrum length " + std::to_string(eigs.size()) +
                      " differs from p = " + std::to_string(p));
  }
}

}  // namespace

EstimateEntry estimate_spike_cov(std::span<const double> eigs, int k, int p,
                                 int n, const EstimatorOptions& opts) {
  check_length(eigs, p);
  const Observation o = observe(eigs, k, opts.block);
  const LocalStieltjes ls =
      local_stieltjes_at(eigs, o.center, o.forced, n, opts.threshold);
  EstimateEntry e;
  e.index = k;
  e.observed = o.center;
  e.exclusion_set_size = ls.exclusion_set_size;
  e.adjusted_ratio = ls.adjusted_ratio;
  e.local_st = ls.m_hat;
  e.estimate = invert_covariance_map(o.center, ls.m_hat, ls.adjusted_ratio);
  return e;
}

EstimateEntry estimate_spike_fisher(std::span<const double> eigs, int k,
                                    int p, int n, int big_n,
                                    const EstimatorOptions& opts) {
  check_length(eigs, p);
  const Observation o = observe(eigs, k, opts.block);
  const LocalStieltjes ls =
      local_stieltjes_at(eigs, o.center, o.forced, big_n, opts.threshold);
  const double c1 = double(p - ls.exclusion_set_size) / n;
  const FisherInversion inv = invert_fisher_map(
      o.center, ls.m_hat, c1, ls.adjusted_ratio, opts.form);
  EstimateEntry e;
  e.index = k;
  e.observed = o.center;
  e.exclusion_set_size = ls.exclusion_set_size;
  e.adjusted_ratio = ls.adjusted_ratio;
  e.local_st = ls.m_hat;
  e.intermediate = inv.a_tilde;
  e.estimate = inv.a_hat;
  return e;
}

double rho_sq_from_spike(double a_hat, int q, int n) {
  const double s = double(q) / n * a_hat;
  return s / (1.0 + s);
}

std::vector<CcaEstimate> estimate_cca(std::span<const double> lambda_sq,
                                      int p, int q, int n,
                                      std::span<const int> indices,
                                      const EstimatorOptions& opts) {
  validate_cca_dims({p, q, n});
  check_length(lambda_sq, p);
  std::vector<double> fisher(p);
  for (int i = 0; i < p; ++i) fisher[i] = g_map(lambda_sq[i], q, n);

  std::vector<int> targets(indices.begin(), indices.end());
  if (targets.empty()) {
    for (int i = 0; i < p; ++i) targets.push_back(i);
  }
  std::vector<CcaEstimate> out;
  for (int k : targets) {
    if (k < 0 || k >= p) throw DomainError("CCA index out of range");
    CcaEstimate e;
    e.index = k;
    e.lambda_sq = lambda_sq[k];
    e.fisher_scale = fisher[k];
    try {
      // Numerator has q degrees of freedom, denominator n - q.
      e.fisher = estimate_spike_fisher(fisher, k, p, q, n - q, opts);
      const double r = rho_sq_from_spike(e.fisher->estimate, q, n);
      if (r > 0.0 && r < 1.0) {
        e.rho_sq = r;
      } else {
        e.note = "estimate outside (0, 1); index is likely in the bulk";
      }
    } catch (const DomainError& err) {
      e.note = err.what();
    }
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace ncf
