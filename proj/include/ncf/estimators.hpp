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

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ncf {

struct LocalStieltjes {
  double m_hat;
  double adjusted_ratio;
  int exclusion_set_size;
};

// Uses the relative-gap rule |l_i - center| / |center| <= threshold to form
// the exclusion set. Indices in `forced` are always excluded.
LocalStieltjes local_stieltjes_at(std::span<const double> eigs, double center,
                                  std::span<const int> forced, double denom,
                                  double threshold = 0.2);
// k is a 0-based index into a descending spectrum.
LocalStieltjes local_stieltjes(std::span<const double> eigs, int k,
                               double denom, double threshold = 0.2);

// "minus" follows the covariance inversion; "literal_plus" is the printed
// Fisher-path display.
enum class FisherEstimatorForm { minus, literal_plus };

struct EstimatorOptions {
  double threshold = 0.2;
  // Number of consecutive eigenvalues, starting at k, that form one
  // multiplicity block. Their mean is the observed value.
  int block = 1;
  FisherEstimatorForm form = FisherEstimatorForm::minus;
};

struct EstimateEntry {
  int index = 0;
  double observed = 0.0;
  int exclusion_set_size = 0;
  double adjusted_ratio = 0.0;
  double local_st = 0.0;
  std::optional<double> intermediate;
  double estimate = 0.0;
};

// Population-level inversions.
double invert_covariance_map(double lambda_c, double m2, double c1);

struct FisherInversion {
  double a_tilde;
  double m2;
  double a_hat;
};

FisherInversion invert_fisher_map(double lambda, double m3, double c1,
                                  double c2, FisherEstimatorForm form =
                                                 FisherEstimatorForm::minus);

EstimateEntry estimate_spike_cov(std::span<const double> eigs, int k, int p,
                                 int n, const EstimatorOptions& opts = {});
EstimateEntry estimate_spike_fisher(std::span<const double> eigs, int k,
                                    int p, int n, int big_n,
                                    const EstimatorOptions& opts = {});

double rho_sq_from_spike(double a_hat, int q, int n);

struct CcaEstimate {
  int index = 0;
  double lambda_sq = 0.0;
  double fisher_scale = 0.0;
  std::optional<EstimateEntry> fisher;
  std::optional<double> rho_sq;
  std::string note;
};

// Runs the full pipeline for the listed 0-based indices, or for every
// index when `indices` is empty. Indices whose estimate is degenerate or
// falls outside (0, 1) carry a note instead of rho_sq.
std::vector<CcaEstimate> estimate_cca(std::span<const double> lambda_sq,
                                      int p, int q, int n,
                                      std::span<const int> indices = {},
                                      const EstimatorOptions& opts = {});

}  // namespace ncf
