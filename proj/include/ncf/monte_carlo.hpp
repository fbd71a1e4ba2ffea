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

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ncf/estimators.hpp"
#include "ncf/fluctuation.hpp"
#include "ncf/phase_maps.hpp"
#include "ncf/spectral.hpp"

namespace ncf {

enum class ModelKind { covariance, fisher, cca };

const char* to_string(ModelKind kind);

// For covariance and Fisher models spike values and bulk atoms are
// eigenvalues of Xi Xi*/n; for CCA they are squared canonical correlations.
struct ModelSpec {
  ModelKind kind = ModelKind::covariance;
  int p = 0;
  int n = 0;
  int big_n = 0;  // Fisher denominator sample size
  int q = 0;      // CCA second block
  DiscreteMeasure bulk = DiscreteMeasure::point_mass(1.0);
  std::vector<SpikeSpec> spikes;
  Field field = Field::real;
  double separation = 0.01;

  // Checks dimensions and spikes and fills in rank sets.
  void finalize();
  // p population values, descending.
  std::vector<double> population() const;
  // Same ratios and spikes at a different p.
  ModelSpec with_p(int new_p) const;
  int spike_count() const;
};

Eigen::MatrixXd make_xi(std::span<const double> values, int n);
Eigen::MatrixXd make_xi(const ModelSpec& spec);

// One independent stream per (master seed, replication index).
class ReplicationRng {
 public:
  ReplicationRng(std::uint64_t master, std::uint64_t replication);

  double normal() { return normal_(engine_); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

struct SampleSpectra {
  std::vector<double> primary;     // descending
  std::vector<double> covariance;  // C_n spectrum for Fisher models
};

SampleSpectra sample_spectra(const ModelSpec& spec, std::uint64_t seed,
                             std::uint64_t replication);
std::vector<double> sample_spectrum(const ModelSpec& spec,
                                    std::uint64_t seed);

struct KsResult {
  double distance = 0.0;
  double p_value = 0.0;
};

// One-sample KS against N(0, 1) with the asymptotic Kolmogorov p-value.
KsResult ks_normal(std::span<const double> samples);
double kolmogorov_survival(double lambda);

// Ordered eigenvalue pairs of 2x2 GOE (real) or GUE (complex) matrices,
// scaled so the diagonal has unit variance.
std::vector<std::array<double, 2>> sample_goe_pairs(int count, Field field,
                                                    std::uint64_t seed);
// Sup distance between the joint CDFs of two samples of ordered pairs,
// taken over the points of the first sample.
double joint_cdf_distance(std::span<const std::array<double, 2>> sample,
                          std::span<const std::array<double, 2>> reference);

// Limit value and scale that normalise one spike.
struct SpikeTheory {
  double center = 0.0;
  double variance_scale = 0.0;  // theta1, theta2 or eta
  double beta = 2.0;
  double root_dim = 0.0;        // sqrt(n), or sqrt(q) for CCA
  VarianceReport report;
};

SpikeTheory spike_theory(const ModelSpec& spec, int spike_index);

enum class CltMode { normal, goe_pair };

struct CltOptions {
  int spike_index = 0;
  CltMode mode = CltMode::normal;
  int reps = 500;
  std::uint64_t seed = 0;
  int threads = 1;
  // Centre at this value instead of the finite-n limit.
  std::optional<double> center_override;
  int goe_reference = 20000;
};

struct ReplicationRecord {
  std::vector<double> eigenvalues;
  std::vector<double> gamma;
};

enum class EstimatorPath { cov, fisher, cca };

const char* to_string(EstimatorPath path);

struct MseEntry {
  int p = 0;
  EstimatorPath path = EstimatorPath::cov;
  int spike_index = 0;
  double true_value = 0.0;
  double mse = 0.0;
  double mean_estimate = 0.0;
  int failures = 0;
  std::vector<double> estimates;
};

struct ExperimentSummary {
  std::string mode;
  std::uint64_t seed = 0;
  int reps = 0;
  SpikeTheory theory;
  std::vector<ReplicationRecord> replications;
  std::optional<double> mean;
  std::optional<double> variance;
  std::optional<KsResult> ks;
  std::optional<double> goe_distance;
  std::vector<MseEntry> mse;
};

ExperimentSummary run_clt(const ModelSpec& spec, const CltOptions& opts);

struct MseOptions {
  std::vector<EstimatorPath> paths;
  std::vector<int> p_grid;  // empty means spec.p only
  int reps = 500;
  std::uint64_t seed = 0;
  int threads = 1;
  EstimatorOptions estimator;
};

ExperimentSummary run_mse(const ModelSpec& spec, const MseOptions& opts);

double mean_of(std::span<const double> v);
double variance_of(std::span<const double> v);

}  // namespace ncf
