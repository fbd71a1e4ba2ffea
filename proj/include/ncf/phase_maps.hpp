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
#include <string>
#include <utility>
#include <vector>

#include "ncf/spectral.hpp"

namespace ncf {

struct SpikeSpec {
  double value = 0.0;
  int multiplicity = 1;
  // 0-based positions of this spike in the descending population spectrum.
  std::vector<int> rank_set;
};

// Checks multiplicities and the separation condition
// min |a_k / a_j - 1| > separation over distinct spikes.
void validate_spikes(const std::vector<SpikeSpec>& spikes, double separation);

// Dimension ratios with the integers they come from.
struct AspectRatios {
  int p = 0, n = 0, big_n = 0, q = 0;

  double c1n() const { return double(p) / n; }
  double c2N() const { return double(p) / big_n; }
  double c3() const { return double(p) / q; }
  double c4() const { return double(p) / (n - q); }
  double r1() const { return double(p) / n; }
  double r2() const { return double(q) / n; }
};

// The "+" form is the covariance map; the "-" form is the variant printed
// in the CCA chain. Both agree when c1 = 1.
enum class CovarianceMapForm { standard, literal_minus };

double psi_cov(double a, const SpectralLaw& h, double c1,
               CovarianceMapForm form = CovarianceMapForm::standard,
               const SolverOptions& opts = {});
// x / (1 + c2 x m2(x)) with m2 taken for bulk h at ratio c1.
double psi_fisher(double x, const SpectralLaw& h, double c1, double c2,
                  const SolverOptions& opts = {});

enum class PhaseStatus { valid, critical, invalid };

struct PhaseCheck {
  PhaseStatus status = PhaseStatus::invalid;
  // (map name, derivative) in chain order.
  std::vector<std::pair<std::string, double>> derivatives;
  std::string reason;

  bool valid() const noexcept { return status == PhaseStatus::valid; }
};

const char* to_string(PhaseStatus status);

inline constexpr double kPhaseMargin = 1e-8;

PhaseCheck check_phase_cov(double a, const SpectralLaw& h, double c1,
                           const SolverOptions& opts = {});
PhaseCheck check_phase_fisher(double a, const SpectralLaw& h, double c1,
                              double c2, const SolverOptions& opts = {});

struct SpikeLimit {
  double spike = 0.0;
  std::optional<double> lambda_c;
  std::optional<double> lambda;
  PhaseCheck phase;
};

SpikeLimit covariance_spike_limit(double a, const SpectralLaw& h, double c1,
                                  const SolverOptions& opts = {});
SpikeLimit fisher_spike_limit(const SpikeSpec& spec, const SpectralLaw& h,
                              double c1, double c2,
                              const SolverOptions& opts = {});

struct CcaDims {
  int p = 0, q = 0, n = 0;
};

void validate_cca_dims(const CcaDims& dims);

double g_map(double lambda_sq, int q, int n);
double g_inv(double l, int q, int n);
// f(alpha) = (n/q) alpha / (1 - alpha).
double f_map(double alpha, int q, int n);

// Laws and ratios that the CCA chain shares across spikes.
struct CcaContext {
  CcaDims dims;
  DiscreteMeasure tilde_h;              // atoms f(rho^2)
  GeneralizedMarchenkoPastur mp_bulk;   // F_mp with ratio p/n over tilde_h
  double c3 = 0.0;
  double c4 = 0.0;
  CovarianceMapForm form = CovarianceMapForm::standard;
};

CcaContext make_cca_context(const DiscreteMeasure& hcca, const CcaDims& dims,
                            CovarianceMapForm form =
                                CovarianceMapForm::standard);

double psi_xi(double x, const CcaContext& ctx);

struct CcaLimit {
  double alpha = 0.0;
  std::optional<double> f;
  std::optional<double> psi_xi;
  std::optional<double> psi_c;  // Psi_C(alpha)
  std::optional<double> psi;    // Psi(alpha)
  std::optional<double> t;
  PhaseCheck phase;
  std::string failed_stage;
};

CcaLimit cca_chain(double alpha, const CcaContext& ctx,
                   const SolverOptions& opts = {});
CcaLimit cca_chain(double alpha, const DiscreteMeasure& hcca,
                   const CcaDims& dims, const SolverOptions& opts = {});

struct ZeroBulkCca {
  double phi;
  double alpha_r;
};

ZeroBulkCca phi_zero_case(double alpha, double r1, double r2);

}  // namespace ncf
