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

#include "ncf/phase_maps.hpp"
#include "ncf/spectral.hpp"

namespace ncf {

enum class Field { real, complex };

// Real samples use beta = 2, complex samples beta = 1. This is the reverse
// of the usual beta-ensemble labels.
inline double beta(Field field) { return field == Field::real ? 2.0 : 1.0; }

struct VarianceReport {
  double beta = 2.0;
  std::optional<double> theta1;
  std::optional<double> vartheta;
  std::optional<double> theta2;
  std::optional<double> eta1;
  std::optional<double> eta2;
  std::optional<double> eta3;
  std::optional<double> eta;
};

// Formula only; the caller vouches that the spike is valid.
double theta1_formula(double a, double lambda_c, const SpectralLaw& h,
                      double c1, const SolverOptions& opts = {});
double theta1(double a, double lambda_c, const SpectralLaw& h, double c1,
              const SolverOptions& opts = {});

struct FisherScale {
  double theta1;
  double vartheta;
  double theta2;
};

double vartheta_formula(double lambda, const SpectralLaw& h, double c1,
                        double c2, const SolverOptions& opts = {});
FisherScale theta2(double a, double lambda_c, double lambda,
                   const SpectralLaw& h, double c1, double c2,
                   const SolverOptions& opts = {});

struct CcaScale {
  double eta1;
  double eta2;
  double eta3;
  double eta;
};

CcaScale eta(const CcaLimit& chain, const CcaContext& ctx,
             const SolverOptions& opts = {});

}  // namespace ncf
