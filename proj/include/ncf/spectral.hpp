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

#include <complex>
#include <functional>
#include <span>
#include <variant>
#include <vector>

namespace ncf {

using Complex = std::complex<double>;

struct Atom {
  double location;
  double weight;
};

// Finitely supported probability measure on [0, inf). Atoms are kept sorted
// ascending with duplicate locations merged.
class DiscreteMeasure {
 public:
  explicit DiscreteMeasure(std::vector<Atom> atoms);

  static DiscreteMeasure point_mass(double location);
  // Uniform mass 1/size on each value.
  static DiscreteMeasure empirical(std::span<const double> values);

  std::span<const Atom> atoms() const noexcept { return atoms_; }
  double min_location() const noexcept { return atoms_.front().location; }
  double max_location() const noexcept { return atoms_.back().location; }

  // Pushforward under a map t -> f(t).
  DiscreteMeasure mapped(const std::function<double(double)>& f) const;

 private:
  std::vector<Atom> atoms_;
};

// Sample covariance LSD with population measure `population` and
// dimension-to-sample ratio `ratio`.
struct GeneralizedMarchenkoPastur {
  DiscreteMeasure population;
  double ratio;
};

// Either a plain discrete measure or a generalized M-P law. Anything that
// consumes m1 accepts both.
using SpectralLaw = std::variant<DiscreteMeasure, GeneralizedMarchenkoPastur>;

struct SolverOptions {
  double tol = 1e-10;
  int max_iterations = 10000;
};

struct StSolution {
  Complex value;
  // d/dz of the transform by implicit differentiation of the equation.
  Complex derivative;
  double residual = 0.0;
  int iterations = 0;
  bool on_real_axis = false;

  double real() const noexcept { return value.real(); }
};

double st_eval(const DiscreteMeasure& measure, double x);
Complex st_eval(const DiscreteMeasure& measure, Complex z);

// Stieltjes transform of a law together with its derivative.
StSolution law_transform(const SpectralLaw& law, Complex z,
                         const SolverOptions& opts = {});
double law_transform(const SpectralLaw& law, double x,
                     const SolverOptions& opts = {});
// A point beyond which the law has no mass.
double law_support_bound(const SpectralLaw& law);

// ST of the noncentral sample covariance LSD with bulk H and ratio c1.
StSolution solve_m2(const SpectralLaw& h, double c1, Complex z,
                    const SolverOptions& opts = {});
// ST of the noncentral Fisher LSD.
StSolution solve_m3(const SpectralLaw& h, double c1, double c2, Complex z,
                    const SolverOptions& opts = {});
// Generalized M-P law in its standard fixed point form.
StSolution solve_silverstein(const DiscreteMeasure& population, double y,
                             Complex z, const SolverOptions& opts = {});

Complex underline_m2(const SpectralLaw& h, double c1, Complex z,
                     const SolverOptions& opts = {});
double underline_m2(const SpectralLaw& h, double c1, double z,
                    const SolverOptions& opts = {});

// Residual of m3/(1+c2 z m3) - m2(z(1+c2 z m3)) at a computed m3.
double compatibility_residual(const SpectralLaw& h, double c1, double c2,
                              Complex z, Complex m3,
                              const SolverOptions& opts = {});

struct M1Transform {
  SpectralLaw law;
};
struct M2Transform {
  SpectralLaw law;
  double c1;
};
struct M3Transform {
  SpectralLaw law;
  double c1;
  double c2;
};
struct UnderlineM2Transform {
  SpectralLaw law;
  double c1;
};
struct SilversteinTransform {
  DiscreteMeasure population;
  double ratio;
};

using Transform = std::variant<M1Transform, M2Transform, M3Transform,
                               UnderlineM2Transform, SilversteinTransform>;

double evaluate(const Transform& transform, double z,
                const SolverOptions& opts = {});

// Central difference with one Richardson step.
double st_derivative(const Transform& transform, double z,
                     const SolverOptions& opts = {});
double numeric_derivative(const std::function<double(double)>& f, double z);

// Upper edge of the support of a transform, located by bisection on the
// real-axis solver. `outside` must lie above the support.
double upper_support_edge(const Transform& transform, double outside,
                          const SolverOptions& opts = {});

// Density of the law at x via Im m(x + i eta) / pi.
double density(const Transform& transform, double x, double eta,
               const SolverOptions& opts = {});

}  // namespace ncf
