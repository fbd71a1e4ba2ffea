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

#include "ncf/fluctuation.hpp"

#include <cmath>
#include <string>

#include "ncf/errors.hpp"

namespace ncf {

double theta1_formula(double a, double lambda_c, const SpectralLaw& h,
                      double c1, const SolverOptions& opts) {
  const StSolution s = solve_m2(h, c1, Complex(lambda_c, 0.0), opts);
  const double m = s.real();
  const double dm = s.derivative.real();
  const double l = lambda_c;
  const double um = -(1.0 - c1) / l + c1 * m;
  const double dum = (1.0 - c1) / (l * l) + c1 * dm;
  const double b = 1.0 + c1 * m;
  const double b2 = b * b;

  const double den = l * dum + a * (1.0 + c1 * m + c1 * l * dm) / (l * b2);
  const double num = dum + a * a * c1 * dm / (l * l * b2 * b2) +
                     2.0 * a * (1.0 + um + l * dum) / (l * l * b2);
  return num / (den * den);
}

double theta1(double a, double lambda_c, const SpectralLaw& h, double c1,
              const SolverOptions& opts) {
  const PhaseCheck phase = check_phase_cov(a, h, c1, opts);
  if (!phase.valid()) {
    throw DomainError("theta1 needs a valid spike: " + phase.reason);
  }
  return theta1_formula(a, lambda_c, h, c1, opts);
}

double vartheta_formula(double lambda, const SpectralLaw& h, double c1,
                        double c2, const SolverOptions& opts) {
  const StSolution s = solve_m3(h, c1, c2, Complex(lambda, 0.0), opts);
  return 1.0 + 2.0 * lambda * c2 * s.real() +
         c2 * lambda * lambda * s.derivative.real();
}

FisherScale theta2(double a, double lambda_c, double lambda,
                   const SpectralLaw& h, double c1, double c2,
                   const SolverOptions& opts) {
  const PhaseCheck phase = check_phase_fisher(a, h, c1, c2, opts);
  if (!phase.valid()) {
    throw DomainError("theta2 needs a valid spike: " + phase.reason);
  }
  FisherScale out{};
  out.theta1 = theta1_formula(a, lambda_c, h, c1, opts);
  if (c2 == 0.0) {
    out.vartheta = 1.0;
    out.theta2 = out.theta1;
    return out;
  }
  if (c1 == 0.0) {
    throw DomainError("theta2 has c2/c1 with c1 = 0");
  }
  const StSolution m3 = solve_m3(h, c1, c2, Complex(lambda, 0.0), opts);
  out.vartheta = 1.0 + 2.0 * lambda * c2 * m3.real() +
                 c2 * lambda * lambda * m3.derivative.real();
  const double dm2 =
      solve_m2(h, c1, Complex(lambda_c, 0.0), opts).derivative.real();
  const double bracket = (1.0 - c2 * lambda_c * lambda_c * dm2) /
                         (1.0 + c2 * lambda * m3.real());
  out.theta2 = c2 / (c1 * out.vartheta) + bracket * bracket * out.theta1;
  return out;
}

CcaScale eta(const CcaLimit& chain, const CcaContext& ctx,
             const SolverOptions& opts) {
  if (!chain.phase.valid() || !chain.t) {
    throw DomainError("eta needs a valid CCA spike: " + chain.phase.reason);
  }
  const CcaDims& d = ctx.dims;
  const SpectralLaw mp = ctx.mp_bulk;
  const double c3 = ctx.c3;
  const double c4 = ctx.c4;
  const double y = double(d.p) / d.n;
  const double a = *chain.psi_xi;
  const double lc = *chain.psi_c;
  const double l = *chain.psi;
  const double t = *chain.t;

  CcaScale out{};
  out.eta1 = theta1_formula(a, lc, mp, c3, opts);

  const StSolution mf = solve_m3(mp, c3, c4, Complex(l, 0.0), opts);
  out.eta2 = 1.0 + 2.0 * l * c4 * mf.real() +
             c4 * l * l * mf.derivative.real();

  const StSolution mc = solve_m2(mp, c3, Complex(lc, 0.0), opts);
  const double mc_v = mc.real();
  const double mc_d = mc.derivative.real();
  const double bracket =
      (1.0 - c4 * lc * lc * mc_d) / (1.0 + c4 * l * mf.real());

  const double fd_den = 1.0 + c4 * lc * mc_v;
  const double dpsi_f = (1.0 - c4 * lc * lc * mc_d) / (fd_den * fd_den);
  const double dpsi_c = numeric_derivative(
      [&](double x) { return psi_cov(x, mp, c3, ctx.form, opts); }, a);
  // Companion transform of the M-P law over tilde H at ratio p/n.
  const StSolution mpv = law_transform(mp, Complex(a, 0.0), opts);
  const double dum = (1.0 - y) / (a * a) + y * mpv.derivative.real();
  out.eta3 = (double(d.q) / d.n) * dpsi_f * dpsi_f * dpsi_c * dpsi_c /
             (dum * l * l);

  const double inner = c4 / (c3 * out.eta2) + bracket * bracket * out.eta1 +
                       out.eta3;
  const double den = c3 + c4 * l;
  out.eta = inner * c3 * c3 * c4 * c4 * l * l / (den * den * den * den * t * t);
  return out;
}

}  // namespace ncf
