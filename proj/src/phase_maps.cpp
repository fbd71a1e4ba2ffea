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

#include "ncf/phase_maps.hpp"

#include <cmath>
#include <set>
#include <string>

#include "ncf/errors.hpp"

namespace ncf {

namespace {

PhaseStatus classify(double derivative) {
  if (derivative > kPhaseMargin) return PhaseStatus::valid;
  if (std::abs(derivative) <= kPhaseMargin) return PhaseStatus::critical;
  return PhaseStatus::invalid;
}

// Adds one derivative condition; the overall status is the worst seen.
void add_condition(PhaseCheck& check, const std::string& name,
                   double derivative) {
  check.derivatives.emplace_back(name, derivative);
  const PhaseStatus s = classify(derivative);
  if (s == PhaseStatus::invalid) {
    check.status = PhaseStatus::invalid;
    if (check.reason.empty()) check.reason = name + " is negative";
  } else if (s == PhaseStatus::critical &&
             check.status == PhaseStatus::valid) {
    check.status = PhaseStatus::critical;
    check.reason = name + " is within the phase margin of zero";
  }
}

void fail(PhaseCheck& check, const std::string& name, const Error& e) {
  check.status = PhaseStatus::invalid;
  check.reason = name + ": " + e.what();
}

}  // namespace

void validate_spikes(const std::vector<SpikeSpec>& spikes, double separation) {
  std::set<int> ranks;
  for (const SpikeSpec& s : spikes) {
    if (!std::isfinite(s.value)) throw SpecError("spike value is not finite");
    if (s.multiplicity < 1) throw SpecError("spike multiplicity must be >= 1");
    if (!s.rank_set.empty()) {
      if (static_cast<int>(s.rank_set.size()) != s.multiplicity) {
        throw SpecError("rank set size differs from multiplicity");
      }
      for (std::size_t i = 0; i < s.rank_set.size(); ++i) {
        if (i > 0 && s.rank_set[i] != s.rank_set[i - 1] + 1) {
          throw SpecError("rank set is not consecutive");
        }
        if (!ranks.insert(s.rank_set[i]).second) {
          throw SpecError("rank sets overlap");
        }
      }
    }
  }
  for (std::size_t k = 0; k < spikes.size(); ++k) {
    for (std::size_t j = 0; j < spikes.size(); ++j) {
      if (j == k) continue;
      if (spikes[j].value == 0.0) throw SpecError("spike value is zero");
      const double gap = std::abs(spikes[k].value / spikes[j].value - 1.0);
      if (!(gap > separation)) {
        throw SpecError("spikes " + std::to_string(spikes[k].value) + " and " +
                        std::to_string(spikes[j].value) +
                        " violate the separation condition");
      }
    }
  }
}

double psi_cov(double a, const SpectralLaw& h, double c1,
               CovarianceMapForm form, const SolverOptions& opts) {
  if (!(c1 >= 0.0 && c1 <= 1.0)) throw DomainError("c1 out of range");
  const double m1 = law_transform(h, a, opts);
  const double s = 1.0 - c1 * m1;
  const double sign = form == CovarianceMapForm::standard ? 1.0 : -1.0;
  return a * s * s + sign * (1.0 - c1) * s;
}

double psi_fisher(double x, const SpectralLaw& h, double c1, double c2,
                  const SolverOptions& opts) {
  if (c2 == 0.0) return x;
  const double m2 = solve_m2(h, c1, Complex(x, 0.0), opts).real();
  const double den = 1.0 + c2 * x * m2;
  if (std::abs(den) < 1e-12) {
    throw SingularityError("psi_F denominator vanishes at x = " +
                           std::to_string(x));
  }
  return x / den;
}

const char* to_string(PhaseStatus status) {
  switch (status) {
    case PhaseStatus::valid:
      return "valid";
    case PhaseStatus::critical:
      return "critical";
    case PhaseStatus::invalid:
      return "invalid";
  }
  return "invalid";
}

PhaseCheck check_phase_cov(double a, const SpectralLaw& h, double c1,
                           const SolverOptions& opts) {
  PhaseCheck check;
  check.status = PhaseStatus::valid;
  try {
    psi_cov(a, h, c1, CovarianceMapForm::standard, opts);
    add_condition(check, "psi_C'",
                  numeric_derivative(
                      [&](double x) {
                        return psi_cov(x, h, c1, CovarianceMapForm::standard,
                                       opts);
                      },
                      a));
  } catch (const Error& e) {
    fail(check, "psi_C", e);
  }
  return check;
}

PhaseCheck check_phase_fisher(double a, const SpectralLaw& h, double c1,
                              double c2, const SolverOptions& opts) {
  PhaseCheck check = check_phase_cov(a, h, c1, opts);
  if (check.status == PhaseStatus::invalid) return check;
  try {
    const double x = psi_cov(a, h, c1, CovarianceMapForm::standard, opts);
    add_condition(
        check, "psi_F'",
        numeric_derivative(
            [&](double v) { return psi_fisher(v, h, c1, c2, opts); }, x));
  } catch (const Error& e) {
    fail(check, "psi_F", e);
  }
  return check;
}

SpikeLimit covariance_spike_limit(double a, const SpectralLaw& h, double c1,
                                  const SolverOptions& opts) {
  SpikeLimit out;
  out.spike = a;
  out.phase = check_phase_cov(a, h, c1, opts);
  if (out.phase.status != PhaseStatus::invalid) {
    out.lambda_c = psi_cov(a, h, c1, CovarianceMapForm::standard, opts);
    out.lambda = out.lambda_c;
  }
  return out;
}

SpikeLimit fisher_spike_limit(const SpikeSpec& spec, const SpectralLaw& h,
                              double c1, double c2,
                              const SolverOptions& opts) {
  SpikeLimit out;
  out.spike = spec.value;
  out.phase = check_phase_fisher(spec.value, h, c1, c2, opts);
  if (out.phase.status != PhaseStatus::invalid) {
    out.lambda_c =
        psi_cov(spec.value, h, c1, CovarianceMapForm::standard, opts);
    out.lambda = psi_fisher(*out.lambda_c, h, c1, c2, opts);
  }
  return out;
}

void validate_cca_dims(const CcaDims& dims) {
  if (dims.p < 1 || dims.q < dims.p || dims.n <= dims.q) {
    throw DomainError("CCA dimensions need 1 <= p <= q < n");
  }
}

double g_map(double lambda_sq, int q, int n) {
  if (!(lambda_sq >= 0.0 && lambda_sq < 1.0)) {
    throw DomainError("squared canonical correlation must lie in [0, 1)");
  }
  if (q >= n) throw DomainError("g needs q < n");
  return (n - q) * lambda_sq / (q * (1.0 - lambda_sq));
}

double g_inv(double l, int q, int n) {
  if (!(l >= 0.0) || !std::isfinite(l)) {
    throw DomainError("g inverse needs a finite l >= 0");
  }
  if (q >= n) throw DomainError("g needs q < n");
  return l * q / ((n - q) + l * q);
}

double f_map(double alpha, int q, int n) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw DomainError("alpha must lie in [0, 1)");
  }
  return (double(n) / q) * alpha / (1.0 - alpha);
}

CcaContext make_cca_context(const DiscreteMeasure& hcca, const CcaDims& dims,
                            CovarianceMapForm form) {
  validate_cca_dims(dims);
  if (hcca.max_location() >= 1.0) {
    throw SpecError("CCA bulk must be supported in [0, 1)");
  }
  DiscreteMeasure tilde =
      hcca.mapped([&](double r) { return f_map(r, dims.q, dims.n); });
  const double y = double(dims.p) / dims.n;
  return CcaContext{dims,
                    tilde,
                    GeneralizedMarchenkoPastur{tilde, y},
                    double(dims.p) / dims.q,
                    double(dims.p) / (dims.n - dims.q),
                    form};
}

double psi_xi(double x, const CcaContext& ctx) {
  const double y = double(ctx.dims.p) / ctx.dims.n;
  double integral = 0.0;
  for (const Atom& a : ctx.tilde_h.atoms()) {
    const double d = x - a.location;
    if (std::abs(d) <= 1e-14 * std::max(1.0, a.location)) {
      throw PoleError("psi_Xi evaluated at a bulk atom");
    }
    integral += a.weight * a.location / d;
  }
  return x * (1.0 + y * integral);
}

CcaLimit cca_chain(double alpha, const CcaContext& ctx,
                   const SolverOptions& opts) {
  CcaLimit out;
  out.alpha = alpha;
  out.phase.status = PhaseStatus::valid;
  const CcaDims& d = ctx.dims;
  const SpectralLaw mp = ctx.mp_bulk;

  auto cov = [&](double x) {
    return psi_cov(x, mp, ctx.c3, ctx.form, opts);
  };
  auto fisher = [&](double x) {
    return psi_fisher(x, mp, ctx.c3, ctx.c4, opts);
  };
  auto xi = [&](double x) { return psi_xi(x, ctx); };

  const char* stage = "f";
  try {
    out.f = f_map(alpha, d.q, d.n);
    stage = "psi_Xi";
    out.psi_xi = xi(*out.f);
    add_condition(out.phase, "psi_Xi'", numeric_derivative(xi, *out.f));
    stage = "psi_C";
    out.psi_c = cov(*out.psi_xi);
    add_condition(out.phase, "psi_C'", numeric_derivative(cov, *out.psi_xi));
    stage = "psi_F";
    out.psi = fisher(*out.psi_c);
    add_condition(out.phase, "psi_F'", numeric_derivative(fisher, *out.psi_c));
    stage = "g_inv";
    out.t = g_inv(*out.psi, d.q, d.n);
    if (!(*out.t > 0.0 && *out.t < 1.0)) {
      throw DomainError("t(alpha) outside (0, 1)");
    }
  } catch (const SpecError&) {
    throw;
  } catch (const Error& e) {
    out.failed_stage = stage;
    fail(out.phase, stage, e);
  }
  return out;
}

CcaLimit cca_chain(double alpha, const DiscreteMeasure& hcca,
                   const CcaDims& dims, const SolverOptions& opts) {
  return cca_chain(alpha, make_cca_context(hcca, dims), opts);
}

ZeroBulkCca phi_zero_case(double alpha, double r1, double r2) {
  if (alpha == 0.0) throw PoleError("phi has a pole at alpha = 0");
  if (!(r1 >= 0.0 && r1 < 1.0 && r2 >= 0.0 && r2 < 1.0)) {
    throw DomainError("r1, r2 must lie in [0, 1)");
  }
  const double phi =
      (alpha * (1.0 - r1) + r1) * (alpha * (1.0 - r2) + r2) / alpha;
  const double alpha_r = std::sqrt(r1 * r2 / ((1.0 - r1) * (1.0 - r2)));
  return {phi, alpha_r};
}

}  // namespace ncf
