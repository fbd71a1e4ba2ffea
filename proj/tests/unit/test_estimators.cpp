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

#include <doctest.h>

#include <cmath>
#include <vector>

#include "ncf/errors.hpp"
#include "ncf/estimators.hpp"
#include "ncf/monte_carlo.hpp"
#include "ncf/phase_maps.hpp"

using namespace ncf;

namespace {

const SpectralLaw kUnit = DiscreteMeasure::point_mass(1.0);

const std::vector<double> kRealSpectrum = {0.9152, 0.7755, 0.4560, 0.4034,
                                           0.2548, 0.2247, 0.0492};

}  // namespace

TEST_SUITE("spike_estimators") {
  TEST_CASE("local Stieltjes estimate by hand") {
    const std::vector<double> eigs = {4.0, 2.0, 1.0};
    const auto ls = local_stieltjes(eigs, 0, 6.0, 0.2);
    CHECK(ls.exclusion_set_size == 1);
    CHECK(ls.m_hat == doctest::Approx(-5.0 / 12.0).epsilon(1e-14));
    CHECK(ls.adjusted_ratio == doctest::Approx(2.0 / 6.0));
  }

  TEST_CASE("local Stieltjes estimate with everything excluded") {
    const std::vector<double> eigs = {4.0, 3.9, 3.5};
    CHECK_THROWS_AS(local_stieltjes(eigs, 0, 6.0, 0.2), DomainError);
  }

  TEST_CASE("local Stieltjes estimate tracks m2 on a simulated spectrum") {
    ModelSpec spec;
    spec.kind = ModelKind::covariance;
    spec.p = 500;
    spec.n = 5000;
    spec.spikes = {{10.0, 1, {}}};
    spec.finalize();
    const auto eigs = sample_spectrum(spec, 31);
    const auto ls = local_stieltjes(eigs, 0, 5000.0);
    const double lc = psi_cov(10.0, kUnit, 0.1);
    CHECK(std::abs(ls.m_hat - solve_m2(kUnit, 0.1, Complex(lc, 0.0)).real()) <
          0.02);
  }

  TEST_CASE("covariance inversion") {
    CHECK(invert_covariance_map(12.5, -0.3, 0.0) == doctest::Approx(11.5));
    for (double a : {3.0, 5.0, 7.5, 10.0}) {
      const double lc = psi_cov(a, kUnit, 0.1);
      const double m2 = solve_m2(kUnit, 0.1, Complex(lc, 0.0)).real();
      CHECK(std::abs(invert_covariance_map(lc, m2, 0.1) - a) < 1e-8);
    }
  }

  TEST_CASE("covariance estimator with a vanishing ratio") {
    const std::vector<double> eigs = {12.0, 1.1, 1.0, 0.9};
    const auto e = estimate_spike_cov(eigs, 0, 4, 1000000000);
    CHECK(e.estimate == doctest::Approx(11.0).epsilon(1e-6));
    CHECK_THROWS_AS(estimate_spike_cov(eigs, 0, 5, 100), DomainError);
  }

  TEST_CASE("fisher inversion") {
    const auto trivial = invert_fisher_map(9.0, -0.2, 0.0, 0.0);
    CHECK(trivial.a_hat == doctest::Approx(8.0));
    for (double a : {3.0, 5.0, 7.5, 10.0}) {
      const double lc = psi_cov(a, kUnit, 0.1);
      const double l = psi_fisher(lc, kUnit, 0.1, 0.2);
      const double m3 = solve_m3(kUnit, 0.1, 0.2, Complex(l, 0.0)).real();
      const auto inv = invert_fisher_map(l, m3, 0.1, 0.2);
      CHECK(std::abs(inv.a_tilde - lc) < 1e-8);
      CHECK(std::abs(inv.a_hat - a) < 1e-8);
    }
    CHECK_THROWS_AS(invert_fisher_map(1.0, -5.0, 0.1, 0.2), SingularityError);
  }

  TEST_CASE("rho from spike") {
    CHECK(rho_sq_from_spike(10.0, 200, 1000) == doctest::Approx(2.0 / 3.0));
  }

  TEST_CASE("CCA estimates for the reference spectrum") {
    const auto est = estimate_cca(kRealSpectrum, 7, 11, 188);
    REQUIRE(est.size() == 7);
    REQUIRE(est[0].rho_sq.has_value());
    CHECK(*est[0].rho_sq == doctest::Approx(0.9064).epsilon(0.0005 / 0.9064));
    CHECK(est[0].lambda_sq == 0.9152);
    CHECK(est[0].fisher_scale == doctest::Approx(g_map(0.9152, 11, 188)));
    const int only[] = {1};
    const auto one = estimate_cca(kRealSpectrum, 7, 11, 188, only);
    REQUIRE(one.size() == 1);
    CHECK(one[0].index == 1);
    const std::vector<double> bad = {1.0, 0.2, 0.1};
    CHECK_THROWS_AS(estimate_cca(bad, 3, 5, 50), DomainError);
  }

  TEST_CASE("multiplicity blocks average and exclude together") {
    const std::vector<double> eigs = {10.2, 9.8, 1.3, 1.1, 1.0, 0.9, 0.8, 0.7};
    EstimatorOptions opts;
    opts.block = 2;
    const auto e = estimate_spike_cov(eigs, 0, 8, 80, opts);
    CHECK(e.observed == doctest::Approx(10.0));
    CHECK(e.exclusion_set_size == 2);
    double s = 0.0;
    for (int i = 2; i < 8; ++i) s += 1.0 / (eigs[i] - 10.0);
    CHECK(e.local_st == doctest::Approx(s / 6.0));
    CHECK(e.adjusted_ratio == doctest::Approx(6.0 / 80.0));
  }
}
