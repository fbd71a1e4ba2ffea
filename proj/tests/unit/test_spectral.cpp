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

#include "fixtures.hpp"
#include "ncf/errors.hpp"
#include "ncf/monte_carlo.hpp"
#include "ncf/spectral.hpp"

using namespace ncf;

namespace {

// Root of c z m^2 + (z + c - 1) m + 1 = 0 that decays like -1/z.
double mp_root(double c, double z) {
  const double b = z + c - 1.0;
  const double disc = std::sqrt(b * b - 4.0 * c * z);
  const double r1 = (-b + disc) / (2.0 * c * z);
  const double r2 = (-b - disc) / (2.0 * c * z);
  return std::abs(r1) < std::abs(r2) ? r1 : r2;
}

double empirical_st(const std::vector<double>& eigs, double z) {
  double s = 0.0;
  for (double l : eigs) s += 1.0 / (l - z);
  return s / eigs.size();
}

ModelSpec null_model(ModelKind kind, int p, int n, int big_n) {
  ModelSpec spec;
  spec.kind = kind;
  spec.p = p;
  spec.n = n;
  spec.big_n = big_n;
  spec.finalize();
  return spec;
}

}  // namespace

TEST_SUITE("spectral_core") {
  TEST_CASE("discrete measure evaluation") {
    const auto d1 = DiscreteMeasure::point_mass(1.0);
    CHECK(st_eval(d1, 2.0) == doctest::Approx(-1.0));
    CHECK(st_eval(d1, 11.0) == doctest::Approx(-0.1));
    const DiscreteMeasure two({{1.0, 0.5}, {3.0, 0.5}});
    CHECK(std::abs(st_eval(two, 2.0)) < 1e-15);
    CHECK_THROWS_AS(st_eval(d1, 1.0), PoleError);
  }

  TEST_CASE("discrete measure validation") {
    CHECK_THROWS_AS(DiscreteMeasure({{1.0, 0.4}}), SpecError);
    CHECK_THROWS_AS(DiscreteMeasure({{-1.0, 1.0}}), SpecError);
    CHECK_THROWS_AS(DiscreteMeasure(std::vector<Atom>{}), SpecError);
    const DiscreteMeasure merged({{2.0, 0.25}, {1.0, 0.5}, {2.0, 0.25}});
    REQUIRE(merged.atoms().size() == 2);
    CHECK(merged.max_location() == 2.0);
    CHECK(merged.atoms()[1].weight == doctest::Approx(0.5));
  }

  TEST_CASE("m2 matches the quadratic root for a null signal") {
    const SpectralLaw h = DiscreteMeasure::point_mass(0.0);
    CHECK(solve_m2(h, 0.5, Complex(-1.0, 0.0)).real() ==
          doctest::Approx(0.56155281280883).epsilon(1e-12));
    for (double c : {0.1, 0.3, 0.5, 0.9}) {
      const double right = std::pow(1.0 + std::sqrt(c), 2);
      for (double z : {-4.0, -1.0, -0.1, right + 0.05, right + 1.0, 30.0}) {
        CAPTURE(c);
        CAPTURE(z);
        CHECK(std::abs(solve_m2(h, c, Complex(z, 0.0)).real() - mp_root(c, z)) <
              1e-9);
      }
    }
  }

  TEST_CASE("m2 derivative matches the implicit quadratic derivative") {
    const SpectralLaw h = DiscreteMeasure::point_mass(0.0);
    const double c = 0.5, z = -1.0;
    const double m = mp_root(c, z);
    const double expect = -(c * m * m + m) / (2.0 * c * z * m + z - 1.0 + c);
    CHECK(st_derivative(M2Transform{h, c}, z) ==
          doctest::Approx(expect).epsilon(1e-6));
    CHECK(solve_m2(h, c, Complex(z, 0.0)).derivative.real() ==
          doctest::Approx(expect).epsilon(1e-9));
  }

  TEST_CASE("m2 with c1 = 0 shifts the population transform") {
    const SpectralLaw h = DiscreteMeasure::point_mass(1.0);
    for (double z : {3.0, 5.0, 11.1335, -2.0}) {
      CHECK(solve_m2(h, 0.0, Complex(z, 0.0)).real() ==
            doctest::Approx(1.0 / (1.0 - (z - 1.0))).epsilon(1e-10));
    }
  }

  TEST_CASE("m2 is increasing to the right of the support") {
    const SpectralLaw h = DiscreteMeasure({{1.0, 0.5}, {4.0, 0.5}});
    const double edge = upper_support_edge(M2Transform{h, 0.2}, 50.0);
    double prev = -1e300;
    for (int i = 0; i < 100; ++i) {
      const double z = edge + 0.05 + 0.2 * i;
      const double m = solve_m2(h, 0.2, Complex(z, 0.0)).real();
      CHECK(m < 0.0);
      CHECK(m > prev);
      prev = m;
    }
  }

  TEST_CASE("m2 rejects real points inside the support") {
    const SpectralLaw h = DiscreteMeasure::point_mass(0.0);
    CHECK_THROWS_AS(solve_m2(h, 0.5, Complex(1.0, 0.0)), DomainError);
  }

  TEST_CASE("m2 off the real axis is a Herglotz value") {
    const SpectralLaw h = DiscreteMeasure::point_mass(1.0);
    const auto s = solve_m2(h, 0.1, Complex(2.0, 0.1));
    CHECK(s.value.imag() > 0.0);
    const auto conj = solve_m2(h, 0.1, Complex(2.0, -0.1));
    CHECK(std::abs(conj.value - std::conj(s.value)) < 1e-12);
  }

  TEST_CASE("m2 agrees with a simulated noncentral covariance spectrum") {
    const auto eigs = sample_spectrum(null_model(ModelKind::covariance, 500, 5000, 0), 11);
    const SpectralLaw h = DiscreteMeasure::point_mass(1.0);
    const double z = 11.1335;
    CHECK(std::abs(solve_m2(h, 0.1, Complex(z, 0.0)).real() -
                   empirical_st(eigs, z)) < 0.02);
    // Companion: (1/n) tr of the n x n resolvent.
    const double companion =
        (500 * empirical_st(eigs, z) - (5000 - 500) / z) / 5000.0;
    CHECK(std::abs(underline_m2(h, 0.1, z) - companion) < 0.02);
  }

  TEST_CASE("companion transform identities") {
    const SpectralLaw h = DiscreteMeasure::point_mass(1.0);
    const double z = 7.0;
    const double m = solve_m2(h, 0.5, Complex(z, 0.0)).real();
    CHECK(underline_m2(h, 0.5, z) ==
          doctest::Approx(-0.5 / z + 0.5 * m).epsilon(1e-12));
    CHECK(underline_m2(h, 0.0, z) == doctest::Approx(-1.0 / z));
    CHECK_THROWS_AS(underline_m2(h, 0.5, 0.0), PoleError);
  }

  TEST_CASE("m3 with c2 = 0 reduces to m2") {
    const SpectralLaw h = DiscreteMeasure({{1.0, 0.5}, {3.0, 0.5}});
    for (double z : {-1.0, 9.0, 20.0}) {
      CHECK(solve_m3(h, 0.2, 0.0, Complex(z, 0.0)).real() ==
            doctest::Approx(solve_m2(h, 0.2, Complex(z, 0.0)).real())
                .epsilon(1e-10));
    }
  }

  TEST_CASE("m3 satisfies the compatibility identity") {
    const SpectralLaw h = DiscreteMeasure::point_mass(1.0);
    const Complex z(14.0, 0.0);
    const auto s = solve_m3(h, 0.1, 0.2, z);
    CHECK(compatibility_residual(h, 0.1, 0.2, z, s.value) < 1e-8);
    const Complex w(3.0, 0.5);
    const auto t = solve_m3(h, 0.1, 0.2, w);
    CHECK(compatibility_residual(h, 0.1, 0.2, w, t.value) < 1e-8);
  }

  TEST_CASE("m3 agrees with a simulated noncentral Fisher spectrum") {
    const auto eigs =
        sample_spectrum(null_model(ModelKind::fisher, 500, 5000, 2500), 12);
    const SpectralLaw h = DiscreteMeasure::point_mass(1.0);
    CHECK(std::abs(solve_m3(h, 0.1, 0.2, Complex(14.0, 0.0)).real() -
                   empirical_st(eigs, 14.0)) < 0.02);
  }

  TEST_CASE("silverstein reductions") {
    CHECK(solve_silverstein(DiscreteMeasure::point_mass(1.0), 0.5,
                            Complex(-1.0, 0.0))
              .real() == doctest::Approx(0.56155281280883).epsilon(1e-10));
    for (double z : {-3.0, 2.0, 7.5}) {
      CHECK(solve_silverstein(DiscreteMeasure::point_mass(0.0), 0.4,
                              Complex(z, 0.0))
                .real() == doctest::Approx(-1.0 / z));
    }
  }

  TEST_CASE("silverstein agrees with a simulated sample covariance") {
    const int p = 500, n = 1667;
    Eigen::MatrixXd x = testing::gaussian_matrix(p, n, 21);
    for (int i = p / 2; i < p; ++i) x.row(i) *= 2.0;
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(p, p);
    s.selfadjointView<Eigen::Lower>().rankUpdate(x, 1.0 / n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
        s.selfadjointView<Eigen::Lower>(), Eigen::EigenvaluesOnly);
    const Eigen::VectorXd ev = es.eigenvalues();
    const std::vector<double> eigs(ev.data(), ev.data() + p);
    const DiscreteMeasure pop({{1.0, 0.5}, {4.0, 0.5}});
    CHECK(std::abs(solve_silverstein(pop, 0.3, Complex(-2.0, 0.0)).real() -
                   empirical_st(eigs, -2.0)) < 0.02);
  }

  TEST_CASE("derivatives of transforms") {
    const SpectralLaw d1 = DiscreteMeasure::point_mass(1.0);
    CHECK(st_derivative(M1Transform{d1}, 2.0) == doctest::Approx(1.0));
    CHECK(st_derivative(M1Transform{d1}, 11.0) == doctest::Approx(0.01));
    CHECK(numeric_derivative([](double z) { return z * z * z; }, 2.0) ==
          doctest::Approx(12.0).epsilon(1e-8));
    CHECK_THROWS_AS(st_derivative(M2Transform{d1, 0.1}, 3.2), DomainError);
  }

  TEST_CASE("upper support edge and density") {
    const SpectralLaw h0 = DiscreteMeasure::point_mass(0.0);
    const double edge = upper_support_edge(M2Transform{h0, 0.25}, 10.0);
    CHECK(edge == doctest::Approx(2.25).epsilon(1e-5));
    // Marchenko-Pastur density at x = 1 for ratio 1/4.
    const double a = 0.25, b = 2.25, x = 1.0;
    const double expect = std::sqrt((b - x) * (x - a)) / (2.0 * M_PI * 0.25 * x);
    CHECK(density(M2Transform{h0, 0.25}, x, 1e-6) ==
          doctest::Approx(expect).epsilon(1e-3));
  }
}
