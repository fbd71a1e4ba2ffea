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

#include "ncf/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "ncf/errors.hpp"

namespace ncf {

namespace {

constexpr double kPoleTolerance = 1e-14;
constexpr int kNewtonStageIterations = 100;

std::string describe(Complex z) {
  std::ostringstream out;
  out.precision(10);
  out << "(" << z.real() << (z.imag() < 0 ? " - " : " + ")
      << std::abs(z.imag()) << "i)";
  return out.str();
}

void check_ratio(double c, const char* name, bool allow_one) {
  if (!(c >= 0.0) || c > 1.0 || (!allow_one && c == 1.0)) {
    throw DomainError(std::string("ratio ") + name + " out of range: " +
                      std::to_string(c));
  }
}

// F(m; z) together with its partial derivatives.
struct Residual {
  Complex f;
  Complex fm;
  Complex fz;
};

struct NewtonResult {
  Complex m;
  Residual r;
  int iterations = 0;
  bool converged = false;
};

template <class Equation>
std::optional<Residual> try_eval(const Equation& eq, Complex m, Complex z) {
  try {
    Residual r = eq(m, z);
    if (!std::isfinite(std::abs(r.f)) || !std::isfinite(std::abs(r.fm))) {
      return std::nullopt;
    }
    return r;
  } catch (const Error&) {
    return std::nullopt;
  }
}

// Damped Newton on F(.; z) = 0. With `upper` the iterate is kept in the
// upper half plane; with `real_axis` it is kept real.
template <class Equation>
NewtonResult newton(const Equation& eq, Complex m0, Complex z, double tol,
                    int max_iterations, bool upper, bool real_axis) {
  NewtonResult out;
  out.m = real_axis ? Complex(m0.real(), 0.0) : m0;
  auto cur = try_eval(eq, out.m, z);
  if (!cur) return out;
  out.r = *cur;
  bool polished = false;
  while (out.iterations < max_iterations) {
    const double size = std::abs(out.r.f);
    if (size < tol) {
      // One extra step past the tolerance so values feed finite
      // differences at near machine precision.
      if (polished) break;
      polished = true;
    }
    if (out.r.fm == Complex(0.0)) return out;
    const Complex step = out.r.f / out.r.fm;
    bool accepted = false;
    double lambda = 1.0;
    for (int half = 0; half < 40; ++half, lambda *= 0.5) {
      Complex cand = out.m - lambda * step;
      if (real_axis) cand = Complex(cand.real(), 0.0);
      if (upper && !(cand.imag() > 0.0)) continue;
      auto next = try_eval(eq, cand, z);
      if (!next) continue;
      const double next_size = std::abs(next->f);
      if (next_size < size || (polished && next_size <= size)) {
        out.m = cand;
        out.r = *next;
        accepted = true;
        break;
      }
    }
    ++out.iterations;
    if (!accepted) {
      // Stalled at rounding level.
      out.converged = size < tol;
      return out;
    }
  }
  out.converged = std::abs(out.r.f) < tol;
  return out;
}

// Solve F(m; z) = 0 for the branch that behaves like -1/z at infinity.
// The path starts high above z in the imaginary direction and walks down,
// so the branch is fixed where it is unambiguous.
template <class Equation>
StSolution continuation_solve(const Equation& eq, Complex z, double scale,
                              const SolverOptions& opts, const char* what) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw DomainError(std::string(what) + ": non-finite evaluation point");
  }
  if (z.imag() < 0.0) {
    StSolution s = continuation_solve(eq, std::conj(z), scale, opts, what);
    s.value = std::conj(s.value);
    s.derivative = std::conj(s.derivative);
    return s;
  }
  const double x = z.real();
  const bool real_target = z.imag() == 0.0;
  const double floor =
      real_target ? 1e-12 * (1.0 + std::abs(x) + scale) : z.imag();
  double eta = std::max(10.0 * (1.0 + std::abs(z) + scale), floor);
  int used = 0;

  auto stage = [&](Complex m0, double at) {
    const int budget = std::min(kNewtonStageIterations,
                                opts.max_iterations - used);
    if (budget <= 0) {
      throw SolverError(std::string(what) + ": iteration budget exhausted at " +
                        describe(z));
    }
    NewtonResult r =
        newton(eq, m0, Complex(x, at), opts.tol, budget, true, false);
    used += r.iterations;
    return r;
  };

  NewtonResult cur = stage(-1.0 / Complex(x, eta), eta);
  if (!cur.converged) {
    throw SolverError(std::string(what) + ": no convergence at start of path");
  }
  while (eta > floor) {
    double ratio = 0.5;
    for (int attempt = 0;; ++attempt) {
      if (attempt == 40) {
        throw SolverError(std::string(what) + ": continuation stalled near " +
                          describe(Complex(x, eta)));
      }
      const double next = std::max(eta * ratio, floor);
      NewtonResult r = stage(cur.m, next);
      if (r.converged) {
        cur = r;
        eta = next;
        break;
      }
      ratio = 1.0 - 0.5 * (1.0 - ratio);
    }
  }

  StSolution out;
  if (!real_target) {
    out.value = cur.m;
    out.derivative = -cur.r.fz / cur.r.fm;
    out.residual = std::abs(cur.r.f);
    out.iterations = used;
    return out;
  }

  if (cur.m.imag() > 1e-8 * (1.0 + std::abs(cur.m))) {
    throw DomainError(std::string(what) + ": point " + describe(z) +
                      " lies inside the support");
  }
  NewtonResult polish = newton(eq, Complex(cur.m.real(), 0.0), z, opts.tol,
                               kNewtonStageIterations, false, true);
  used += polish.iterations;
  if (!polish.converged) {
    throw DomainError(std::string(what) + ": no real solution at " +
                      describe(z) + " (inside support)");
  }
  const double slope = (-polish.r.fz / polish.r.fm).real();
  if (!(slope > 0.0)) {
    throw DomainError(std::string(what) + ": real root at " + describe(z) +
                      " is not a Stieltjes branch (inside support)");
  }
  out.value = Complex(polish.m.real(), 0.0);
  out.derivative = Complex(slope, 0.0);
  out.residual = std::abs(polish.r.f);
  out.iterations = used;
  out.on_real_axis = true;
  return out;
}

double m2_scale(const SpectralLaw& h, double c1) {
  const double root = std::sqrt(law_support_bound(h)) + 1.0 + std::sqrt(c1);
  return root * root;
}

double m3_scale(const SpectralLaw& h, double c1, double c2) {
  const double gap = 1.0 - std::sqrt(c2);
  return m2_scale(h, c1) / (gap * gap);
}

}  // namespace

DiscreteMeasure::DiscreteMeasure(std::vector<Atom> atoms) {
  if (atoms.empty()) throw SpecError("measure has no atoms");
  std::map<double, double> merged;
  double total = 0.0;
  for (const Atom& a : atoms) {
    if (!std::isfinite(a.location) || a.location < 0.0) {
      throw SpecError("atom location must be finite and nonnegative");
    }
    if (!std::isfinite(a.weight) || !(a.weight > 0.0)) {
      throw SpecError("atom weight must be positive");
    }
    merged[a.location] += a.weight;
    total += a.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw SpecError("atom weights sum to " + std::to_string(total) +
                    ", expected 1");
  }
  atoms_.reserve(merged.size());
  for (const auto& [loc, w] : merged) atoms_.push_back({loc, w});
}

DiscreteMeasure DiscreteMeasure::point_mass(double location) {
  return DiscreteMeasure({{location, 1.0}});
}

DiscreteMeasure DiscreteMeasure::empirical(std::span<const double> values) {
  if (values.empty()) throw SpecError("empirical measure of no values");
  std::map<double, int> counts;
  for (double v : values) ++counts[v];
  std::vector<Atom> atoms;
  const double n = static_cast<double>(values.size());
  double used = 0.0;
  for (const auto& [loc, c] : counts) {
    atoms.push_back({loc, c / n});
    used += c / n;
  }
  // Absorb rounding so the total is 1 to the last bit that matters.
  atoms.back().weight += 1.0 - used;
  return DiscreteMeasure(std::move(atoms));
}

DiscreteMeasure DiscreteMeasure::mapped(
    const std::function<double(double)>& f) const {
  std::vector<Atom> out;
  out.reserve(atoms_.size());
  for (const Atom& a : atoms_) out.push_back({f(a.location), a.weight});
  return DiscreteMeasure(std::move(out));
}

double st_eval(const DiscreteMeasure& measure, double x) {
  double sum = 0.0;
  for (const Atom& a : measure.atoms()) {
    const double d = a.location - x;
    if (std::abs(d) <= kPoleTolerance * std::max(1.0, std::abs(a.location))) {
      throw PoleError("evaluation point " + std::to_string(x) +
                      " coincides with an atom");
    }
    sum += a.weight / d;
  }
  return sum;
}

Complex st_eval(const DiscreteMeasure& measure, Complex z) {
  if (z.imag() == 0.0) return st_eval(measure, z.real());
  Complex sum = 0.0;
  for (const Atom& a : measure.atoms()) sum += a.weight / (a.location - z);
  return sum;
}

namespace {

StSolution discrete_transform(const DiscreteMeasure& measure, Complex z) {
  StSolution s;
  if (z.imag() == 0.0) {
    s.value = st_eval(measure, z.real());
    double d = 0.0;
    for (const Atom& a : measure.atoms()) {
      const double t = a.location - z.real();
      d += a.weight / (t * t);
    }
    s.derivative = d;
    s.on_real_axis = true;
    return s;
  }
  Complex v = 0.0, d = 0.0;
  for (const Atom& a : measure.atoms()) {
    const Complex t = a.location - z;
    v += a.weight / t;
    d += a.weight / (t * t);
  }
  s.value = v;
  s.derivative = d;
  return s;
}

}  // namespace

StSolution law_transform(const SpectralLaw& law, Complex z,
                         const SolverOptions& opts) {
  if (const auto* d = std::get_if<DiscreteMeasure>(&law)) {
    return discrete_transform(*d, z);
  }
  const auto& mp = std::get<GeneralizedMarchenkoPastur>(law);
  return solve_silverstein(mp.population, mp.ratio, z, opts);
}

double law_transform(const SpectralLaw& law, double x,
                     const SolverOptions& opts) {
  return law_transform(law, Complex(x, 0.0), opts).real();
}

double law_support_bound(const SpectralLaw& law) {
  if (const auto* d = std::get_if<DiscreteMeasure>(&law)) {
    return d->max_location();
  }
  const auto& mp = std::get<GeneralizedMarchenkoPastur>(law);
  const double edge = 1.0 + std::sqrt(mp.ratio);
  return mp.population.max_location() * edge * edge;
}

StSolution solve_silverstein(const DiscreteMeasure& population, double y,
                             Complex z, const SolverOptions& opts) {
  check_ratio(y, "y", true);
  auto eq = [&](Complex m, Complex w) {
    Residual r{m, 1.0, 0.0};
    for (const Atom& a : population.atoms()) {
      const Complex d = a.location * (1.0 - y - y * w * m) - w;
      if (std::abs(d) == 0.0) throw PoleError("silverstein denominator");
      const Complex d2 = d * d;
      r.f -= a.weight / d;
      r.fm -= a.weight * a.location * y * w / d2;
      r.fz += a.weight * (-a.location * y * m - 1.0) / d2;
    }
    return r;
  };
  const double edge = 1.0 + std::sqrt(y);
  const double scale = population.max_location() * edge * edge;
  return continuation_solve(eq, z, scale, opts, "silverstein");
}

StSolution solve_m2(const SpectralLaw& h, double c1, Complex z,
                    const SolverOptions& opts) {
  check_ratio(c1, "c1", true);
  auto eq = [&](Complex m, Complex w) {
    const Complex b = 1.0 + c1 * m;
    const Complex y = b * (b * w - (1.0 - c1));
    const StSolution s = law_transform(h, y, opts);
    const Complex y_m = c1 * (2.0 * b * w - (1.0 - c1));
    Residual r;
    r.f = m - b * s.value;
    r.fm = 1.0 - c1 * s.value - b * s.derivative * y_m;
    r.fz = -b * s.derivative * b * b;
    return r;
  };
  return continuation_solve(eq, z, m2_scale(h, c1), opts, "m2");
}

StSolution solve_m3(const SpectralLaw& h, double c1, double c2, Complex z,
                    const SolverOptions& opts) {
  check_ratio(c1, "c1", true);
  check_ratio(c2, "c2", false);
  auto eq = [&](Complex m, Complex w) {
    const double k = 1.0 - c1;
    const Complex u = 1.0 + (c1 + c2 * w) * m;
    const Complex v = 1.0 + c2 * w * m;
    if (std::abs(v) == 0.0) throw PoleError("m3 denominator");
    const Complex g = w * u * u - k * u;
    const Complex y = g / v;
    const StSolution s = law_transform(h, y, opts);

    const Complex u_m = c1 + c2 * w;
    const Complex v_m = c2 * w;
    const Complex g_m = (2.0 * w * u - k) * u_m;
    const Complex y_m = (g_m * v - g * v_m) / (v * v);

    const Complex u_z = c2 * m;
    const Complex v_z = c2 * m;
    const Complex g_z = u * u + (2.0 * w * u - k) * u_z;
    const Complex y_z = (g_z * v - g * v_z) / (v * v);

    Residual r;
    r.f = m - u * s.value;
    r.fm = 1.0 - u_m * s.value - u * s.derivative * y_m;
    r.fz = -u_z * s.value - u * s.derivative * y_z;
    return r;
  };
  StSolution s =
      continuation_solve(eq, z, m3_scale(h, c1, c2), opts, "m3");
  if (c2 > 0.0) {
    const double res = compatibility_residual(h, c1, c2, z, s.value, opts);
    if (res > 10.0 * opts.tol * (1.0 + std::abs(s.value))) {
      throw BranchError("m3 at " + describe(z) +
                        " violates the m2 compatibility identity (residual " +
                        std::to_string(res) + ")");
    }
  }
  return s;
}

double compatibility_residual(const SpectralLaw& h, double c1, double c2,
                              Complex z, Complex m3,
                              const SolverOptions& opts) {
  const Complex factor = 1.0 + c2 * z * m3;
  if (std::abs(factor) == 0.0) throw PoleError("compatibility denominator");
  const Complex lhs = m3 / factor;
  const Complex rhs = solve_m2(h, c1, z * factor, opts).value;
  return std::abs(lhs - rhs);
}

Complex underline_m2(const SpectralLaw& h, double c1, Complex z,
                     const SolverOptions& opts) {
  if (z == Complex(0.0)) throw PoleError("underline m2 at z = 0");
  return -(1.0 - c1) / z + c1 * solve_m2(h, c1, z, opts).value;
}

double underline_m2(const SpectralLaw& h, double c1, double z,
                    const SolverOptions& opts) {
  return underline_m2(h, c1, Complex(z, 0.0), opts).real();
}

namespace {

Complex evaluate_at(const Transform& transform, Complex z,
                    const SolverOptions& opts) {
  return std::visit(
      [&](const auto& t) -> Complex {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, M1Transform>) {
          return law_transform(t.law, z, opts).value;
        } else if constexpr (std::is_same_v<T, M2Transform>) {
          return solve_m2(t.law, t.c1, z, opts).value;
        } else if constexpr (std::is_same_v<T, M3Transform>) {
          return solve_m3(t.law, t.c1, t.c2, z, opts).value;
        } else if constexpr (std::is_same_v<T, UnderlineM2Transform>) {
          return underline_m2(t.law, t.c1, z, opts);
        } else {
          return solve_silverstein(t.population, t.ratio, z, opts).value;
        }
      },
      transform);
}

}  // namespace

double evaluate(const Transform& transform, double z,
                const SolverOptions& opts) {
  return evaluate_at(transform, Complex(z, 0.0), opts).real();
}

double numeric_derivative(const std::function<double(double)>& f, double z) {
  const double h = std::max(1e-6, 1e-6 * std::abs(z));
  double fp1, fm1, fp2, fm2;
  try {
    fp1 = f(z + h);
    fm1 = f(z - h);
    fp2 = f(z + 2.0 * h);
    fm2 = f(z - 2.0 * h);
  } catch (const DomainError& e) {
    throw DomainError(std::string("insufficient clearance for derivative: ") +
                      e.what());
  }
  const double d1 = (fp1 - fm1) / (2.0 * h);
  const double d2 = (fp2 - fm2) / (4.0 * h);
  return (4.0 * d1 - d2) / 3.0;
}

double st_derivative(const Transform& transform, double z,
                     const SolverOptions& opts) {
  return numeric_derivative(
      [&](double x) { return evaluate(transform, x, opts); }, z);
}

double upper_support_edge(const Transform& transform, double outside,
                          const SolverOptions& opts) {
  auto is_outside = [&](double x) {
    try {
      evaluate(transform, x, opts);
      return true;
    } catch (const DomainError&) {
      return false;
    }
  };
  if (const auto* m1 = std::get_if<M1Transform>(&transform)) {
    if (const auto* d = std::get_if<DiscreteMeasure>(&m1->law)) {
      return d->max_location();
    }
  }
  if (!is_outside(outside)) {
    throw DomainError("starting point for edge search is inside the support");
  }
  // Fixed relative steps; a support narrower than a step can be missed.
  double hi = outside;
  double lo = hi - 0.01 * (1.0 + std::abs(hi));
  while (is_outside(lo)) {
    hi = lo;
    lo = hi - 0.01 * (1.0 + std::abs(hi));
    if (lo < -2.0 * (1.0 + std::abs(outside))) {
      throw DomainError("no support found below the starting point");
    }
  }
  for (int i = 0; i < 200 && hi - lo > 1e-13 * (1.0 + std::abs(hi)); ++i) {
    const double mid = 0.5 * (lo + hi);
    (is_outside(mid) ? hi : lo) = mid;
  }
  return hi;
}

double density(const Transform& transform, double x, double eta,
               const SolverOptions& opts) {
  if (!(eta > 0.0)) throw DomainError("density needs a positive eta");
  return evaluate_at(transform, Complex(x, eta), opts).imag() / M_PI;
}

}  // namespace ncf
