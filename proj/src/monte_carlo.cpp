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

#include "ncf/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <exception>
#include <numeric>
#include <thread>

#include "ncf/errors.hpp"

namespace ncf {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Runs fn(0..count-1) on up to `threads` workers. Errors are rethrown in
// index order so the reported failure does not depend on scheduling.
template <class Fn>
void parallel_for(int count, int threads, Fn&& fn) {
  if (threads <= 0) {
    threads = std::max(1u, std::thread::hardware_concurrency());
  }
  threads = std::min(threads, std::max(count, 1));
  std::vector<std::exception_ptr> errors(count);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

template <class S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

template <class S>
S draw(ReplicationRng& rng) {
  if constexpr (std::is_same_v<S, double>) {
    return rng.normal();
  } else {
    const double re = rng.normal() * M_SQRT1_2;
    const double im = rng.normal() * M_SQRT1_2;
    return S(re, im);
  }
}

template <class S>
Mat<S> gaussian(int rows, int cols, ReplicationRng& rng) {
  Mat<S> m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = draw<S>(rng);
  }
  return m;
}

// z z* scaled, full Hermitian matrix.
template <class S>
Mat<S> gram(const Mat<S>& z, double scale) {
  Mat<S> c = Mat<S>::Zero(z.rows(), z.rows());
  c.template selfadjointView<Eigen::Lower>().rankUpdate(z, scale);
  Mat<S> full = c.template selfadjointView<Eigen::Lower>();
  return full;
}

template <class S>
std::vector<double> descending_eigenvalues(const Mat<S>& a) {
  Eigen::SelfAdjointEigenSolver<Mat<S>> solver(a, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalRankError("eigenvalue decomposition failed");
  }
  const auto& ev = solver.eigenvalues();
  std::vector<double> out(ev.data(), ev.data() + ev.size());
  std::reverse(out.begin(), out.end());
  return out;
}

template <class S>
Mat<S> cholesky_factor(const Mat<S>& a, const char* what) {
  Eigen::LLT<Mat<S>> llt(a);
  if (llt.info() != Eigen::Success) {
    throw NumericalRankError(std::string(what) + " is not positive definite");
  }
  Mat<S> l = llt.matrixL();
  const auto d = l.diagonal().real();
  if (d.minCoeff() <= 1e-10 * d.maxCoeff()) {
    throw NumericalRankError(std::string(what) + " is numerically singular");
  }
  return l;
}

// L^{-1} A L^{-*} for Hermitian A.
template <class S>
Mat<S> whiten(const Mat<S>& l, const Mat<S>& a) {
  Mat<S> left = l.template triangularView<Eigen::Lower>().solve(a);
  Mat<S> right =
      l.template triangularView<Eigen::Lower>().solve(left.adjoint());
  Mat<S> sym = 0.5 * (right + right.adjoint());
  return sym;
}

template <class S>
SampleSpectra sample_typed(const ModelSpec& spec, ReplicationRng& rng) {
  const std::vector<double> pop = spec.population();
  SampleSpectra out;
  if (spec.kind == ModelKind::cca) {
    const int p = spec.p, q = spec.q, n = spec.n;
    Mat<S> x = gaussian<S>(p, n, rng);
    Mat<S> y = gaussian<S>(q, n, rng);
    for (int i = 0; i < p; ++i) {
      const double rho = std::sqrt(pop[i]);
      y.row(i) = rho * x.row(i) + std::sqrt(1.0 - pop[i]) * y.row(i);
    }
    const Mat<S> lx = cholesky_factor<S>(gram<S>(x, 1.0 / n), "S_xx");
    const Mat<S> ly = cholesky_factor<S>(gram<S>(y, 1.0 / n), "S_yy");
    Mat<S> sxy = x * y.adjoint() / double(n);
    Mat<S> a = lx.template triangularView<Eigen::Lower>().solve(sxy);
    Mat<S> b = ly.template triangularView<Eigen::Lower>().solve(a.adjoint());
    Mat<S> k = Mat<S>::Zero(p, p);
    k.template selfadjointView<Eigen::Lower>().rankUpdate(b.adjoint(), 1.0);
    Mat<S> full = k.template selfadjointView<Eigen::Lower>();
    out.primary = descending_eigenvalues<S>(full);
    return out;
  }

  const int p = spec.p, n = spec.n;
  Mat<S> z = gaussian<S>(p, n, rng);
  for (int i = 0; i < p; ++i) z(i, i) += std::sqrt(n * pop[i]);
  const Mat<S> c = gram<S>(z, 1.0 / n);
  if (spec.kind == ModelKind::covariance) {
    out.primary = descending_eigenvalues<S>(c);
    return out;
  }
  Mat<S> yn = gaussian<S>(p, spec.big_n, rng);
  const Mat<S> l = cholesky_factor<S>(gram<S>(yn, 1.0 / spec.big_n), "S_N");
  out.covariance = descending_eigenvalues<S>(c);
  out.primary = descending_eigenvalues<S>(whiten<S>(l, c));
  return out;
}

}  // namespace

const char* to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::covariance:
      return "covariance";
    case ModelKind::fisher:
      return "fisher";
    case ModelKind::cca:
      return "cca";
  }
  return "covariance";
}

const char* to_string(EstimatorPath path) {
  switch (path) {
    case EstimatorPath::cov:
      return "cov";
    case EstimatorPath::fisher:
      return "fisher";
    case EstimatorPath::cca:
      return "cca";
  }
  return "cov";
}

int ModelSpec::spike_count() const {
  int m = 0;
  for (const SpikeSpec& s : spikes) m += s.multiplicity;
  return m;
}

void ModelSpec::finalize() {
  if (p < 1) throw SpecError("p must be positive");
  switch (kind) {
    case ModelKind::covariance:
      if (n <= p) throw SpecError("covariance model needs p < n");
      break;
    case ModelKind::fisher:
      if (n <= p || big_n <= p) {
        throw SpecError("Fisher model needs p < n and p < N");
      }
      break;
    case ModelKind::cca:
      if (q < p) throw SpecError("CCA model needs p <= q");
      if (n <= p + q) throw SpecError("CCA model needs n > p + q");
      if (bulk.max_location() >= 1.0) {
        throw SpecError("CCA bulk must lie in [0, 1)");
      }
      for (const SpikeSpec& s : spikes) {
        if (!(s.value > 0.0 && s.value < 1.0)) {
          throw SpecError("CCA spikes must lie in (0, 1)");
        }
      }
      break;
  }
  for (const SpikeSpec& s : spikes) {
    if (kind != ModelKind::cca && !(s.value >= 0.0)) {
      throw SpecError("spike values must be nonnegative");
    }
  }
  if (spike_count() > p) throw SpecError("more spikes than dimensions");
  for (SpikeSpec& s : spikes) s.rank_set.clear();
  validate_spikes(spikes, separation);

  const std::vector<double> pop = population();
  for (SpikeSpec& s : spikes) {
    const int start = static_cast<int>(
        std::count_if(pop.begin(), pop.end(),
                      [&](double v) { return v > s.value; }));
    s.rank_set.resize(s.multiplicity);
    std::iota(s.rank_set.begin(), s.rank_set.end(), start);
  }
}

std::vector<double> ModelSpec::population() const {
  std::vector<double> values;
  for (const SpikeSpec& s : spikes) values.insert(values.end(), s.multiplicity, s.value);
  const int rest = p - static_cast<int>(values.size());
  if (rest < 0) throw SpecError("more spikes than dimensions");
  // Largest remainder apportionment of the bulk atoms.
  const auto atoms = bulk.atoms();
  std::vector<int> counts(atoms.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  int used = 0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const double exact = atoms[i].weight * rest;
    counts[i] = static_cast<int>(std::floor(exact));
    used += counts[i];
    remainders.emplace_back(exact - counts[i], i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (int k = 0; used < rest; ++k, ++used) ++counts[remainders[k].second];
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    values.insert(values.end(), counts[i], atoms[i].location);
  }
  std::sort(values.begin(), values.end(), std::greater<>());
  return values;
}

ModelSpec ModelSpec::with_p(int new_p) const {
  ModelSpec out = *this;
  const double r = double(new_p) / p;
  out.p = new_p;
  out.n = static_cast<int>(std::lround(n * r));
  out.big_n = static_cast<int>(std::lround(big_n * r));
  out.q = static_cast<int>(std::lround(q * r));
  out.finalize();
  return out;
}

Eigen::MatrixXd make_xi(std::span<const double> values, int n) {
  const int p = static_cast<int>(values.size());
  if (p >= n) throw SpecError("make_xi needs p < n");
  Eigen::MatrixXd xi = Eigen::MatrixXd::Zero(p, n);
  for (int i = 0; i < p; ++i) {
    if (values[i] < 0.0) throw SpecError("negative noncentral eigenvalue");
    xi(i, i) = std::sqrt(n * values[i]);
  }
  return xi;
}

Eigen::MatrixXd make_xi(const ModelSpec& spec) {
  const std::vector<double> pop = spec.population();
  return make_xi(pop, spec.n);
}

ReplicationRng::ReplicationRng(std::uint64_t master, std::uint64_t replication)
    : engine_(splitmix64(splitmix64(master) ^ splitmix64(~replication))) {}

SampleSpectra sample_spectra(const ModelSpec& spec, std::uint64_t seed,
                             std::uint64_t replication) {
  ReplicationRng rng(seed, replication);
  if (spec.field == Field::real) return sample_typed<double>(spec, rng);
  return sample_typed<std::complex<double>>(spec, rng);
}

std::vector<double> sample_spectrum(const ModelSpec& spec, std::uint64_t seed) {
  return sample_spectra(spec, seed, 0).primary;
}

double mean_of(std::span<const double> v) {
  if (v.empty()) return std::nan("");
  double s = 0.0;
  for (double x : v) s += x;
  return s / v.size();
}

double variance_of(std::span<const double> v) {
  if (v.size() < 2) return std::nan("");
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / (v.size() - 1);
}

SpikeTheory spike_theory(const ModelSpec& spec, int spike_index) {
  if (spike_index < 0 || spike_index >= static_cast<int>(spec.spikes.size())) {
    throw ConfigError("spike index out of range");
  }
  const double a = spec.spikes[spike_index].value;
  SpikeTheory th;
  th.beta = beta(spec.field);
  th.report.beta = th.beta;
  const SpectralLaw h = spec.bulk;
  switch (spec.kind) {
    case ModelKind::covariance: {
      const double c1 = double(spec.p) / spec.n;
      const SpikeLimit lim = covariance_spike_limit(a, h, c1);
      if (!lim.phase.valid()) {
        throw DomainError("spike " + std::to_string(a) +
                          " is not separated: " + lim.phase.reason);
      }
      th.center = *lim.lambda_c;
      th.variance_scale = theta1_formula(a, th.center, h, c1);
      th.report.theta1 = th.variance_scale;
      th.root_dim = std::sqrt(double(spec.n));
      break;
    }
    case ModelKind::fisher: {
      const double c1 = double(spec.p) / spec.n;
      const double c2 = double(spec.p) / spec.big_n;
      const SpikeLimit lim =
          fisher_spike_limit(spec.spikes[spike_index], h, c1, c2);
      if (!lim.phase.valid()) {
        throw DomainError("spike " + std::to_string(a) +
                          " is not separated: " + lim.phase.reason);
      }
      const FisherScale fs = theta2(a, *lim.lambda_c, *lim.lambda, h, c1, c2);
      th.center = *lim.lambda;
      th.variance_scale = fs.theta2;
      th.report.theta1 = fs.theta1;
      th.report.vartheta = fs.vartheta;
      th.report.theta2 = fs.theta2;
      th.root_dim = std::sqrt(double(spec.n));
      break;
    }
    case ModelKind::cca: {
      const CcaContext ctx = make_cca_context(spec.bulk, {spec.p, spec.q, spec.n});
      const CcaLimit lim = cca_chain(a, ctx);
      if (!lim.phase.valid()) {
        throw DomainError("CCA spike " + std::to_string(a) +
                          " is not separated: " + lim.phase.reason);
      }
      const CcaScale cs = eta(lim, ctx);
      th.center = *lim.t;
      th.variance_scale = cs.eta;
      th.report.eta1 = cs.eta1;
      th.report.eta2 = cs.eta2;
      th.report.eta3 = cs.eta3;
      th.report.eta = cs.eta;
      th.root_dim = std::sqrt(double(spec.q));
      break;
    }
  }
  return th;
}

ExperimentSummary run_clt(const ModelSpec& model, const CltOptions& opts) {
  if (opts.reps < 1) throw ConfigError("reps must be at least 1");
  ModelSpec spec = model;
  spec.finalize();
  ExperimentSummary out;
  out.mode = opts.mode == CltMode::normal ? "normal" : "goe_pair";
  out.seed = opts.seed;
  out.reps = opts.reps;
  out.theory = spike_theory(spec, opts.spike_index);
  const SpikeSpec& spike = spec.spikes[opts.spike_index];
  if (opts.mode == CltMode::normal && spike.multiplicity != 1) {
    throw SpecError("normal mode needs a spike of multiplicity 1");
  }
  if (opts.mode == CltMode::goe_pair && spike.multiplicity != 2) {
    throw SpecError("GOE pair mode needs a spike of multiplicity 2");
  }
  const double center = opts.center_override.value_or(out.theory.center);
  const double denom =
      std::sqrt(out.theory.beta * out.theory.variance_scale);

  out.replications.resize(opts.reps);
  parallel_for(opts.reps, opts.threads, [&](int i) {
    const SampleSpectra s = sample_spectra(spec, opts.seed, i);
    ReplicationRecord& r = out.replications[i];
    for (int k : spike.rank_set) {
      const double l = s.primary[k];
      r.eigenvalues.push_back(l);
      r.gamma.push_back(out.theory.root_dim * (l / center - 1.0) / denom);
    }
  });

  if (opts.mode == CltMode::normal) {
    std::vector<double> g;
    for (const auto& r : out.replications) g.push_back(r.gamma[0]);
    out.mean = mean_of(g);
    if (g.size() >= 2) out.variance = variance_of(g);
    if (g.size() >= 20) out.ks = ks_normal(g);
  } else {
    std::vector<std::array<double, 2>> pairs;
    for (const auto& r : out.replications) pairs.push_back({r.gamma[0], r.gamma[1]});
    const auto reference =
        sample_goe_pairs(opts.goe_reference, spec.field, splitmix64(opts.seed));
    out.goe_distance = joint_cdf_distance(pairs, reference);
  }
  return out;
}

namespace {

struct Target {
  int spike_index;
  int start;
  int block;
  double truth;
};

std::optional<double> estimate_one(EstimatorPath path, const ModelSpec& spec,
                                   const SampleSpectra& s, const Target& t,
                                   const EstimatorOptions& base) {
  EstimatorOptions eo = base;
  eo.block = t.block;
  try {
    switch (path) {
      case EstimatorPath::cov: {
        const auto& eigs =
            spec.kind == ModelKind::fisher ? s.covariance : s.primary;
        return estimate_spike_cov(eigs, t.start, spec.p, spec.n, eo).estimate;
      }
      case EstimatorPath::fisher:
        return estimate_spike_fisher(s.primary, t.start, spec.p, spec.n,
                                     spec.big_n, eo)
            .estimate;
      case EstimatorPath::cca: {
        const int idx[] = {t.start};
        const auto r =
            estimate_cca(s.primary, spec.p, spec.q, spec.n, idx, eo);
        return r.front().rho_sq;
      }
    }
  } catch (const DomainError&) {
  }
  return std::nullopt;
}

}  // namespace

ExperimentSummary run_mse(const ModelSpec& model, const MseOptions& opts) {
  if (opts.reps < 1) throw ConfigError("reps must be at least 1");
  if (opts.paths.empty()) throw ConfigError("no estimator path selected");
  for (EstimatorPath path : opts.paths) {
    const bool ok =
        (path == EstimatorPath::cov && model.kind != ModelKind::cca) ||
        (path == EstimatorPath::fisher && model.kind == ModelKind::fisher) ||
        (path == EstimatorPath::cca && model.kind == ModelKind::cca);
    if (!ok) {
      throw ConfigError(std::string("estimator path ") + to_string(path) +
                        " does not apply to a " + to_string(model.kind) +
                        " model");
    }
  }
  ExperimentSummary out;
  out.mode = "mse";
  out.seed = opts.seed;
  out.reps = opts.reps;
  std::vector<int> grid = opts.p_grid;
  if (grid.empty()) grid.push_back(model.p);

  for (int p : grid) {
    ModelSpec spec = model;
    spec.finalize();
    if (p != spec.p) spec = spec.with_p(p);
    std::vector<Target> targets;
    for (std::size_t j = 0; j < spec.spikes.size(); ++j) {
      const SpikeSpec& s = spec.spikes[j];
      targets.push_back({static_cast<int>(j), s.rank_set.front(),
                         s.multiplicity, s.value});
    }
    const std::size_t width = opts.paths.size() * targets.size();
    std::vector<std::vector<std::optional<double>>> est(opts.reps);
    const std::uint64_t stream_seed =
        splitmix64(opts.seed ^ (0x5851f42d4c957f2dULL * std::uint64_t(p)));
    parallel_for(opts.reps, opts.threads, [&](int i) {
      const SampleSpectra s = sample_spectra(spec, stream_seed, i);
      auto& row = est[i];
      row.reserve(width);
      for (EstimatorPath path : opts.paths) {
        for (const Target& t : targets) {
          row.push_back(estimate_one(path, spec, s, t, opts.estimator));
        }
      }
    });
    std::size_t col = 0;
    for (EstimatorPath path : opts.paths) {
      for (const Target& t : targets) {
        MseEntry e;
        e.p = p;
        e.path = path;
        e.spike_index = t.spike_index;
        e.true_value = t.truth;
        double sq = 0.0;
        for (const auto& row : est) {
          if (row[col]) {
            e.estimates.push_back(*row[col]);
            const double d = *row[col] - t.truth;
            sq += d * d;
          } else {
            ++e.failures;
          }
        }
        const double ok = static_cast<double>(e.estimates.size());
        e.mse = ok > 0 ? sq / ok : std::nan("");
        e.mean_estimate = mean_of(e.estimates);
        out.mse.push_back(std::move(e));
        ++col;
      }
    }
  }
  return out;
}

}  // namespace ncf
