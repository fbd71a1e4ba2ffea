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

// Acceptance checks, one per criterion: ncf_acceptance <1-10>
// Prints "criterion N: PASS|FAIL <details>". Criterion 8 is exploratory
// and never fails the process.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "ncf/commands.hpp"
#include "ncf/errors.hpp"
#include "ncf/estimators.hpp"
#include "ncf/fluctuation.hpp"
#include "ncf/monte_carlo.hpp"
#include "ncf/phase_maps.hpp"
#include "ncf/report.hpp"

using namespace ncf;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    detail << (ok ? "" : "[fail] ") << what << "; ";
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

const SpectralLaw kUnit = DiscreteMeasure::point_mass(1.0);

ModelSpec design(ModelKind kind, int p, int n, int big_n, int q,
                 std::vector<SpikeSpec> spikes, DiscreteMeasure bulk) {
  ModelSpec spec;
  spec.kind = kind;
  spec.p = p;
  spec.n = n;
  spec.big_n = big_n;
  spec.q = q;
  spec.bulk = std::move(bulk);
  spec.spikes = std::move(spikes);
  spec.finalize();
  return spec;
}

double mp_root(double c, double z) {
  const double b = z + c - 1.0;
  const double disc = std::sqrt(b * b - 4.0 * c * z);
  const double r1 = (-b + disc) / (2.0 * c * z);
  const double r2 = (-b - disc) / (2.0 * c * z);
  return std::abs(r1) < std::abs(r2) ? r1 : r2;
}

void criterion1(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const SpectralLaw h = DiscreteMeasure::point_mass(0.0);
  const double c = 0.5;
  const double right = std::pow(1.0 + std::sqrt(c), 2);
  double worst = 0.0;
  int points = 0;
  for (int i = 0; i < 10; ++i) {
    const double zs[] = {-0.2 - 0.5 * i, right + 0.05 + 0.6 * i};
    for (double z : zs) {
      const double m = solve_m2(h, c, Complex(z, 0.0)).real();
      worst = std::max(worst, std::abs(m - mp_root(c, z)));
      ++points;
    }
  }
  const double secs = seconds_since(t0);
  o.require(points == 20, "points " + std::to_string(points));
  o.require(worst < 1e-8, "max error " + fmt(worst));
  o.require(secs < 1.0, "runtime " + fmt(secs) + " s");
}

void criterion2(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const SpectralLaw laws[] = {kUnit, DiscreteMeasure({{1.0, 0.5}, {3.0, 0.5}})};
  double worst = 0.0;
  int points = 0;
  for (const SpectralLaw& h : laws) {
    for (double c1 : {0.05, 0.1, 0.2, 0.3, 0.5}) {
      for (double c2 : {0.05, 0.2, 0.4}) {
        const double edge = upper_support_edge(M3Transform{h, c1, c2}, 500.0);
        const Complex zs[] = {{edge * 1.05, 0.0}, {edge * 1.5, 0.0},
                              {edge * 3.0, 0.0},  {0.5 * edge, 0.5},
                              {edge, 1.0}};
        for (Complex z : zs) {
          const auto s = solve_m3(h, c1, c2, z);
          worst = std::max(worst, compatibility_residual(h, c1, c2, z, s.value));
          ++points;
        }
      }
    }
  }
  const double secs = seconds_since(t0);
  o.require(points >= 100, "points " + std::to_string(points));
  o.require(worst < 1e-8, "max residual " + fmt(worst));
  o.require(secs < 5.0, "runtime " + fmt(secs) + " s");
}

// Mean of the top two eigenvalues over reps, against the spike limits.
void spike_means(Outcome& o, const ModelSpec& spec, std::uint64_t seed,
                 int reps, const char* label) {
  double sums[2] = {0.0, 0.0};
  for (int i = 0; i < reps; ++i) {
    const auto s = sample_spectra(spec, seed, i);
    sums[0] += s.primary[0];
    sums[1] += s.primary[1];
  }
  for (int k = 0; k < 2; ++k) {
    const double mean = sums[k] / reps;
    const double center = spike_theory(spec, k).center;
    const double rel = mean / center - 1.0;
    o.require(std::abs(rel) < 0.01,
              std::string(label) + " l" + std::to_string(k + 1) + " mean " +
                  fmt(mean) + " vs " + fmt(center) + " (rel " + fmt(rel) + ")");
  }
}

std::vector<SpikeSpec> design_spikes() { return {{10.0, 1, {}}, {7.5, 1, {}}}; }

void criterion3(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  spike_means(o, design(ModelKind::covariance, 200, 2000, 0, 0, design_spikes(),
                        DiscreteMeasure::point_mass(1.0)),
              301, 500, "covariance");
  spike_means(o, design(ModelKind::fisher, 200, 2000, 1000, 0, design_spikes(),
                        DiscreteMeasure::point_mass(1.0)),
              302, 500, "fisher");
  o.detail << "runtime " << fmt(seconds_since(t0)) << " s; ";
}

void criterion4(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const ModelSpec specs[] = {
      design(ModelKind::covariance, 200, 2000, 0, 0, design_spikes(),
             DiscreteMeasure::point_mass(1.0)),
      design(ModelKind::fisher, 200, 2000, 1000, 0, design_spikes(),
             DiscreteMeasure::point_mass(1.0))};
  for (const ModelSpec& spec : specs) {
    for (int k = 0; k < 2; ++k) {
      CltOptions opts;
      opts.spike_index = k;
      opts.reps = 1000;
      opts.seed = 401 + k;
      const auto run = run_clt(spec, opts);
      const std::string label = std::string(to_string(spec.kind)) + " a=" +
                                fmt(spec.spikes[k].value);
      o.require(run.ks->p_value > 0.01,
                label + " KS p " + fmt(run.ks->p_value) + " (D " +
                    fmt(run.ks->distance) + ", mean " + fmt(*run.mean) + ")");
      o.require(*run.variance >= 0.8 && *run.variance <= 1.2,
                label + " variance " + fmt(*run.variance));
    }
  }
  o.detail << "runtime " << fmt(seconds_since(t0)) << " s; ";
}

void criterion5(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const CcaDims dims{200, 200, 1000};
  const auto zero = DiscreteMeasure::point_mass(0.0);
  double worst = 0.0;
  for (double alpha : {0.3, 0.5, 0.7, 0.9}) {
    const auto chain = cca_chain(alpha, zero, dims);
    if (!chain.t) {
      o.require(false, "alpha " + fmt(alpha) + " failed at " + chain.failed_stage);
      continue;
    }
    worst = std::max(worst,
                     std::abs(*chain.t - phi_zero_case(alpha, 0.2, 0.2).phi));
  }
  const double ar = phi_zero_case(0.5, 0.2, 0.2).alpha_r;
  const double secs = seconds_since(t0);
  o.require(worst < 1e-3, "max |t - phi| " + fmt(worst));
  o.require(std::abs(ar - 0.25) < 1e-12, "alpha_r " + fmt(ar));
  o.require(secs < 10.0, "runtime " + fmt(secs) + " s");
}

void criterion6(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  double worst_cov = 0.0, worst_f = 0.0;
  for (double a : {3.0, 5.0, 7.5, 10.0}) {
    const double lc = psi_cov(a, kUnit, 0.1);
    const double m2 = solve_m2(kUnit, 0.1, Complex(lc, 0.0)).real();
    worst_cov = std::max(worst_cov, std::abs(invert_covariance_map(lc, m2, 0.1) - a));
    const double l = psi_fisher(lc, kUnit, 0.1, 0.2);
    const double m3 = solve_m3(kUnit, 0.1, 0.2, Complex(l, 0.0)).real();
    worst_f = std::max(worst_f, std::abs(invert_fisher_map(l, m3, 0.1, 0.2).a_hat - a));
  }
  const double secs = seconds_since(t0);
  o.require(worst_cov < 1e-8, "covariance max error " + fmt(worst_cov));
  o.require(worst_f < 1e-8, "fisher max error " + fmt(worst_f));
  o.require(secs < 1.0, "runtime " + fmt(secs) + " s");
}

std::vector<SpikeSpec> cca_spikes(bool repeated) {
  if (repeated) return {{10.0 / 11.0, 1, {}}, {15.0 / 17.0, 2, {}}};
  return {{10.0 / 11.0, 1, {}}, {15.0 / 17.0, 1, {}}};
}

void criterion7(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<int> grid = {100, 200, 400};
  MseOptions opts;
  opts.p_grid = grid;
  opts.reps = 500;
  opts.seed = 701;
  opts.paths = {EstimatorPath::cov, EstimatorPath::fisher};
  const auto sf = run_mse(
      design(ModelKind::fisher, 100, 1000, 500, 0,
             {{10.0, 1, {}}, {7.5, 2, {}}}, DiscreteMeasure::point_mass(1.0)),
      opts);
  opts.paths = {EstimatorPath::cca};
  opts.seed = 702;
  const auto cca = run_mse(design(ModelKind::cca, 100, 500, 0, 100, cca_spikes(false),
                                  DiscreteMeasure::point_mass(0.5)),
                           opts);
  auto mse = [](const ExperimentSummary& s, EstimatorPath path, int p, int k) {
    for (const auto& e : s.mse) {
      if (e.path == path && e.p == p && e.spike_index == k) return e.mse;
    }
    return std::nan("");
  };
  for (int p : grid) {
    for (int k = 0; k < 2; ++k) {
      o.detail << "p=" << p << " a" << k + 1
               << " S " << fmt(mse(sf, EstimatorPath::cov, p, k))
               << " F " << fmt(mse(sf, EstimatorPath::fisher, p, k))
               << " CCA " << fmt(mse(cca, EstimatorPath::cca, p, k)) << "; ";
    }
  }
  const double s1 = mse(sf, EstimatorPath::cov, 100, 0);
  const double f1 = mse(sf, EstimatorPath::fisher, 100, 0);
  const double c1 = mse(cca, EstimatorPath::cca, 100, 0);
  o.require(s1 >= 1.2928 / 2 && s1 <= 1.2928 * 2, "S p=100 " + fmt(s1) + " vs 1.2928 (x2)");
  o.require(f1 >= 0.2077 / 2 && f1 <= 0.2077 * 2, "F p=100 " + fmt(f1) + " vs 0.2077 (x2)");
  o.require(c1 >= 4.8001e-05 / 3 && c1 <= 4.8001e-05 * 3,
            "CCA p=100 " + fmt(c1) + " vs 4.8001e-05 (x3)");
  bool ordered = true;
  for (int p : grid) {
    for (int k = 0; k < 2; ++k) {
      ordered = ordered && mse(sf, EstimatorPath::fisher, p, k) <
                               mse(sf, EstimatorPath::cov, p, k);
    }
  }
  o.require(ordered, "MSE_F < MSE_S at every p and spike");
  bool monotone = true;
  for (EstimatorPath path : {EstimatorPath::cov, EstimatorPath::fisher, EstimatorPath::cca}) {
    const auto& s = path == EstimatorPath::cca ? cca : sf;
    for (int k = 0; k < 2; ++k) {
      monotone = monotone && mse(s, path, 100, k) > mse(s, path, 200, k) &&
                 mse(s, path, 200, k) > mse(s, path, 400, k);
    }
  }
  o.require(monotone, "MSE decreasing in p for every path and spike");
  int failures = 0;
  for (const auto* s : {&sf, &cca}) {
    for (const auto& e : s->mse) failures += e.failures;
  }
  o.detail << "estimate failures " << failures << "; runtime "
           << fmt(seconds_since(t0)) << " s; ";
}

void criterion8(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  MseOptions opts;
  opts.reps = 500;
  opts.seed = 801;
  opts.paths = {EstimatorPath::cca};
  const auto run = run_mse(design(ModelKind::cca, 100, 900, 0, 300, cca_spikes(true),
                                  DiscreteMeasure::point_mass(0.5)),
                           opts);
  const MseEntry& e = run.mse.at(1);
  o.require(e.mse >= 3.7055e-05 / 3 && e.mse <= 3.7055e-05 * 3,
            "MSE(rho_2^2) " + fmt(e.mse) + " vs 3.7055e-05 (x3), mean " +
                fmt(e.mean_estimate) + ", failures " + std::to_string(e.failures));
  o.detail << "MSE(rho_1^2) " << fmt(run.mse.at(0).mse) << "; runtime "
           << fmt(seconds_since(t0)) << " s; exploratory, non-blocking; ";
}

struct CliRun {
  int code;
  std::string out;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "ncfisher");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str()};
}

const std::string kReference = std::string(NCF_TEST_DATA_DIR) + "/cca_reference.csv";
const char* kXCols = "x1,x2,x3,x4,x5,x6,x7";
const char* kYCols = "y1,y2,y3,y4,y5,y6,y7,y8,y9,y10,y11";

void criterion9(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = cli({"cca-analyze", "--input", kReference, "--x-cols", kXCols,
                      "--y-cols", kYCols});
  const double secs = seconds_since(t0);
  o.require(r.code == 0, "exit code " + std::to_string(r.code));
  if (r.code != 0) return;
  const Json res = Json::parse(r.out)["results"];
  const double expect[] = {0.9152, 0.7755, 0.4560, 0.4034, 0.2548, 0.2247, 0.0492};
  double worst = 0.0;
  for (int i = 0; i < 7; ++i) {
    worst = std::max(worst, std::abs(res["spectrum"][i].get<double>() - expect[i]));
  }
  o.require(worst < 5e-5, "spectrum max deviation " + fmt(worst));
  const Json& rho = res["estimates"][0]["rho_sq"];
  const double r1 = rho.is_number() ? rho.get<double>() : std::nan("");
  o.require(std::abs(r1 - 0.9064) <= 0.0005, "rho_1^2 " + fmt(r1));
  o.require(secs < 1.0, "runtime " + fmt(secs) + " s");
}

std::string file_bytes(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

void criterion10(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::string cfg = testing::temp_path("ncf_acceptance_mse.json");
  std::ofstream(cfg) << R"({"model": {"kind": "fisher", "p": 40, "n": 400, "N": 200,
    "spikes": [10, 7.5]}, "estimators": ["cov", "fisher"], "p_grid": [40, 80]})";
  const std::vector<std::vector<std::string>> commands = {
      {"clt", "--reps", "40", "--seed", "11"},
      {"mse", "--config", cfg, "--reps", "20", "--seed", "12"},
      {"phase"},
      {"cca-analyze", "--input", kReference, "--x-cols", kXCols, "--y-cols", kYCols}};
  for (const auto& base : commands) {
    std::vector<std::size_t> hashes;
    for (int threads : {1, 2}) {
      for (int run = 0; run < 2; ++run) {
        const std::string out = testing::temp_path(
            "ncf_acceptance_" + base[0] + "_" + std::to_string(threads) + "_" +
            std::to_string(run) + ".json");
        auto args = base;
        args.insert(args.end(), {"--threads", std::to_string(threads), "--out", out});
        const auto r = cli(args);
        if (r.code != 0) {
          o.require(false, base[0] + " exit code " + std::to_string(r.code));
          break;
        }
        hashes.push_back(std::hash<std::string>{}(file_bytes(out)));
      }
    }
    bool same = hashes.size() == 4;
    for (std::size_t h : hashes) same = same && h == hashes.front();
    o.require(same, base[0] + " identical across 2 runs x threads {1,2}");
  }
  o.detail << "runtime " << fmt(seconds_since(t0)) << " s; ";
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: ncf_acceptance <1-10>\n");
    return 2;
  }
  const int id = std::atoi(argv[1]);
  const std::function<void(Outcome&)> checks[] = {
      criterion1, criterion2, criterion3, criterion4, criterion5,
      criterion6, criterion7, criterion8, criterion9, criterion10};
  if (id < 1 || id > 10) {
    std::fprintf(stderr, "criterion must be 1-10\n");
    return 2;
  }
  Outcome o;
  try {
    checks[id - 1](o);
  } catch (const std::exception& e) {
    o.require(false, std::string("error: ") + e.what());
  }
  std::printf("criterion %d: %s %s\n", id, o.pass ? "PASS" : "FAIL",
              o.detail.str().c_str());
  if (id == 8) return 0;
  return o.pass ? 0 : 1;
}
