/* Copyright 2026 The Spanbreaker Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License. */

// Acceptance run: one PASS/FAIL line per criterion, measured values inline.
// Exit status is nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "spanbreaker/adversarial.hpp"
#include "spanbreaker/cli.hpp"
#include "spanbreaker/harness.hpp"
#include "spanbreaker/solvers.hpp"

namespace fs = std::filesystem;
using namespace spanbreaker;

namespace {

int failures = 0;

void report(int id, bool ok, double seconds, double limit, const std::string& detail) {
  const bool in_time = seconds <= limit;
  ok = ok && in_time;
  if (!ok) ++failures;
  std::printf("%s %d: %s [%.2fs, limit %.0fs]\n", ok ? "PASS" : "FAIL", id, detail.c_str(), seconds, limit);
  std::fflush(stdout);
}

template <class Fn>
void criterion(int id, double limit, Fn fn) {
  const auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = false;
  try {
    ok = fn(detail);
  } catch (const std::exception& e) {
    detail += std::string(" exception: ") + e.what();
  }
  report(id, ok, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), limit, detail);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double max_fd_error(const FiniteSumProblem& p, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    const Vector x = oracle::random_point(p.dimension(), g);
    for (std::size_t i = 0; i < p.components(); ++i) {
      const Vector an = p.component_gradient(i, x);
      const double e = oracle::dist(oracle::fd_gradient(p, i, x), an) / std::max(1.0, oracle::norm(an));
      worst = std::max(worst, e);
    }
  }
  return worst;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

int main() {
  criterion(1, 10, [](std::string& d) {
    const double e_chain = max_fd_error(*nesterov_chain(16.0, 1.0, 256), 1);
    const double e_block = max_fd_error(*block_adversarial(64, 0.25, 1.0 / 64, 4), 2);
    const double e_sdca = max_fd_error(*sdca_adversarial(64, 2.0, 1.0).primal, 3);
    const double e_ncvx = max_fd_error(*nonconvex_quadratic_sum(64, 32, 1.0, 32.0, 48.0, 4), 4);
    d = fmt("max rel fd error chain %.1e block %.1e sdca %.1e ncvx %.1e (<= 1e-6)", e_chain, e_block, e_sdca, e_ncvx);
    return std::max({e_chain, e_block, e_sdca, e_ncvx}) <= 1e-6;
  });

  criterion(2, 120, [](std::string& d) {
    const std::size_t n = 4096;
    const double kappa = 16.0;
    auto pb = block_adversarial(n, kappa / n, 1.0 / n, 8);
    const auto P = SamplingDistribution::uniform(n);
    double mean = 0.0;
    const int seeds = 20;
    for (int s = 0; s < seeds; ++s) {
      const auto r = prox_svrg(*pb, auto_svrg_config(*pb, P, 12, s));
      mean += estimate_rate(r.trace, EpochWindow{3, 12}).rho_hat / seeds;
    }
    const double bound = corollary2_bound(static_cast<double>(n), kappa);
    d = fmt("mean rho_hat %.4f over %d seeds, bound %.4f x 1.10 = %.4f", mean, seeds, bound, 1.1 * bound);
    return mean <= 1.1 * bound;
  });

  criterion(3, 1, [](std::string& d) {
    const SvrgParams p = optimal_svrg_params(100, 10, 10);
    const double rho = theorem1_rate(1.0, p.eta, p.m, 10.0);
    const double chain = 10.0 * std::sqrt(10.0 / p.m);
    d = fmt("theorem1_rate %.6f (0.42441 +- 1e-4), 10 sqrt(kappa/m) = %.4f", rho, chain);
    return std::abs(rho - 0.42441) <= 1e-4 && rho <= chain;
  });

  // Shared by 4 and 5.
  const std::size_t n45 = 256, db45 = 8;
  const double kappa45 = 16.0;
  auto pb45 = block_adversarial(n45, kappa45 / n45, 1.0 / n45, db45);
  const double d0 = pb45->dist_sq(Vector(pb45->dimension(), 0.0));
  double saga_epoch_mean = NAN;

  criterion(4, 60, [&](std::string& d) {
    const double q = block_ratio(n45, kappa45);
    const int seeds = 200;
    std::size_t violations = 0, checked = 0, support_bad = 0;
    double worst_margin = INFINITY, mean_n = 0.0;
    for (int s = 0; s < seeds; ++s) {
      SagaConfig c;
      c.iterations = 2 * n45;
      c.seed = static_cast<std::uint64_t>(s);
      c.record_every = 1;
      SupportTracker tr(n45, db45);
      c.control.observer = [&](const StepEvent& e) {
        tr.observe(e);
        double floor = 0.0;
        for (std::size_t v : block_supports(e.x, db45)) floor += std::pow(q, 2.0 * static_cast<double>(v));
        floor /= static_cast<double>(n45);
        const double ratio = pb45->dist_sq(e.x) / d0;
        worst_margin = std::min(worst_margin, ratio / floor - 1.0);
        if (ratio < floor * (1 - 1e-12)) ++violations;
        ++checked;
        if (e.iteration == n45) mean_n += ratio / seeds;
      };
      saga(*pb45, c);
      support_bad += tr.violations() > 0;
    }
    saga_epoch_mean = mean_n;
    const double need = std::pow(1 - 2.0 / n45, static_cast<double>(n45)) * (1 - 3 / std::sqrt(200.0));
    d = fmt("floor violations %zu of %zu (worst rel margin %+.3f), mean ratio at k=n %.4f >= %.4f, span breaches %zu",
            violations, checked, worst_margin, mean_n, need, support_bad);
    return violations == 0 && mean_n >= need;
  });

  criterion(5, 60, [&](std::string& d) {
    const int seeds = 20;
    int escaped = 0;
    double mean1 = 0.0;
    for (int s = 0; s < seeds; ++s) {
      SvrgConfig cfg = auto_svrg_config(*pb45, SamplingDistribution::uniform(n45), 2, s);
      SupportTracker tr(n45, db45);
      cfg.control.observer = tr.observer();
      const auto r = prox_svrg(*pb45, cfg);
      escaped += tr.violations() > 0;
      mean1 += r.trace.points.at(1).dist_sq / d0 / seeds;
    }
    const double factor = saga_epoch_mean / mean1;
    d = fmt("escaped on %d/%d seeds within 2 epochs, 1-epoch ratio %.4f vs saga %.4f (factor %.1f >= 2)", escaped,
            seeds, mean1, saga_epoch_mean, factor);
    return escaped == seeds && factor >= 2.0;
  });

  criterion(6, 60, [](std::string& d) {
    const std::size_t n = 8;
    const SdcaInstance inst = sdca_adversarial(n, 2.0, 1.0);
    const double th = sdca_theta(n, 2.0, 1.0);
    const Vector ones(n, 1.0);
    double enum_err = 0.0;
    Vector Tk = ones;
    for (int k = 1; k <= 4; ++k) {
      Tk = sdca_expectation_step(inst, Tk);
      const Vector mean = oracle::enumerate_mean(inst, ones, k);
      for (std::size_t j = 0; j < n; ++j) enum_err = std::max(enum_err, std::abs(mean[j] - Tk[j]));
    }
    const int seeds = 1000, K = 32;
    std::vector<double> mean(K + 1, 0.0);
    for (int s = 0; s < seeds; ++s) {
      SdcaOptions o;
      const auto r = sdca(inst, ones, K, static_cast<std::uint64_t>(s), o);
      const double x0 = r.trace.points.front().dist_sq;
      for (const TracePoint& p : r.trace.points) mean.at(p.epoch) += p.dist_sq / x0 / seeds;
    }
    double worst = INFINITY;
    for (int k = 0; k <= K; ++k) worst = std::min(worst, mean[k] / (std::pow(th, 2.0 * k) * (1 - 3 / std::sqrt(1000.0))));
    d = fmt("(a) enumeration err %.1e (b) min mean/floor %.3f over k<=32 (c) theta %.5f >= %.5f", enum_err, worst, th,
            1 - 2.0 / n);
    return enum_err <= 1e-10 && worst >= 1.0 && th >= 1 - 2.0 / n;
  });

  criterion(7, 600, [](std::string& d) {
    const fs::path dir = fs::temp_directory_path() / "spanbreaker_acceptance_speedup";
    cli::SpeedupArgs a;
    a.n_list = {256, 512, 1024, 2048, 4096, 8192};
    a.seeds = {1, 2, 3, 4, 5};
    a.out = (dir / "speedup.csv").string();
    std::ostringstream out, err;
    const int code = cli::cmd_speedup(a, out, err);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    std::vector<double> ratios;
    while (std::getline(in, line)) ratios.push_back(std::stod(line.substr(line.rfind(',') + 1)));
    fs::remove_all(dir);
    int up = 0;
    bool all_ge1 = !ratios.empty();
    std::string list;
    for (std::size_t i = 0; i < ratios.size(); ++i) {
      all_ge1 = all_ge1 && ratios[i] >= 1.0;
      if (i && ratios[i] > ratios[i - 1]) ++up;
      list += fmt(i ? ",%.3f" : "%.3f", ratios[i]);
    }
    d = fmt("exit %d, ratios [%s], all >= 1: %s, increasing steps %d/5 (need 4)", code, list.c_str(),
            all_ge1 ? "yes" : "no", up);
    return code == 0 && ratios.size() == 6 && all_ge1 && up >= 4;
  });

  criterion(8, 120, [](std::string& d) {
    const std::size_t n = 512;
    auto pb = nonconvex_quadratic_sum(n, 32, 1.0, 32.0, 48.0, 7);
    const auto P = nonconvex_importance_distribution(*pb);
    const double mu = pb->strong_convexity();
    const auto prm = nonconvex_svrg_params(static_cast<double>(n), pb->smoothness(), lbar(*pb, P), mu, n);
    int indefinite = 0;
    for (double e : pb->component_min_eigenvalues()) indefinite += e < 0;
    const double bound = 1.0 / (1.0 + 0.5 * static_cast<double>(n) * prm.eta * mu);
    const int seeds = 10;
    double mean = 0.0;
    for (int s = 0; s < seeds; ++s) {
      SvrgConfig c;
      c.eta = prm.eta;
      c.m = n;
      c.epochs = 40;
      c.sampling = P;
      c.seed = static_cast<std::uint64_t>(s);
      mean += estimate_rate(prox_svrg(*pb, c).trace).rho_hat / seeds;
    }
    d = fmt("mean rho_hat %.4f over %d seeds, bound %.4f x 1.25 = %.4f, indefinite components %d", mean, seeds, bound,
            1.25 * bound, indefinite);
    return mean <= 1.25 * bound && indefinite >= 1;
  });

  criterion(9, 10, [](std::string& d) {
    const fs::path dir = fs::temp_directory_path() / "spanbreaker_acceptance_determinism";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::string specs[] = {
        R"({"problem":{"kind":"block","n":64,"d_b":4,"L":0.25,"sigma":0.015625},"solver":[{"name":"svrg","params":"auto"},{"name":"sarah","params":"auto"},{"name":"saga"},{"name":"gd"}],"budget":{"epochs":6},"seeds":[1,2,3]})",
        R"({"problem":{"kind":"sdca","n":16,"L":2,"mu":1},"solver":"sdca","budget":{"epochs":4},"seeds":[4,5]})",
        R"({"problem":{"kind":"ncvx","n":32,"d":8,"L":16,"mu":1,"spread":24,"seed":3},"solver":{"name":"svrg","params":"auto"},"budget":{"epochs":5},"seeds":[6]})"};
    std::size_t files = 0, mismatched = 0;
    int codes = 0;
    for (std::size_t s = 0; s < std::size(specs); ++s) {
      const fs::path spec = dir / ("spec" + std::to_string(s) + ".json");
      // Same spec, same output directory; the first run is moved aside.
      std::string text = specs[s];
      text.insert(text.size() - 1, ",\"output\":\"" + (dir / "out").string() + "\"");
      std::ofstream(spec) << text;
      for (const char* run : {"a", "b"}) {
        cli::CommonOptions o;
        o.spec_path = spec.string();
        std::ostringstream out, err;
        codes |= cli::cmd_run(o, out, err);
        fs::rename(dir / "out", dir / (std::to_string(s) + run));
      }
      for (const auto& e : fs::directory_iterator(dir / (std::to_string(s) + "a"))) {
        ++files;
        mismatched += slurp(e.path()) != slurp(dir / (std::to_string(s) + "b") / e.path().filename());
      }
    }
    fs::remove_all(dir);
    d = fmt("%zu files compared across 3 specs, %zu differ, exit codes %s", files, mismatched, codes ? "nonzero" : "0");
    return codes == 0 && files > 0 && mismatched == 0;
  });

  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
