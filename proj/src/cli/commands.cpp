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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <system_error>

#include "CLI11.hpp"
#include "spanbreaker/cli.hpp"
#include "spanbreaker/errors.hpp"
#include "spanbreaker/solvers.hpp"

namespace spanbreaker::cli {
namespace fs = std::filesystem;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string trace_csv(const Trace& trace) {
  std::string s = "grad_units,epoch,suboptimality,dist_sq\n";
  for (const TracePoint& p : trace.points) {
    // Round-off can push the gap a hair below zero.
    const double sub = p.suboptimality < 0.0 ? 0.0 : p.suboptimality;
    s += std::to_string(p.grad_units);
    s += ',';
    s += std::to_string(p.epoch);
    s += ',';
    s += format_double(sub);
    s += ',';
    if (!std::isnan(p.dist_sq)) s += format_double(p.dist_sq);
    s += '\n';
  }
  return s;
}

namespace {

std::string quoted(const std::string& v) {
  std::string s = "\"";
  for (char c : v) {
    if (c == '"') s += '"';
    s += c;
  }
  return s + "\"";
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string item = text.substr(pos, comma - pos);
    std::uint64_t v = 0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || res.ec != std::errc() || res.ptr != item.data() + item.size())
      throw spec_error("--seeds: bad entry \"" + item + "\"");
    seeds.push_back(v);
    pos = comma + 1;
  }
  return seeds;
}

std::vector<std::size_t> parse_n_list(const std::string& text) {
  std::vector<std::size_t> out;
  for (std::uint64_t v : parse_seed_list(text)) out.push_back(static_cast<std::size_t>(v));
  return out;
}

RunSpec prepared_spec(const CommonOptions& o) {
  RunSpec spec = load_run_spec(o.spec_path);
  if (o.seeds) {
    if (o.seeds->empty()) throw spec_error("--seeds: empty list");
    nlohmann::json doc = spec.canonical();
    doc["seeds"] = *o.seeds;
    spec = parse_run_spec(doc);
  }
  if (o.out) spec.output = *o.out;
  return spec;
}

void debug_epochs(const std::vector<RunOutcome>& runs, std::ostream& err) {
  for (const RunOutcome& r : runs) {
    if (r.trace.epoch_lengths.empty()) continue;
    err << "epochs " << r.file << " M=";
    for (std::size_t k = 0; k < r.trace.epoch_lengths.size(); ++k)
      err << (k ? "," : "") << r.trace.epoch_lengths[k];
    err << '\n';
  }
}

void write_outputs(const RunSpec& spec, const std::vector<RunOutcome>& runs) {
  const fs::path dir(spec.output);
  fs::create_directories(dir);
  for (const RunOutcome& r : runs) write_atomic(dir / r.file, trace_csv(r.trace));
  write_atomic(dir / "summary.csv", summary_csv(spec, runs));
}

int exit_for(const RunSpec& spec, const std::vector<RunOutcome>& runs, std::ostream& err) {
  int code = 0;
  for (const RunOutcome& r : runs) {
    if (!r.reached) {
      err << "not reached: " << r.file << " final suboptimality "
          << format_double(r.trace.back().suboptimality) << " > " << format_double(*spec.target_eps) << '\n';
      code = 2;
    }
  }
  return code;
}

template <class Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace

std::string summary_csv(const RunSpec& spec, const std::vector<RunOutcome>& runs) {
  std::string s = "# spec: " + spec.canonical().dump() + "\n";
  s += "solver_index,solver,seed,file,points,grad_units,final_suboptimality,final_dist_sq,complete,reached,config,instance\n";
  for (const RunOutcome& r : runs) {
    const TracePoint& last = r.trace.back();
    s += std::to_string(r.solver_index) + ',' + r.solver + ',' + std::to_string(r.seed) + ',' + r.file + ',' +
         std::to_string(r.trace.points.size()) + ',' + std::to_string(last.grad_units) + ',' +
         format_double(std::max(0.0, last.suboptimality)) + ',' +
         (std::isnan(last.dist_sq) ? std::string() : format_double(last.dist_sq)) + ',' +
         (r.trace.complete ? "1" : "0") + ',' + (r.reached ? "1" : "0") + ',' + quoted(r.trace.meta.config) + ',' +
         quoted(r.trace.meta.instance) + '\n';
  }
  return s;
}

std::string speedup_csv(const std::vector<SpeedupRow>& rows) {
  std::string s = "n,kappa,eps,K_svrg,K_saga,ratio\n";
  for (const SpeedupRow& r : rows)
    s += std::to_string(r.n) + ',' + format_double(r.kappa) + ',' + format_double(r.eps) + ',' +
         std::to_string(r.K_svrg) + ',' + std::to_string(r.K_saga) + ',' + format_double(r.ratio) + '\n';
  return s;
}

void write_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

int cmd_run(const CommonOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunSpec spec = prepared_spec(o);
    if (spec.output.empty()) throw spec_error("output: no output directory (set it in the spec or pass --out)");
    const Instance inst = build_instance(spec.problem);
    const std::vector<RunOutcome> runs = execute(spec, inst);
    if (o.debug_epochs) debug_epochs(runs, err);
    write_outputs(spec, runs);
    out << "wrote " << runs.size() << " traces to " << spec.output << '\n';
    return exit_for(spec, runs, err);
  });
}

int cmd_rates(const CommonOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunSpec spec = prepared_spec(o);
    const Instance inst = build_instance(spec.problem);
    const FiniteSumProblem& problem = *inst.problem;
    const std::vector<RunOutcome> runs = execute(spec, inst);
    if (o.debug_epochs) debug_epochs(runs, err);
    if (!spec.output.empty()) write_outputs(spec, runs);

    const double n = static_cast<double>(problem.components());
    const double mu = problem.strong_convexity();
    out << "solver,rho_hat,theorem1_rate,corollary2_bound,ratio\n";
    for (std::size_t i = 0; i < spec.solvers.size(); ++i) {
      const SolverSpec& s = spec.solvers[i];
      const bool vr = s.name == "svrg" || s.name == "sarah";
      // Passes over the data stand in for epochs where the solver has none.
      const bool per_pass = s.name == "saga" || s.name == "sdca";
      double sum = 0.0;
      std::size_t fits = 0;
      for (const RunOutcome& r : runs) {
        if (r.solver_index != i) continue;
        std::vector<double> x, y;
        for (const TracePoint& p : r.trace.points) {
          x.push_back(per_pass ? static_cast<double>(p.grad_units) / n : static_cast<double>(p.epoch));
          y.push_back(p.suboptimality);
        }
        const double cut = x.empty() ? 0.0 : x.back() / 2.0;
        std::vector<double> wx, wy;
        for (std::size_t k = 0; k < x.size(); ++k)
          if (x[k] >= cut) {
            wx.push_back(x[k]);
            wy.push_back(y[k]);
          }
        try {
          sum += estimate_rate(wx, wy).rho_hat;
          ++fits;
        } catch (const insufficient_data& e) {
          err << "rates: " << r.file << ": " << e.what() << '\n';
        }
      }
      const double rho = fits ? sum / static_cast<double>(fits) : std::numeric_limits<double>::quiet_NaN();
      SamplingDistribution p = SamplingDistribution::uniform(problem.components());
      double t1 = std::numeric_limits<double>::quiet_NaN();
      if (vr) {
        const SvrgConfig cfg = resolve_svrg_config(spec, s, problem, spec.seeds.front());
        p = *cfg.sampling;
        const double LQ = effective_lipschitz(problem, p);
        if (cfg.eta < 1.0 / (4.0 * LQ)) t1 = theorem1_rate(mu, cfg.eta, cfg.m, LQ);
      }
      const double bound = corollary2_bound(n, effective_condition(problem, p));
      out << s.name << ',' << format_double(rho) << ',' << format_double(t1) << ',' << format_double(bound) << ','
          << format_double(rho / bound) << '\n';
    }
    return exit_for(spec, runs, err);
  });
}

int cmd_speedup(const SpeedupArgs& a, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (a.seeds.empty()) throw spec_error("--seeds: empty list");
    if (a.out.empty()) throw spec_error("--out: required");
    SpeedupOptions opt;
    opt.n_list = a.n_list;
    opt.alpha = a.alpha;
    opt.beta = a.beta;
    opt.seeds = a.seeds;
    opt.block_dim = a.block_dim;
    const std::vector<SpeedupRow> rows = speedup_experiment(opt);
    fs::path path(a.out);
    if (path.extension() != ".csv") {
      fs::create_directories(path);
      path /= "speedup.csv";
    } else if (path.has_parent_path()) {
      fs::create_directories(path.parent_path());
    }
    const std::string csv = speedup_csv(rows);
    write_atomic(path, csv);
    out << csv;
    int code = 0;
    for (const SpeedupRow& r : rows) {
      if (r.flagged) {
        err << "not reached: some seed at n = " << r.n << " missed eps within the budget\n";
        code = 2;
      }
    }
    return code;
  });
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Variance-reduced finite-sum solvers and lower-bound instances"};
  app.require_subcommand(1);

  CommonOptions common;
  std::string seeds_text;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--spec", common.spec_path, "RunSpec JSON or a summary.csv")->required();
    sub->add_option("--out", common.out, "output directory (overrides the spec)");
    sub->add_option("--seeds", seeds_text, "comma separated seed list (overrides the spec)");
    sub->add_flag("--debug-epochs", common.debug_epochs, "log the sampled inner-loop lengths");
  };
  CLI::App* run = app.add_subcommand("run", "run every solver and seed, write trace CSVs");
  add_common(run);
  CLI::App* rates = app.add_subcommand("rates", "run, then print fitted and predicted rates");
  add_common(rates);

  SpeedupArgs sp;
  std::string n_text, sp_seeds = "1,2,3,4,5";
  CLI::App* speed = app.add_subcommand("speedup", "K(eps) of svrg against saga over a list of n");
  speed->add_option("--n-list", n_text, "comma separated n values")->required();
  speed->add_option("--alpha", sp.alpha, "eps = n^-alpha")->default_val(0.5);
  speed->add_option("--beta", sp.beta, "kappa = n^beta")->default_val(0.5);
  speed->add_option("--seeds", sp_seeds, "comma separated seed list");
  speed->add_option("--out", sp.out, "CSV file or directory")->required();
  speed->add_option("--block-dim", sp.block_dim, "coordinates per block")->default_val(4);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run->parsed() || rates->parsed()) {
      if ((run->parsed() ? run : rates)->count("--seeds") > 0)
        common.seeds = parse_seed_list(seeds_text);
      return run->parsed() ? cmd_run(common, out, err) : cmd_rates(common, out, err);
    }
    sp.n_list = parse_n_list(n_text);
    sp.seeds = parse_seed_list(sp_seeds);
    return cmd_speedup(sp, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace spanbreaker::cli
