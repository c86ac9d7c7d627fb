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

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "spanbreaker/cli.hpp"
#include "spanbreaker/adversarial.hpp"
#include "spanbreaker/solvers.hpp"

namespace spanbreaker::cli {
namespace {

using nlohmann::json;

void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) throw spec_error(where + ": expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : keys) known = known || it.key() == k;
    if (!known) throw spec_error(where + "." + it.key() + ": unknown field");
  }
}

const json& need(const json& obj, const std::string& where, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw spec_error(where + "." + key + ": missing field");
  return *it;
}

std::uint64_t as_uint(const json& v, const std::string& where) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
  throw spec_error(where + ": expected a non-negative integer");
}

std::size_t as_positive(const json& v, const std::string& where) {
  const std::uint64_t u = as_uint(v, where);
  if (u == 0) throw spec_error(where + ": must be positive");
  return static_cast<std::size_t>(u);
}

double as_double(const json& v, const std::string& where) {
  if (!v.is_number()) throw spec_error(where + ": expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw spec_error(where + ": must be finite");
  return d;
}

double as_positive_double(const json& v, const std::string& where) {
  const double d = as_double(v, where);
  if (!(d > 0.0)) throw spec_error(where + ": must be > 0");
  return d;
}

std::string as_choice(const json& v, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!v.is_string()) throw spec_error(where + ": expected a string");
  const std::string s = v.get<std::string>();
  for (const char* a : allowed)
    if (s == a) return s;
  std::string list;
  for (const char* a : allowed) list += (list.empty() ? "" : "|") + std::string(a);
  throw spec_error(where + ": expected one of " + list + ", got \"" + s + "\"");
}

ProblemSpec parse_problem(const json& p) {
  const std::string w = "problem";
  if (!p.is_object()) throw spec_error(w + ": expected an object");
  ProblemSpec s;
  s.kind = as_choice(need(p, w, "kind"), w + ".kind", {"chain", "block", "sdca", "ncvx"});
  if (s.kind == "chain") {
    only_keys(p, w, {"kind", "n", "d", "L", "sigma", "mu", "psi"});
    if (p.contains("n") && as_uint(p["n"], w + ".n") != 1) throw spec_error(w + ".n: chain has n = 1");
    s.n = 1;
    s.d = as_positive(need(p, w, "d"), w + ".d");
    s.L = as_positive_double(need(p, w, "L"), w + ".L");
    if (p.contains("sigma") == p.contains("mu")) throw spec_error(w + ": chain needs exactly one of sigma or mu");
    s.sigma = as_positive_double(p.contains("sigma") ? p["sigma"] : p["mu"], w + ".sigma");
    if (p.contains("psi")) {
      const json& q = p["psi"];
      only_keys(q, w + ".psi", {"name", "weight"});
      s.psi = as_choice(need(q, w + ".psi", "name"), w + ".psi.name", {"none", "l1"});
      if (s.psi == "l1") s.psi_weight = as_positive_double(need(q, w + ".psi", "weight"), w + ".psi.weight");
    }
  } else if (s.kind == "block") {
    only_keys(p, w, {"kind", "n", "d_b", "L", "sigma"});
    s.n = as_positive(need(p, w, "n"), w + ".n");
    s.d_b = as_positive(need(p, w, "d_b"), w + ".d_b");
    s.L = as_positive_double(need(p, w, "L"), w + ".L");
    s.sigma = as_positive_double(need(p, w, "sigma"), w + ".sigma");
  } else if (s.kind == "sdca") {
    only_keys(p, w, {"kind", "n", "L", "mu"});
    s.n = as_positive(need(p, w, "n"), w + ".n");
    s.L = as_positive_double(need(p, w, "L"), w + ".L");
    s.mu = as_positive_double(need(p, w, "mu"), w + ".mu");
  } else {
    only_keys(p, w, {"kind", "n", "d", "L", "mu", "spread", "seed"});
    s.n = as_positive(need(p, w, "n"), w + ".n");
    s.d = as_positive(need(p, w, "d"), w + ".d");
    s.L = as_positive_double(need(p, w, "L"), w + ".L");
    s.mu = as_positive_double(need(p, w, "mu"), w + ".mu");
    s.spread = p.contains("spread") ? as_double(p["spread"], w + ".spread") : 0.0;
    if (s.spread < 0.0) throw spec_error(w + ".spread: must be >= 0");
    s.seed = p.contains("seed") ? as_uint(p["seed"], w + ".seed") : 0;
  }
  return s;
}

json problem_json(const ProblemSpec& s) {
  json p = {{"kind", s.kind}};
  if (s.kind == "chain") {
    p["d"] = s.d;
    p["L"] = s.L;
    p["sigma"] = s.sigma;
    p["psi"] = {{"name", s.psi}, {"weight", s.psi_weight}};
  } else if (s.kind == "block") {
    p["n"] = s.n;
    p["d_b"] = s.d_b;
    p["L"] = s.L;
    p["sigma"] = s.sigma;
  } else if (s.kind == "sdca") {
    p["n"] = s.n;
    p["L"] = s.L;
    p["mu"] = s.mu;
  } else {
    p["n"] = s.n;
    p["d"] = s.d;
    p["L"] = s.L;
    p["mu"] = s.mu;
    p["spread"] = s.spread;
    p["seed"] = s.seed;
  }
  return p;
}

SolverSpec parse_solver(const json& s, const std::string& w, const ProblemSpec& problem) {
  if (s.is_string()) return parse_solver(json{{"name", s}}, w, problem);
  only_keys(s, w, {"name", "params"});
  SolverSpec out;
  out.name = as_choice(need(s, w, "name"), w + ".name", {"svrg", "sarah", "saga", "gd", "sdca"});
  if (out.name == "sdca" && problem.kind != "sdca") throw spec_error("sdca requires kind=sdca");
  const std::string pw = w + ".params";
  const json params = s.contains("params") ? s["params"] : json::object();
  if (params.is_string()) {
    if (params.get<std::string>() != "auto") throw spec_error(pw + ": expected \"auto\" or an object");
    if (out.name != "svrg" && out.name != "sarah")
      throw spec_error(pw + ": \"auto\" is only defined for svrg and sarah");
    out.auto_params = true;
    return out;
  }
  if (!params.is_object()) throw spec_error(pw + ": expected \"auto\" or an object");
  json c = json::object();
  if (out.name == "svrg" || out.name == "sarah") {
    only_keys(params, pw, {"eta", "m", "epoch_mode", "sampling"});
    c["eta"] = as_positive_double(need(params, pw, "eta"), pw + ".eta");
    const double m = as_double(need(params, pw, "m"), pw + ".m");
    if (!(m >= 1.0)) throw spec_error(pw + ".m: must be >= 1");
    c["m"] = m;
    c["epoch_mode"] = params.contains("epoch_mode")
                          ? as_choice(params["epoch_mode"], pw + ".epoch_mode", {"geometric", "fixed"})
                          : "geometric";
    c["sampling"] = params.contains("sampling")
                        ? as_choice(params["sampling"], pw + ".sampling", {"uniform", "importance", "nonconvex"})
                        : "uniform";
  } else if (out.name == "saga") {
    only_keys(params, pw, {"eta", "sampling", "table_init", "record_every"});
    c["eta"] = params.contains("eta") && !params["eta"].is_null()
                   ? json(as_positive_double(params["eta"], pw + ".eta"))
                   : json(nullptr);
    c["sampling"] = params.contains("sampling")
                        ? as_choice(params["sampling"], pw + ".sampling", {"uniform", "importance", "nonconvex"})
                        : "uniform";
    c["table_init"] = params.contains("table_init")
                          ? as_choice(params["table_init"], pw + ".table_init", {"zero", "anchor"})
                          : "zero";
    c["record_every"] = params.contains("record_every") ? as_uint(params["record_every"], pw + ".record_every") : 0;
  } else if (out.name == "gd") {
    only_keys(params, pw, {"eta", "record_every"});
    if (params.contains("eta") && !params["eta"].is_null()) {
      const double eta = as_double(params["eta"], pw + ".eta");
      if (eta < 0.0) throw spec_error(pw + ".eta: must be >= 0");
      c["eta"] = eta;
    } else {
      c["eta"] = nullptr;
    }
    c["record_every"] = params.contains("record_every") ? as_positive(params["record_every"], pw + ".record_every") : 1;
  } else {
    only_keys(params, pw, {"alpha0", "record_every", "check_every"});
    c["alpha0"] = params.contains("alpha0") ? as_choice(params["alpha0"], pw + ".alpha0", {"ones", "zeros"}) : "ones";
    c["record_every"] = params.contains("record_every") ? as_positive(params["record_every"], pw + ".record_every") : 1;
    c["check_every"] = params.contains("check_every") ? as_uint(params["check_every"], pw + ".check_every") : 64;
  }
  out.params = std::move(c);
  return out;
}

SamplingDistribution sampling_for(const std::string& name, const FiniteSumProblem& problem) {
  if (name == "importance") return importance_distribution(problem);
  if (name == "nonconvex") return nonconvex_importance_distribution(problem);
  return SamplingDistribution::uniform(problem.components());
}

std::string file_name(const RunSpec& spec, std::size_t index, const std::string& name, std::uint64_t seed) {
  std::string base = name + "_seed" + std::to_string(seed) + ".csv";
  return spec.solvers.size() > 1 ? std::to_string(index) + "_" + base : base;
}

constexpr std::uint64_t kUnbounded = std::numeric_limits<std::uint64_t>::max() / 4;

}  // namespace

SvrgConfig resolve_svrg_config(const RunSpec& spec, const SolverSpec& s,
                               const FiniteSumProblem& problem, std::uint64_t seed) {
  const std::uint64_t epochs = spec.budget.epochs ? *spec.budget.epochs : kUnbounded;
  SvrgConfig cfg;
  if (s.auto_params && s.name == "svrg" && spec.problem.kind == "ncvx") {
    // Nonconvex components: m = n with p_i proportional to L_i^2.
    const SamplingDistribution p = nonconvex_importance_distribution(problem);
    const double n = static_cast<double>(problem.components());
    const NonconvexParams np = nonconvex_svrg_params(n, problem.smoothness(), lbar(problem, p),
                                                     problem.strong_convexity(), n);
    cfg.eta = np.eta;
    cfg.m = n;
    cfg.epochs = epochs;
    cfg.sampling = p;
    cfg.seed = seed;
  } else if (s.auto_params) {
    cfg = auto_svrg_config(problem, importance_distribution(problem), epochs, seed);
  } else {
    cfg.eta = s.params["eta"].get<double>();
    cfg.m = s.params["m"].get<double>();
    cfg.epoch_mode = s.params["epoch_mode"] == "fixed" ? EpochMode::fixed : EpochMode::geometric;
    cfg.epochs = epochs;
    cfg.sampling = sampling_for(s.params["sampling"].get<std::string>(), problem);
    cfg.seed = seed;
  }
  cfg.control.max_grad_units = spec.budget.grad_units;
  return cfg;
}

namespace {

Trace run_one(const RunSpec& spec, const SolverSpec& s, const Instance& inst, std::uint64_t seed) {
  const FiniteSumProblem& problem = *inst.problem;
  const std::uint64_t n = problem.components();
  if (s.name == "svrg") return prox_svrg(problem, resolve_svrg_config(spec, s, problem, seed)).trace;
  if (s.name == "sarah") return sarah(problem, resolve_svrg_config(spec, s, problem, seed)).trace;
  if (s.name == "saga") {
    SagaConfig cfg;
    if (!s.params["eta"].is_null()) cfg.eta = s.params["eta"].get<double>();
    cfg.iterations = spec.budget.epochs ? *spec.budget.epochs * n : *spec.budget.grad_units;
    cfg.sampling = sampling_for(s.params["sampling"].get<std::string>(), problem);
    cfg.seed = seed;
    cfg.table_init = s.params["table_init"] == "anchor" ? TableInit::anchor : TableInit::zero;
    cfg.record_every = s.params["record_every"].get<std::uint64_t>();
    cfg.control.max_grad_units = spec.budget.grad_units;
    return saga(problem, cfg).trace;
  }
  if (s.name == "gd") {
    const double eta = s.params["eta"].is_null() ? 1.0 / problem.smoothness() : s.params["eta"].get<double>();
    GdOptions opt;
    opt.record_every = s.params["record_every"].get<std::uint64_t>();
    opt.control.max_grad_units = spec.budget.grad_units;
    const std::uint64_t iters = spec.budget.epochs ? *spec.budget.epochs : *spec.budget.grad_units / n;
    Trace t = gradient_descent(problem, eta, iters, opt).trace;
    t.meta.seed = seed;
    return t;
  }
  const SdcaInstance& sd = *inst.sdca;
  const Vector alpha0(n, s.params["alpha0"] == "ones" ? 1.0 : 0.0);
  SdcaOptions opt;
  opt.record_every = s.params["record_every"].get<std::uint64_t>();
  opt.check_every = s.params["check_every"].get<std::uint64_t>();
  opt.max_grad_units = spec.budget.grad_units;
  const std::uint64_t iters = spec.budget.epochs ? *spec.budget.epochs * n : *spec.budget.grad_units;
  return sdca(sd, alpha0, iters, seed, opt).trace;
}

}  // namespace

json RunSpec::canonical() const {
  json doc;
  doc["problem"] = problem_json(problem);
  json solvers_json = json::array();
  for (const SolverSpec& s : solvers)
    solvers_json.push_back({{"name", s.name}, {"params", s.auto_params ? json("auto") : s.params}});
  doc["solver"] = solvers_json;
  doc["budget"] = budget.epochs ? json{{"epochs", *budget.epochs}} : json{{"grad_units", *budget.grad_units}};
  doc["seeds"] = seeds;
  doc["output"] = output;
  doc["target_eps"] = target_eps ? json(*target_eps) : json(nullptr);
  return doc;
}

RunSpec parse_run_spec(const json& doc) {
  only_keys(doc, "spec", {"problem", "solver", "budget", "seeds", "output", "target_eps"});
  RunSpec spec;
  spec.problem = parse_problem(need(doc, "spec", "problem"));

  const json& sv = need(doc, "spec", "solver");
  if (sv.is_array()) {
    if (sv.empty()) throw spec_error("solver: empty list");
    for (std::size_t i = 0; i < sv.size(); ++i)
      spec.solvers.push_back(parse_solver(sv[i], "solver[" + std::to_string(i) + "]", spec.problem));
  } else {
    spec.solvers.push_back(parse_solver(sv, "solver", spec.problem));
  }

  const json& b = need(doc, "spec", "budget");
  only_keys(b, "budget", {"epochs", "grad_units"});
  if (b.contains("epochs") == b.contains("grad_units"))
    throw spec_error("budget: exactly one of epochs or grad_units");
  if (b.contains("epochs")) spec.budget.epochs = as_positive(b["epochs"], "budget.epochs");
  else spec.budget.grad_units = as_positive(b["grad_units"], "budget.grad_units");

  const json& seeds = need(doc, "spec", "seeds");
  if (!seeds.is_array()) throw spec_error("seeds: expected a list");
  if (seeds.empty()) throw spec_error("seeds: empty list");
  std::set<std::uint64_t> seen;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const std::uint64_t s = as_uint(seeds[i], "seeds[" + std::to_string(i) + "]");
    if (!seen.insert(s).second) throw spec_error("seeds[" + std::to_string(i) + "]: duplicate seed");
    spec.seeds.push_back(s);
  }

  if (doc.contains("output")) {
    if (!doc["output"].is_string()) throw spec_error("output: expected a path string");
    spec.output = doc["output"].get<std::string>();
  }
  if (doc.contains("target_eps") && !doc["target_eps"].is_null())
    spec.target_eps = as_positive_double(doc["target_eps"], "target_eps");
  return spec;
}

RunSpec load_run_spec(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw spec_error(path.string() + ": cannot open");
  std::stringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  static const std::string marker = "# spec: ";
  if (text.rfind(marker, 0) == 0) {
    const auto eol = text.find('\n');
    text = text.substr(marker.size(), eol == std::string::npos ? std::string::npos : eol - marker.size());
  }
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw spec_error(path.string() + ": " + e.what());
  }
  return parse_run_spec(doc);
}

Instance build_instance(const ProblemSpec& s) {
  Instance inst;
  if (s.kind == "chain") {
    inst.problem = std::make_shared<ChainProblem>(s.L, s.sigma, s.d, Regularizer::parse(s.psi, s.psi_weight));
  } else if (s.kind == "block") {
    inst.problem = block_adversarial(s.n, s.L, s.sigma, s.d_b);
  } else if (s.kind == "sdca") {
    inst.sdca = sdca_adversarial(s.n, s.L, s.mu);
    inst.problem = inst.sdca->primal;
  } else {
    inst.problem = nonconvex_quadratic_sum(s.n, s.d, s.mu, s.L, s.spread, s.seed);
  }
  return inst;
}

std::vector<RunOutcome> execute(const RunSpec& spec, const Instance& instance) {
  std::vector<RunOutcome> runs;
  for (std::size_t i = 0; i < spec.solvers.size(); ++i) {
    for (std::uint64_t seed : spec.seeds) {
      RunOutcome r;
      r.solver_index = i;
      r.solver = spec.solvers[i].name;
      r.seed = seed;
      r.file = file_name(spec, i, r.solver, seed);
      runs.push_back(std::move(r));
    }
  }
  parallel_for(runs.size(), [&](std::size_t j) {
    RunOutcome& r = runs[j];
    r.trace = run_one(spec, spec.solvers[r.solver_index], instance, r.seed);
    if (spec.target_eps) r.reached = complexity_to_eps(r.trace, *spec.target_eps).has_value();
  });
  return runs;
}

}  // namespace spanbreaker::cli
