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

// Command-line front end: RunSpec parsing, runs, CSV output and the
// run / rates / speedup subcommands.

#ifndef SPANBREAKER_CLI_HPP
#define SPANBREAKER_CLI_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "spanbreaker/harness.hpp"
#include "spanbreaker/trace.hpp"

namespace spanbreaker::cli {

// Malformed or inconsistent spec; the message names the field.
class spec_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ProblemSpec {
  std::string kind;  // chain | block | sdca | ncvx
  std::size_t n = 1;
  std::size_t d = 0;    // chain, ncvx
  std::size_t d_b = 0;  // block
  double L = 0.0;
  double sigma = 0.0;  // chain, block
  double mu = 0.0;     // sdca, ncvx
  double spread = 0.0;
  std::uint64_t seed = 0;
  std::string psi = "none";
  double psi_weight = 0.0;
};

struct SolverSpec {
  std::string name;  // svrg | sarah | saga | gd | sdca
  bool auto_params = false;
  nlohmann::json params = nlohmann::json::object();
};

struct BudgetSpec {
  std::optional<std::uint64_t> epochs;
  std::optional<std::uint64_t> grad_units;
};

struct RunSpec {
  ProblemSpec problem;
  std::vector<SolverSpec> solvers;
  BudgetSpec budget;
  std::vector<std::uint64_t> seeds;
  std::string output;
  std::optional<double> target_eps;

  // Every field spelled out, defaults included; dump() of it is stable.
  nlohmann::json canonical() const;
};

RunSpec parse_run_spec(const nlohmann::json& doc);
// JSON document, or a summary CSV carrying a "# spec: " line.
RunSpec load_run_spec(const std::filesystem::path& path);

// Built instance; sdca is set for kind = sdca.
struct Instance {
  std::shared_ptr<const FiniteSumProblem> problem;
  std::optional<SdcaInstance> sdca;
};
Instance build_instance(const ProblemSpec& spec);

struct RunOutcome {
  std::size_t solver_index = 0;
  std::string solver;
  std::uint64_t seed = 0;
  std::string file;
  Trace trace;
  bool reached = true;
};

// Solver configuration for an svrg/sarah entry, "auto" resolved.
SvrgConfig resolve_svrg_config(const RunSpec& spec, const SolverSpec& solver,
                               const FiniteSumProblem& problem, std::uint64_t seed);

// Runs every (solver, seed) pair; results are ordered by solver then seed.
std::vector<RunOutcome> execute(const RunSpec& spec, const Instance& instance);

std::string format_double(double v);
std::string trace_csv(const Trace& trace);
std::string summary_csv(const RunSpec& spec, const std::vector<RunOutcome>& runs);
std::string speedup_csv(const std::vector<SpeedupRow>& rows);
// Write to a temporary sibling and rename over the target.
void write_atomic(const std::filesystem::path& path, const std::string& content);

struct CommonOptions {
  std::string spec_path;
  std::optional<std::string> out;
  std::optional<std::vector<std::uint64_t>> seeds;
  bool debug_epochs = false;
};

int cmd_run(const CommonOptions& options, std::ostream& out, std::ostream& err);
int cmd_rates(const CommonOptions& options, std::ostream& out, std::ostream& err);

struct SpeedupArgs {
  std::vector<std::size_t> n_list;
  double alpha = 0.5;
  double beta = 0.5;
  std::vector<std::uint64_t> seeds;
  std::string out;
  std::size_t block_dim = 4;
};
int cmd_speedup(const SpeedupArgs& args, std::ostream& out, std::ostream& err);

// Full argument parsing and dispatch; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace spanbreaker::cli

#endif  // SPANBREAKER_CLI_HPP
