#pragma once

#include <string>
#include <vector>

#include "levy_ep/config.hpp"
#include "levy_ep/levy_core.hpp"
#include "levy_ep/sde_problem.hpp"

namespace levy_ep {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct OutputFile {
  std::string name;
  std::string content;
};

struct ExperimentResult {
  std::string kind;
  std::vector<CheckResult> checks;
  std::vector<OutputFile> outputs;

  bool all_pass() const;
  const OutputFile& output(const std::string& name) const;
};

/// model.kind = brownian | compound_poisson | hyperexponential, with
/// model.drift, model.sigma, model.rate / model.intensity and model.jump.*.
LevyModel model_from_config(const Config& cfg);
/// problem.coefficient plus its parameters (problem.value, problem.scale,
/// problem.base, problem.amplitude), problem.y0 and problem.T.
SdeProblem problem_from_config(const Config& cfg);

std::vector<std::string> experiment_names();
std::vector<std::string> model_names();
std::vector<std::string> jump_names();
std::string list_registries();

/// Runs the experiment named by cfg["experiment"] with master seed
/// cfg["master_seed"]. Outputs are kept in memory and depend only on cfg.
ExperimentResult run_experiment(const Config& cfg, unsigned workers);

/// Git blob id: SHA-1 of "blob <size>\0" followed by the content.
std::string git_blob_sha1(const std::string& content);

/// Config echo preceded by comment lines with output hashes and check
/// outcomes. Parsing it back yields `cfg`.
std::string render_manifest(const Config& cfg, const ExperimentResult& result);
std::string render_summary_json(const Config& cfg, const ExperimentResult& result);

/// Writes every output, manifest.cfg and summary.json into `dir`.
void write_artifacts(const Config& cfg, const ExperimentResult& result, const std::string& dir);

}  // namespace levy_ep
