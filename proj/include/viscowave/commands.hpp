#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "viscowave/fd_oracle.hpp"
#include "viscowave/problem.hpp"
#include "viscowave/run_config.hpp"
#include "viscowave/spectral_solver.hpp"

namespace viscowave {

/// Result of a full solve on the problem's own domain.
struct PipelineResult {
  SolutionField field;
  double residual_sup = 0.0;       ///< on the [0, pi] rescaled problem
  double boundary_flux_sup = 0.0;  ///< of the homogenized part
  double source_discrepancy = 0.0;
  std::vector<std::string> warnings;
  int modes = 0;
  double spectral_tail = 0.0;
};

/// rescale to [0, pi] -> homogenize -> spectral solve (or oracle) ->
/// dehomogenize -> rescale back.
PipelineResult solve_pipeline(const NeumannProblem& problem, GreenKind kind, SourceMode mode,
                              const SolveOptions& opts);
PipelineResult oracle_pipeline(const NeumannProblem& problem, SourceMode mode, const OracleConfig& config,
                               OracleDiagnostics* diag = nullptr);

struct CommandResult {
  nlohmann::json summary;
  std::vector<std::filesystem::path> files;
};

/// Runs one of green, solve, oracle, sweep, bound-check. Outputs and the
/// resolved config go to config.out_dir(). Throws the library errors; a
/// truncation failure is raised after the outputs are written unless
/// allow_unconverged is set.
CommandResult run_command(std::string_view name, const RunConfig& config);

std::vector<std::string> command_names();

}  // namespace viscowave
