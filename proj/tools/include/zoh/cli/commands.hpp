#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "zoh/cli/certificate.hpp"
#include "zoh/cli/config.hpp"
#include "zoh/pipeline.hpp"
#include "zoh/sim.hpp"
#include "zoh/verify.hpp"

namespace zoh::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitInfeasible = 2,
  kExitConfig = 3,
  kExitBlowup = 4,
};

struct CommandOptions {
  std::filesystem::path config;
  std::filesystem::path out;
  std::optional<LawVariant> variant;
  bool unsafe = false;
  std::string grid;
  std::filesystem::path trace;
  std::filesystem::path certificate;
};

/// A configuration resolved into a runnable setup and its certificate.
struct Prepared {
  ExperimentConfig config;
  std::shared_ptr<const LinearIOPlant> plant;
  PlantDesign design;
  SimSetup setup;
  Certificate certificate;
};

/// Designs for the configured plant and picks τ (explicit, or τ_max).
/// Throws ConfigError when an explicit τ is not certified and unsafe is
/// false, and InfeasibleDesign when no τ is given and τ_max ≤ 0.
Prepared prepare(const ExperimentConfig& config, std::optional<LawVariant> variant, bool unsafe);

struct GridPoint {
  std::optional<double> tau;
  std::optional<double> lambda;
  std::optional<double> beta;
};

/// Parses "tau=a,b;lambda=c;beta=d" into the Cartesian product, ordered
/// with tau outermost and beta innermost.
std::vector<GridPoint> parse_grid(const std::string& spec);

struct SweepRow {
  std::size_t index = 0;
  double tau = 0.0;
  double lambda = 0.0;
  double beta = 0.0;
  bool feasible = false;
  bool certified = false;
  double funnel_margin = 0.0;
  double input_max = 0.0;
  double violation_time = 0.0;
  std::string status;
};

/// Runs every grid point with up to `workers` threads. Rows come back in
/// grid order; a failing point yields a row, not an exception.
std::vector<SweepRow> run_sweep(const ExperimentConfig& config, const std::vector<GridPoint>& grid,
                                std::optional<LawVariant> variant, int workers);

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

/// Worker count from ZOHFC_WORKERS, else the hardware concurrency.
int worker_count();

int cmd_design(const CommandOptions& opts, std::ostream& out);
int cmd_simulate(const CommandOptions& opts, std::ostream& out);
int cmd_verify(const CommandOptions& opts, std::ostream& out);
int cmd_sweep(const CommandOptions& opts, std::ostream& out);
int cmd_compare(const CommandOptions& opts, std::ostream& out);

/// Runs a command and maps library exceptions to exit codes, printing the
/// message to err.
int run_guarded(int (*cmd)(const CommandOptions&, std::ostream&), const CommandOptions& opts,
                std::ostream& out, std::ostream& err);

}  // namespace zoh::cli
