#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cli/config.hpp"

namespace rsc::cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 2,
  kSchemaError = 3,
  kInternalError = 4,
};

/// Parses argv, merges flags over the config file and dispatches. Data goes
/// to files under the output directory or to `out`; diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

void cmd_train(const ExperimentConfig& c, std::ostream& out);
void cmd_predict(const ExperimentConfig& c, std::ostream& out);
void cmd_experiment(const ExperimentConfig& c, std::ostream& out, std::ostream& err);
void cmd_bv(const ExperimentConfig& c, std::ostream& out);
void cmd_compare(const ExperimentConfig& c, std::ostream& out);
void cmd_filter(const ExperimentConfig& c, std::ostream& out);
void cmd_gen(const ExperimentConfig& c, std::ostream& out);

/// Applies model selection where the entry leaves alpha or kappa open.
ModelSpec resolve_model(const ModelEntry& entry, const Dataset& train, std::size_t cv_folds,
                        std::uint64_t seed, std::size_t threads);

struct RunSummary {
  double mean = 0.0;
  double sd = 0.0;  ///< sample standard deviation; 0 for a single run
};

RunSummary summarize(const std::vector<double>& accuracies);

}  // namespace rsc::cli
