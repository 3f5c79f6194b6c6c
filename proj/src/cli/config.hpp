#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rsc/dataset.hpp"
#include "rsc/evaluation.hpp"
#include "rsc/serialization.hpp"

namespace rsc::cli {

/// One model entry of a config. Absent alpha (or kappa, for arsse) means
/// "select it by cross-validation over the grid".
struct ModelEntry {
  std::string name;
  ModelKind kind = ModelKind::rsc;
  std::optional<int> alpha;
  std::optional<std::size_t> kappa;
  std::vector<int> alpha_grid;           ///< empty = default 0..30
  std::vector<std::size_t> kappa_grid;   ///< empty = default fractions of m
  std::size_t members = 25;
  std::optional<FilterSpec> filter;
};

struct SyntheticSource {
  SyntheticSpec spec;
  std::size_t n = 300;
};

struct ExperimentConfig {
  std::optional<std::filesystem::path> data;
  std::optional<SyntheticSource> synthetic;
  int class_column = -1;

  std::vector<ModelEntry> models;
  std::optional<std::filesystem::path> model_file;

  std::uint64_t seed = 0;
  std::size_t runs = 1;
  double test_fraction = 1.0 / 3.0;
  std::size_t cv_folds = 10;
  std::filesystem::path out = ".";
  std::size_t threads = 1;

  std::size_t bv_replicates = 200;
  std::size_t bv_boot_size = 200;

  std::optional<FilterSpec> filter;  ///< stand-alone filter command
  bool filter_k_given = false;

  std::optional<std::filesystem::path> matrix;
  double level = 0.10;

  /// Throws ParseError when the invariants below do not hold.
  void validate_data_source() const;
  void validate_models() const;
};

/// Reads a config file (JSON object with nested sections).
json load_config_file(const std::filesystem::path& path);

/// Recursively overlays `overrides` onto `base`; objects merge, other values replace.
void merge_config(json& base, const json& overrides);

/// Interprets a merged config document. Unknown keys are rejected.
ExperimentConfig parse_config(const json& doc);

}  // namespace rsc::cli
