#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "rsc/dataset.hpp"
#include "rsc/ensemble.hpp"
#include "rsc/filters.hpp"
#include "rsc/sphere_cover.hpp"

namespace rsc {

enum class ModelKind {
  rsc,       ///< single randomised sphere cover
  arse,
  abrse,
  arsse,
  majority,  ///< constant training-majority baseline
};

std::string_view to_string(ModelKind k);
ModelKind parse_model_kind(std::string_view s);

struct FilterSpec {
  FilterMethod method = FilterMethod::chi2;
  std::size_t bins = kDefaultBins;
  std::size_t k = 10;  ///< attributes kept
  std::size_t relief_samples = kDefaultReliefSamples;
};

struct ModelSpec {
  ModelKind kind = ModelKind::rsc;
  int alpha = 1;
  std::optional<std::size_t> kappa;  ///< set iff kind == arsse
  std::size_t members = 25;          ///< L; ignored for rsc and majority
  std::optional<FilterSpec> filter;

  /// Throws std::invalid_argument when the fields are inconsistent.
  void validate() const;
};

struct MajorityModel {
  std::size_t label = 0;
};

/// A model fitted end to end: normalization and optional attribute filter
/// fitted on the training data, then the classifier itself. Every stored
/// SphereCoverModel carries the normalization and attribute indices into
/// the original attribute space, so predictions take raw instances.
struct FittedModel {
  ModelSpec spec;
  std::vector<std::string> attributes;
  std::vector<std::string> class_labels;
  std::vector<std::size_t> selected_attributes;  ///< filter output; empty without a filter
  std::variant<SphereCoverModel, EnsembleModel, MajorityModel> model;
};

FittedModel fit(const ModelSpec& spec, const Dataset& train, std::uint64_t seed,
                std::size_t threads = 1);

struct Prediction {
  std::size_t label = 0;           ///< index into FittedModel::class_labels
  std::optional<VoteTally> tally;  ///< ensembles only
};

/// Prediction for a raw instance. `query` indexes the tie-break stream.
Prediction predict(const FittedModel& m, std::span<const double> x_raw, std::size_t query = 0);

/// Fraction of `test` labeled correctly. Labels are matched by name.
double accuracy(const FittedModel& m, const Dataset& test);

/// Fits on train and scores on test. A model left without spheres scores 0
/// (a warning goes to the diagnostic stream) instead of failing.
double evaluate_accuracy(const ModelSpec& spec, const Dataset& train, const Dataset& test,
                         std::uint64_t seed, std::size_t threads = 1);

/// Mean accuracy over k stratified folds.
double cross_validate(const Dataset& d, const ModelSpec& spec, std::size_t k, std::uint64_t seed,
                      std::size_t threads = 1);

/// Alpha maximizing the cross-validated accuracy of a single cover; ties go
/// to the smallest alpha.
int select_alpha(const Dataset& train, std::span<const int> alpha_grid, std::size_t cv_k,
                 std::uint64_t seed, const std::optional<FilterSpec>& filter = {},
                 std::size_t threads = 1);

struct KappaAlpha {
  std::size_t kappa = 1;
  int alpha = 1;
};

/// Two-stage search on a stratified third of `train`: kappa first with
/// alpha at the grid median, then alpha at the chosen kappa.
KappaAlpha select_kappa_alpha(const Dataset& train, std::span<const std::size_t> kappa_grid,
                              std::span<const int> alpha_grid, std::size_t members,
                              std::size_t cv_k, std::uint64_t seed,
                              const std::optional<FilterSpec>& filter = {},
                              std::size_t threads = 1);

/// Alpha values 0..30.
std::vector<int> default_alpha_grid();

/// Distinct round(m * f) for f = 0.1..1.0, plus 5,10,20,30,40,50 (those not
/// above m) when a filter is active; sorted ascending.
std::vector<std::size_t> default_kappa_grid(std::size_t attribute_count, bool with_filter);

// ---------------------------------------------------------------------------
// Bias / variance under 0/1 loss

struct BVInstanceStats {
  std::size_t main_prediction = 0;
  bool bias = false;
  double variance = 0.0;
  int c2 = 1;
  double per_set_loss = 0.0;
};

/// Statistics of one test point given its s predictions. Labels are indices
/// into a sorted class domain, so the lowest index on a modal tie is also the
/// lexicographically smallest label.
BVInstanceStats bv_point_stats(std::span<const std::size_t> predictions, std::size_t truth);

struct BVReport {
  double average_error = 0.0;
  double bias = 0.0;
  double net_variance = 0.0;
  double unbiased_variance = 0.0;
  double biased_variance = 0.0;
  std::size_t replicates = 0;  ///< s
  std::vector<BVInstanceStats> points;
};

/// Averages per-point statistics. The unbiased and biased variances sum the
/// variance of points with bias 0 and bias 1 respectively, each divided by
/// the total point count.
BVReport aggregate_bv(std::vector<BVInstanceStats> points, std::size_t replicates);

struct BVOptions {
  std::size_t replicates = 200;  ///< s
  std::size_t boot_size = 200;
  double test_fraction = 1.0 / 3.0;
  std::size_t threads = 1;
};

/// Trains on `train` and returns one label index (in the shared domain) per
/// test instance. Indices >= the domain size denote "no prediction" and
/// always count as wrong.
using Learner = std::function<std::vector<std::size_t>(const Dataset& train, const Dataset& test,
                                                       std::uint64_t seed)>;

/// Holds out a stratified test set, trains `learner` on `replicates`
/// bootstrap samples of the remaining pool and decomposes the test loss.
BVReport bv_decompose(const Dataset& d, const Learner& learner, const BVOptions& options,
                      std::uint64_t seed);
BVReport bv_decompose(const Dataset& d, const ModelSpec& spec, const BVOptions& options,
                      std::uint64_t seed);

/// Learner wrapping fit()/predict(); unusable models yield "no prediction".
Learner make_learner(const ModelSpec& spec);

/// CSV columns avg_error,bias,net_var,var_unbiased,var_biased, one row per
/// report prefixed by its name, followed by pairwise percentage-difference
/// rows when more than one report is given.
void write_bv_reports(std::ostream& out, const std::vector<std::pair<std::string, BVReport>>& reports);

/// (second - first) / first * 100, rendered with an explicit sign.
std::string percent_difference(double first, double second);

}  // namespace rsc
