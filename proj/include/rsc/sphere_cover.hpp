#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rsc/dataset.hpp"

namespace rsc {

/// Euclidean distance. Throws std::invalid_argument on a length mismatch.
double distance(std::span<const double> a, std::span<const double> b);

/// A pure ball around one training case.
struct Sphere {
  std::size_t label = 0;  ///< index into SphereCoverModel::class_labels
  std::vector<double> center;
  double radius = 0.0;  ///< +inf when the training data had no other class
  std::vector<std::size_t> members;  ///< training indices strictly inside
  /// Training index of the nearest other-class case, which fixed the radius.
  std::optional<std::size_t> border_index;

  bool unbounded() const noexcept { return radius == std::numeric_limits<double>::infinity(); }
};

/// A randomised sphere cover classifier.
///
/// Sphere centers live in the projected space given by `attribute_subset`;
/// `normalization` covers the full attribute space the subset indexes into,
/// so raw full-width instances can be classified with predict_raw().
struct SphereCoverModel {
  std::vector<std::string> class_labels;
  std::vector<Sphere> spheres;
  int alpha = 1;
  std::vector<std::size_t> attribute_subset;
  Normalization normalization;
};

/// Builds a sphere cover over `train`, which must already be normalized.
///
/// Cases are drawn at random from those not yet covered. Each draw becomes a
/// sphere center whose radius is the distance to the nearest case of another
/// class; the sphere is kept when at least max(alpha, 1) cases fall strictly
/// inside it, otherwise its cases are marked uncovered. The loop ends once
/// every case is covered or marked.
SphereCoverModel build_rsc(const Dataset& train, int alpha, std::uint64_t seed);

struct CoverHit {
  std::size_t sphere = 0;
  double center_distance = 0.0;
};

/// Spheres strictly containing `x` (already projected and normalized).
std::vector<CoverHit> covering_spheres(const SphereCoverModel& m, std::span<const double> x);

/// Signed distance from `x` to the sphere surface; -inf for unbounded spheres.
double edge_distance(const Sphere& s, std::span<const double> x);

/// Label index for a projected, normalized `x`.
///
/// A covered point takes the label of the covering sphere with the nearest
/// center; otherwise the sphere with the nearest surface wins. Equal
/// distances go to the lower sphere index. Throws UnusableModelError when the
/// model holds no spheres.
std::size_t classify(const SphereCoverModel& m, std::span<const double> x);

/// classify() on a normalized full-width vector, projecting through
/// `attribute_subset` first.
std::size_t predict(const SphereCoverModel& m, std::span<const double> x_full);

/// predict() on a raw full-width vector, normalizing first.
std::size_t predict_raw(const SphereCoverModel& m, std::span<const double> x_raw);

/// Checks the purity and minimum-size invariants of a model against the
/// (projected) data it was built on. Throws InvariantError on violation.
void verify_cover(const SphereCoverModel& m, const Dataset& projected_train);

}  // namespace rsc
