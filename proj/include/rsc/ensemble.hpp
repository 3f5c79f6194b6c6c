#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rsc/dataset.hpp"
#include "rsc/sphere_cover.hpp"

namespace rsc {

enum class EnsembleScheme {
  arse,   ///< majority vote over independently randomised covers
  abrse,  ///< border-case removal with resampling of hard cases
  arsse,  ///< random attribute subspace per member
};

std::string_view to_string(EnsembleScheme s);
EnsembleScheme parse_ensemble_scheme(std::string_view s);

struct EnsembleModel {
  EnsembleScheme scheme = EnsembleScheme::arse;
  std::size_t size = 0;  ///< L, the member count
  int alpha = 1;
  std::optional<std::size_t> kappa;
  std::uint64_t master_seed = 0;
  std::vector<std::string> class_labels;
  std::vector<SphereCoverModel> members;
};

struct VoteTally {
  std::vector<std::size_t> counts;  ///< one entry per class label
  std::size_t winner = 0;
  bool tie_broken = false;
};

/// Seed of member j: derive_seed(master, "member", j).
std::uint64_t member_seed(std::uint64_t master, std::size_t member);

/// Seed used to break the vote tie for the query with the given index.
std::uint64_t tie_seed(std::uint64_t master, std::size_t query);

/// L covers, each built on the full training set with its own seed.
EnsembleModel build_arse(const Dataset& train, int alpha, std::size_t members, std::uint64_t seed,
                         std::size_t threads = 1);

/// Sorted distinct border indices of `m` that index into `d`. Unbounded
/// spheres have no border case.
std::vector<std::size_t> border_cases(const SphereCoverModel& m, const Dataset& d);

/// Indices of `d` (full width, normalized) that no sphere strictly contains.
std::vector<std::size_t> uncovered_cases(const SphereCoverModel& m, const Dataset& d);

/// Indices of `d` (full width, normalized) that `m` labels wrongly.
/// Throws UnusableModelError for a model without spheres.
std::vector<std::size_t> misclassified_cases(const SphereCoverModel& m, const Dataset& d);

/// Per-iteration record of the border-case resampling, for inspection.
struct ResampleTrace {
  /// Training multiset used by each member, as indices into the original set.
  std::vector<std::vector<std::size_t>> training_sets;
  /// Border cases removed after each member, as indices into the original set.
  std::vector<std::vector<std::size_t>> removed;
  /// Replacement draws after each member, as indices into the original set.
  std::vector<std::vector<std::size_t>> drawn;
};

/// Border-case resampling ensemble.
///
/// Member j is built on the multiset D_j (D_1 = train). Its border cases E
/// are removed from D_j and replaced by |E| draws with replacement from the
/// concatenation of E, the cases of D_j it leaves uncovered, and the cases
/// of the full training set it misclassifies.
EnsembleModel build_abrse(const Dataset& train, int alpha, std::size_t members, std::uint64_t seed,
                          ResampleTrace* trace = nullptr);

/// Random subspace ensemble: member j sees kappa attributes drawn without
/// replacement (seed derive_seed(master, "subspace", j)).
EnsembleModel build_arsse(const Dataset& train, int alpha, std::size_t kappa, std::size_t members,
                          std::uint64_t seed, std::size_t threads = 1);

/// Majority vote fusion. Exact ties go to a uniformly random tied label.
VoteTally tally_votes(std::span<const std::size_t> votes, std::size_t class_count,
                      std::uint64_t tie_seed);

/// Each member predicts a normalized full-width `x`; votes are fused.
VoteTally vote(const EnsembleModel& e, std::span<const double> x, std::uint64_t tie_seed);

/// vote() on a raw instance, normalizing with the members' stored ranges.
VoteTally vote_raw(const EnsembleModel& e, std::span<const double> x_raw, std::uint64_t tie_seed);

}  // namespace rsc
