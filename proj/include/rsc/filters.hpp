#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "rsc/dataset.hpp"

namespace rsc {

enum class FilterMethod { chi2, infogain, relief };

std::string_view to_string(FilterMethod m);
FilterMethod parse_filter_method(std::string_view s);

struct AttributeScores {
  FilterMethod method = FilterMethod::chi2;
  std::vector<double> scores;  ///< one per attribute
  std::size_t bins = 0;         ///< chi2 / infogain discretization
  std::size_t sample_count = 0; ///< relief
};

inline constexpr std::size_t kDefaultBins = 10;
inline constexpr std::size_t kDefaultReliefSamples = 250;

/// Equal-width bin of a normalized value; values outside [0,1] go to the
/// end bins.
std::size_t bin_of(double value, std::size_t bins);

/// Pearson chi-squared of the bin-by-class contingency table per attribute.
AttributeScores chi2_scores(const Dataset& d, std::size_t bins = kDefaultBins);

/// H(class) - H(class | bin), in bits, per attribute.
AttributeScores infogain_scores(const Dataset& d, std::size_t bins = kDefaultBins);

/// ReliefF with one nearest hit and one nearest miss per other class, misses
/// weighted by class prior. When sample_count >= n every instance is used
/// once; otherwise sample_count distinct instances are drawn.
AttributeScores relief_scores(const Dataset& d, std::size_t sample_count, std::uint64_t seed);

/// Indices of the k best scores, best first; equal scores keep index order.
std::vector<std::size_t> select_top_k(const AttributeScores& scores, std::size_t k);

/// CSV with columns attribute,score,rank (rank 1 = best).
void write_scores(std::ostream& out, const AttributeScores& scores,
                  const std::vector<std::string>& attribute_names);

}  // namespace rsc
