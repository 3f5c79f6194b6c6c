#include "rsc/filters.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "rsc/random.hpp"

namespace rsc {

std::string_view to_string(FilterMethod m) {
  switch (m) {
    case FilterMethod::chi2:
      return "chi2";
    case FilterMethod::infogain:
      return "infogain";
    case FilterMethod::relief:
      return "relief";
  }
  return "?";
}

FilterMethod parse_filter_method(std::string_view s) {
  if (s == "chi2") return FilterMethod::chi2;
  if (s == "infogain" || s == "ig") return FilterMethod::infogain;
  if (s == "relief") return FilterMethod::relief;
  throw std::invalid_argument("unknown filter method '" + std::string(s) + "'");
}

std::size_t bin_of(double value, std::size_t bins) {
  if (!(value > 0.0)) return 0;
  const auto b = static_cast<std::size_t>(std::floor(value * static_cast<double>(bins)));
  return std::min(b, bins - 1);
}

namespace {

void check_binned(const Dataset& d, std::size_t bins) {
  if (d.empty()) throw std::invalid_argument("filter: empty dataset");
  if (bins < 2) throw std::invalid_argument("filter: need at least 2 bins");
}

/// counts[b * classes + c] for one attribute.
std::vector<double> contingency(const Dataset& d, std::size_t attribute, std::size_t bins) {
  const auto classes = d.class_domain().size();
  std::vector<double> counts(bins * classes, 0.0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    counts[bin_of(d.row(i)[attribute], bins) * classes + d.label(i)] += 1.0;
  }
  return counts;
}

double entropy_bits(std::span<const double> counts, double total) {
  double h = 0.0;
  for (double c : counts) {
    if (c > 0.0) {
      const double p = c / total;
      h -= p * std::log2(p);
    }
  }
  return h;
}

}  // namespace

AttributeScores chi2_scores(const Dataset& d, std::size_t bins) {
  check_binned(d, bins);
  const auto classes = d.class_domain().size();
  const double n = static_cast<double>(d.size());
  AttributeScores out{FilterMethod::chi2, std::vector<double>(d.attribute_count()), bins, 0};
  for (std::size_t a = 0; a < d.attribute_count(); ++a) {
    const auto table = contingency(d, a, bins);
    std::vector<double> row_sum(bins, 0.0), col_sum(classes, 0.0);
    for (std::size_t b = 0; b < bins; ++b) {
      for (std::size_t c = 0; c < classes; ++c) {
        row_sum[b] += table[b * classes + c];
        col_sum[c] += table[b * classes + c];
      }
    }
    double chi = 0.0;
    for (std::size_t b = 0; b < bins; ++b) {
      for (std::size_t c = 0; c < classes; ++c) {
        const double expected = row_sum[b] * col_sum[c] / n;
        if (expected > 0.0) {
          const double diff = table[b * classes + c] - expected;
          chi += diff * diff / expected;
        }
      }
    }
    out.scores[a] = chi;
  }
  return out;
}

AttributeScores infogain_scores(const Dataset& d, std::size_t bins) {
  check_binned(d, bins);
  const auto classes = d.class_domain().size();
  const double n = static_cast<double>(d.size());
  std::vector<double> class_totals(classes, 0.0);
  for (auto y : d.labels()) class_totals[y] += 1.0;
  const double prior_entropy = entropy_bits(class_totals, n);

  AttributeScores out{FilterMethod::infogain, std::vector<double>(d.attribute_count()), bins, 0};
  for (std::size_t a = 0; a < d.attribute_count(); ++a) {
    const auto table = contingency(d, a, bins);
    double conditional = 0.0;
    for (std::size_t b = 0; b < bins; ++b) {
      std::span<const double> row(table.data() + b * classes, classes);
      const double in_bin = std::accumulate(row.begin(), row.end(), 0.0);
      if (in_bin > 0.0) conditional += (in_bin / n) * entropy_bits(row, in_bin);
    }
    // Clamp the rounding residue of a zero gain.
    out.scores[a] = std::max(0.0, prior_entropy - conditional);
  }
  return out;
}

AttributeScores relief_scores(const Dataset& d, std::size_t sample_count, std::uint64_t seed) {
  const auto classes = d.class_domain().size();
  const auto counts = d.class_counts();
  std::size_t present = 0;
  for (std::size_t c = 0; c < classes; ++c) {
    if (counts[c] == 1) {
      throw std::invalid_argument("relief: class '" + d.class_domain()[c] +
                                  "' has a single instance, so no nearest hit exists");
    }
    if (counts[c] > 0) ++present;
  }
  if (present < 2) throw std::invalid_argument("relief: need at least two classes");
  if (sample_count == 0) throw std::invalid_argument("relief: sample_count must be positive");

  const auto n = d.size();
  const auto m = d.attribute_count();
  std::vector<std::size_t> picks;
  if (sample_count >= n) {
    picks.resize(n);
    std::iota(picks.begin(), picks.end(), std::size_t{0});
  } else {
    Rng rng(seed);
    picks = rng.sample_without_replacement(n, sample_count);
  }
  std::vector<double> prior(classes);
  for (std::size_t c = 0; c < classes; ++c) prior[c] = static_cast<double>(counts[c]) / static_cast<double>(n);

  std::vector<double> weights(m, 0.0);
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> nearest(classes);
  std::vector<std::size_t> nearest_index(classes);
  for (auto i : picks) {
    const auto x = d.row(i);
    const auto y = d.label(i);
    std::fill(nearest.begin(), nearest.end(), kInf);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const auto z = d.row(j);
      double dist = 0.0;
      for (std::size_t a = 0; a < m; ++a) dist += std::abs(x[a] - z[a]);
      const auto c = d.label(j);
      if (dist < nearest[c]) {
        nearest[c] = dist;
        nearest_index[c] = j;
      }
    }
    const auto hit = d.row(nearest_index[y]);
    for (std::size_t a = 0; a < m; ++a) weights[a] -= std::abs(x[a] - hit[a]);
    for (std::size_t c = 0; c < classes; ++c) {
      if (c == y || counts[c] == 0) continue;
      const double w = prior[c] / (1.0 - prior[y]);
      const auto miss = d.row(nearest_index[c]);
      for (std::size_t a = 0; a < m; ++a) weights[a] += w * std::abs(x[a] - miss[a]);
    }
  }
  const double samples = static_cast<double>(picks.size());
  for (auto& w : weights) w /= samples;
  return {FilterMethod::relief, std::move(weights), 0, picks.size()};
}

std::vector<std::size_t> select_top_k(const AttributeScores& scores, std::size_t k) {
  const auto m = scores.scores.size();
  if (k < 1 || k > m) {
    throw std::invalid_argument("select_top_k: k=" + std::to_string(k) + " outside [1, " +
                                std::to_string(m) + "]");
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores.scores[a] > scores.scores[b];
  });
  order.resize(k);
  return order;
}

void write_scores(std::ostream& out, const AttributeScores& scores,
                  const std::vector<std::string>& attribute_names) {
  const auto ranking = select_top_k(scores, scores.scores.size());
  std::vector<std::size_t> rank(ranking.size());
  for (std::size_t r = 0; r < ranking.size(); ++r) rank[ranking[r]] = r + 1;
  out << "attribute,score,rank\n";
  for (std::size_t a = 0; a < scores.scores.size(); ++a) {
    out << attribute_names.at(a) << ',' << format_double(scores.scores[a]) << ',' << rank[a] << '\n';
  }
}

}  // namespace rsc
