#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace rsc {

/// Accuracies of k classifiers (columns) on n datasets (rows).
struct AccuracyMatrix {
  std::vector<std::string> datasets;
  std::vector<std::string> classifiers;
  std::vector<double> values;  ///< row-major, datasets x classifiers

  std::size_t rows() const noexcept { return datasets.size(); }
  std::size_t cols() const noexcept { return classifiers.size(); }
  double at(std::size_t dataset, std::size_t classifier) const {
    return values[dataset * classifiers.size() + classifier];
  }

  /// Throws std::invalid_argument unless n >= 2, k >= 2 and the shape matches.
  void validate() const;
};

/// First column is the dataset name; the header row names the classifiers.
AccuracyMatrix parse_accuracy_matrix(std::istream& in);
AccuracyMatrix load_accuracy_matrix(const std::filesystem::path& path);

struct RankSummary {
  std::vector<std::string> classifiers;
  std::vector<std::vector<double>> ranks;  ///< per dataset, 1 = best, midranks on ties
  std::vector<double> mean_ranks;
  std::size_t datasets = 0;
  double friedman_chi2 = 0.0;
  double iman_davenport_f = 0.0;
  std::size_t df1 = 0;  ///< k - 1
  std::size_t df2 = 0;  ///< (k - 1)(n - 1)
  double p_value = 1.0; ///< upper tail of F(df1, df2) at iman_davenport_f
};

/// Ranks of `values` with 1 assigned to the largest; ties share the mean rank.
std::vector<double> descending_midranks(const std::vector<double>& values);

RankSummary friedman_test(const AccuracyMatrix& m);

/// Nemenyi two-tailed constant q for k classifiers, level 0.05 or 0.10.
/// Defined for 2 <= k <= 10; throws std::out_of_range otherwise.
double nemenyi_q(std::size_t k, double level);

/// q * sqrt(k(k+1) / (6n)).
double nemenyi_cd(std::size_t k, std::size_t n, double level);

/// (r_i - r_j) / sqrt(k(k+1) / (6n)); standard normal under the null.
double bonferroni_dunn_z(double mean_rank_i, double mean_rank_j, std::size_t k, std::size_t n);

/// True when |z| exceeds the two-sided normal critical value at level/(k-1).
bool bonferroni_dunn_significant(double z, std::size_t k, double level);

/// Regularized incomplete beta I_x(a, b) by continued fraction (modified
/// Lentz, relative tolerance 1e-10).
double regularized_incomplete_beta(double a, double b, double x);

/// P(F > f) for F ~ F(d1, d2).
double f_distribution_sf(double f, double d1, double d2);

/// Groups of classifiers whose mean ranks all lie within `cd` of each other:
/// maximal runs over the rank ordering, singletons dropped. Each clique lists
/// classifier indices, best rank first.
std::vector<std::vector<std::size_t>> cd_cliques(const std::vector<double>& mean_ranks, double cd);

/// Critical difference diagram as an SVG 1.1 document.
std::string render_cd_svg(const RankSummary& summary, double cd);

/// Fixed-width text rendering of the same diagram.
std::string render_cd_text(const RankSummary& summary, double cd);

/// Writes the SVG to `path` and the text form next to it (".txt").
void render_cd_diagram(const RankSummary& summary, double cd, const std::filesystem::path& path);

/// Human-readable rank report: mean ranks, statistics, p-value, CD, cliques.
void write_rank_report(std::ostream& out, const RankSummary& summary, double cd, double level);

}  // namespace rsc
