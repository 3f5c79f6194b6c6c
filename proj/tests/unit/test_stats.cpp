#include <cmath>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "rsc/error.hpp"
#include "rsc/stats.hpp"
#include "support.hpp"

using namespace rsc;

namespace {

AccuracyMatrix matrix(std::vector<std::string> cls, std::vector<std::vector<double>> rows) {
  AccuracyMatrix m;
  m.classifiers = std::move(cls);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    m.datasets.push_back("d" + std::to_string(i));
    m.values.insert(m.values.end(), rows[i].begin(), rows[i].end());
  }
  return m;
}

std::vector<std::string> names(const RankSummary& s, const std::vector<std::size_t>& idx) {
  std::vector<std::string> out;
  for (auto i : idx) out.push_back(s.classifiers[i]);
  return out;
}

}  // namespace

TEST_CASE("midranks") {
  CHECK(descending_midranks({0.9, 0.8, 0.7}) == std::vector<double>{1, 2, 3});
  CHECK(descending_midranks({0.5, 0.9, 0.5}) == std::vector<double>{2.5, 1, 2.5});
}

TEST_CASE("identical classifiers") {
  const auto m = matrix({"a", "b", "c"}, {{0.5, 0.5, 0.5}, {0.7, 0.7, 0.7}});
  const auto s = friedman_test(m);
  for (double r : s.mean_ranks) CHECK(r == 2.0);
  CHECK(s.iman_davenport_f == 0.0);
  CHECK(s.p_value == 1.0);
  CHECK(cd_cliques(s.mean_ranks, nemenyi_cd(3, 2, 0.10)).size() == 1);
}

TEST_CASE("table iv ranks and cliques") {
  const auto m = load_accuracy_matrix(test::data_dir() / "table4.csv");
  const auto s = friedman_test(m);
  const std::vector<double> expected{2.09375, 1.53125, 4.0, 3.5, 3.875};
  for (std::size_t i = 0; i < 5; ++i) CHECK(s.mean_ranks[i] == doctest::Approx(expected[i]).epsilon(1e-12));
  CHECK(s.friedman_chi2 == doctest::Approx(31.9625));
  CHECK(s.iman_davenport_f == doctest::Approx(14.964884900507222).epsilon(1e-12));
  CHECK(s.df1 == 4);
  CHECK(s.df2 == 60);
  CHECK(s.p_value == doctest::Approx(1.5417e-08).epsilon(1e-3));

  const auto cliques = cd_cliques(s.mean_ranks, 1.375);
  REQUIRE(cliques.size() == 2);
  CHECK(names(s, cliques[0]) == std::vector<std::string>{"RotF", "aRSSE"});
  CHECK(names(s, cliques[1]) == std::vector<std::string>{"RandF", "RandC", "RandS"});

  // Permuting columns permutes ranks and keeps F.
  AccuracyMatrix p = m;
  p.classifiers = {m.classifiers[4], m.classifiers[0], m.classifiers[3], m.classifiers[1], m.classifiers[2]};
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const std::size_t order[5] = {4, 0, 3, 1, 2};
    for (std::size_t c = 0; c < 5; ++c) p.values[r * 5 + c] = m.at(r, order[c]);
  }
  const auto ps = friedman_test(p);
  CHECK(ps.mean_ranks[0] == s.mean_ranks[4]);
  CHECK(ps.mean_ranks[3] == s.mean_ranks[1]);
  CHECK(ps.iman_davenport_f == doctest::Approx(s.iman_davenport_f).epsilon(1e-12));
}

TEST_CASE("critical differences") {
  CHECK(std::abs(nemenyi_cd(5, 16, 0.10) - 1.375) <= 0.001);
  CHECK(std::abs(nemenyi_cd(10, 16, 0.10) - 3.1257) <= 0.001);
  CHECK(nemenyi_cd(5, 64, 0.10) * 2.0 == doctest::Approx(nemenyi_cd(5, 16, 0.10)).epsilon(1e-15));
  CHECK(nemenyi_q(2, 0.05) == 1.960);
  CHECK_THROWS_AS(nemenyi_q(11, 0.05), std::out_of_range);
  CHECK_THROWS_AS(nemenyi_q(1, 0.05), std::out_of_range);
  CHECK_THROWS_AS(nemenyi_q(5, 0.01), std::invalid_argument);
}

TEST_CASE("bonferroni-dunn") {
  CHECK(bonferroni_dunn_z(2.0, 2.0, 5, 16) == 0.0);
  CHECK(bonferroni_dunn_z(1.53, 4.0, 5, 16) == -bonferroni_dunn_z(4.0, 1.53, 5, 16));
  CHECK(std::abs(bonferroni_dunn_z(1.53, 4.0, 5, 16) - (-4.418)) <= 0.005);
  CHECK(bonferroni_dunn_significant(-4.418, 5, 0.05));
  CHECK_FALSE(bonferroni_dunn_significant(0.5, 5, 0.05));
}

TEST_CASE("incomplete beta and F tail") {
  CHECK(regularized_incomplete_beta(1, 1, 0.3) == doctest::Approx(0.3));
  CHECK(regularized_incomplete_beta(2, 3, 0.0) == 0.0);
  CHECK(regularized_incomplete_beta(2, 3, 1.0) == 1.0);
  // I_x(2,2) = x^2 (3 - 2x).
  const double x = 0.4;
  CHECK(regularized_incomplete_beta(2, 2, x) == doctest::Approx(x * x * (3 - 2 * x)).epsilon(1e-10));
  CHECK(f_distribution_sf(0.0, 4, 60) == 1.0);
  // F(2, d2) tail is (1 + 2f/d2)^(-d2/2).
  CHECK(f_distribution_sf(3.0, 2, 10) == doctest::Approx(std::pow(1.0 + 0.6, -5.0)).epsilon(1e-10));
}

TEST_CASE("cliques") {
  CHECK(cd_cliques({1.0, 3.0}, 1.0).empty());
  const auto all = cd_cliques({1.0, 1.5, 2.0}, 5.0);
  REQUIRE(all.size() == 1);
  CHECK(all[0].size() == 3);
}

TEST_CASE("matrix parsing") {
  std::istringstream ok("# comment\ndataset,a,b\nx,0.5,0.6\ny,0.7,0.2\n");
  const auto m = parse_accuracy_matrix(ok);
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 2);
  CHECK(m.at(1, 0) == 0.7);
  std::istringstream bad("dataset,a,b\nx,0.5\n");
  CHECK_THROWS_AS(parse_accuracy_matrix(bad), ParseError);
  std::istringstream one("dataset,a,b\nx,0.5,0.6\n");
  CHECK_THROWS(friedman_test(parse_accuracy_matrix(one)));
}

TEST_CASE("cd diagram output") {
  const auto s = friedman_test(load_accuracy_matrix(test::data_dir() / "table4.csv"));
  const auto svg = render_cd_svg(s, 1.375);
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  std::size_t bars = 0;
  for (auto pos = svg.find("class=\"clique\""); pos != std::string::npos; pos = svg.find("class=\"clique\"", pos + 1)) {
    ++bars;
  }
  CHECK(bars == 2);
  CHECK(svg == render_cd_svg(s, 1.375));
  for (const auto& c : s.classifiers) CHECK(svg.find(c) != std::string::npos);
  const auto text = render_cd_text(s, 1.375);
  CHECK(text.find("RotF") != std::string::npos);

  std::ostringstream report;
  write_rank_report(report, s, 1.375, 0.10);
  CHECK(report.str().find("cliques = 2") != std::string::npos);

  const auto none = friedman_test(matrix({"a", "b"}, {{0.9, 0.1}, {0.9, 0.1}}));
  CHECK(render_cd_svg(none, 0.5).find("class=\"clique\"") == std::string::npos);
}

TEST_CASE("all ten ensembles") {
  const auto m = load_accuracy_matrix(test::data_dir() / "cd_all.csv");
  CHECK(m.cols() == 10);
  // The first five columns ranked on their own.
  AccuracyMatrix five;
  five.datasets = m.datasets;
  five.classifiers.assign(m.classifiers.begin(), m.classifiers.begin() + 5);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < 5; ++c) five.values.push_back(m.at(r, c));
  }
  const auto s = friedman_test(five);
  const std::vector<double> expected{3.3125, 2.5, 3.125, 3.28125, 2.78125};
  for (std::size_t i = 0; i < 5; ++i) CHECK(s.mean_ranks[i] == doctest::Approx(expected[i]).epsilon(1e-12));
  CHECK(std::abs(nemenyi_cd(m.cols(), m.rows(), 0.10) - 3.1257) <= 0.001);
}
