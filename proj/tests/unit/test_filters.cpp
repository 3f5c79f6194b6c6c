#include <cmath>
#include <numeric>
#include <sstream>

#include "doctest.h"
#include "filter_oracle.hpp"
#include "rsc/filters.hpp"
#include "rsc/random.hpp"
#include "support.hpp"

using namespace rsc;

namespace {

Dataset toy(std::uint64_t seed, std::size_t n = 8, std::size_t m = 3, std::size_t classes = 3) {
  Rng rng(seed);
  std::vector<test::Row> rows;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> x(m);
    for (auto& v : x) v = rng.uniform01();
    const auto c = i < classes ? i : rng.uniform_index(classes);
    rows.push_back({x, std::string(1, static_cast<char>('A' + c))});
  }
  return test::make_dataset(rows);
}

Dataset separator(std::size_t n) {
  std::vector<test::Row> rows;
  for (std::size_t i = 0; i < n; ++i) {
    const bool a = i < n / 2;
    rows.push_back({{a ? 0.05 : 0.95, 0.5}, a ? "A" : "B"});
  }
  return test::make_dataset(rows);
}

}  // namespace

TEST_CASE("chi2 and infogain against the oracle") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto d = toy(seed);
    for (std::size_t bins : {2u, 3u, 10u}) {
      const auto c = chi2_scores(d, bins);
      const auto g = infogain_scores(d, bins);
      for (std::size_t a = 0; a < 3; ++a) {
        CHECK(std::abs(c.scores[a] - test::oracle_chi2(d, a, bins)) < 1e-12);
        CHECK(std::abs(g.scores[a] - test::oracle_infogain(d, a, bins)) < 1e-12);
      }
      const auto top = select_top_k(c, 1);
      std::size_t best = 0;
      for (std::size_t a = 1; a < 3; ++a) {
        if (test::oracle_chi2(d, a, bins) > test::oracle_chi2(d, best, bins)) best = a;
      }
      CHECK(top[0] == best);
    }
  }
}

TEST_CASE("separator and constant attributes") {
  const auto d = separator(20);
  const auto c = chi2_scores(d, 10);
  CHECK(c.scores[0] == doctest::Approx(20.0));
  CHECK(c.scores[1] == 0.0);
  const auto g = infogain_scores(d, 10);
  CHECK(g.scores[0] == doctest::Approx(1.0));
  CHECK(g.scores[1] == 0.0);
  const auto r = relief_scores(d, 20, 1);
  CHECK(r.scores[1] == 0.0);
  CHECK_THROWS(chi2_scores(Dataset({"a"}, {"A"}), 10));
}

TEST_CASE("relief hand example") {
  const auto d = test::make_dataset({{{0.0}, "A"}, {{0.1}, "A"}, {{0.9}, "B"}, {{1.0}, "B"}});
  // Picks 0 and 1.0 reach their nearest miss at 0.9; picks 0.1 and 0.9 at 0.8.
  // Hit distance is 0.1 each time: (0.8 + 0.7 + 0.7 + 0.8) / 4.
  const auto r = relief_scores(d, 4, 0);
  CHECK(r.scores[0] == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(relief_scores(d, 100, 3).scores[0] == r.scores[0]);
}

TEST_CASE("relief errors") {
  const auto lonely = test::make_dataset({{{0.0}, "A"}, {{0.1}, "A"}, {{0.9}, "B"}});
  try {
    relief_scores(lonely, 3, 0);
    FAIL("expected an error");
  } catch (const std::exception& e) {
    CHECK(std::string(e.what()).find("B") != std::string::npos);
  }
  const auto single = test::make_dataset({{{0.0}, "A"}, {{0.1}, "A"}});
  CHECK_THROWS(relief_scores(single, 2, 0));
}

TEST_CASE("relief on noise averages near zero") {
  double sum = 0.0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng(seed + 1000);
    std::vector<test::Row> rows;
    for (int i = 0; i < 200; ++i) {
      const bool a = rng.uniform01() < 0.5;
      rows.push_back({{rng.uniform01(), a ? 0.3 * rng.uniform01() : 0.7 + 0.3 * rng.uniform01()}, a ? "A" : "B"});
    }
    const auto r = relief_scores(test::make_dataset(rows), 100, seed);
    sum += r.scores[0];
    for (double s : r.scores) CHECK((s >= -1.0 && s <= 1.0));
  }
  CHECK(std::abs(sum / 30.0) <= 0.05);
}

TEST_CASE("filter invariances") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto d = toy(seed, 30, 4, 3);
    const auto c = chi2_scores(d, 5);
    const auto g = infogain_scores(d, 5);
    const auto r = relief_scores(d, 30, 0);

    std::vector<std::size_t> perm(d.size());
    std::iota(perm.begin(), perm.end(), 0);
    Rng rng(seed);
    rng.shuffle(perm);
    const auto p = d.subset(perm);
    const auto pr = relief_scores(p, 30, 0);
    for (std::size_t a = 0; a < 4; ++a) {
      CHECK(chi2_scores(p, 5).scores[a] == doctest::Approx(c.scores[a]).epsilon(1e-12));
      CHECK(infogain_scores(p, 5).scores[a] == doctest::Approx(g.scores[a]).epsilon(1e-12));
      CHECK(pr.scores[a] == doctest::Approx(r.scores[a]).epsilon(1e-12));
    }

    // Relabel classes A->Z, B->Y, C->X.
    std::vector<test::Row> rows;
    for (std::size_t i = 0; i < d.size(); ++i) {
      const auto row = d.row(i);
      rows.push_back({{row.begin(), row.end()}, std::string(1, static_cast<char>('Z' - d.label(i)))});
    }
    const auto relabeled = test::make_dataset(rows);
    std::vector<std::size_t> twice;
    for (std::size_t i = 0; i < d.size(); ++i) {
      twice.push_back(i);
      twice.push_back(i);
    }
    const auto doubled = d.subset(twice);
    for (std::size_t a = 0; a < 4; ++a) {
      CHECK(chi2_scores(relabeled, 5).scores[a] == doctest::Approx(c.scores[a]).epsilon(1e-12));
      CHECK(infogain_scores(relabeled, 5).scores[a] == doctest::Approx(g.scores[a]).epsilon(1e-12));
      CHECK(chi2_scores(doubled, 5).scores[a] == doctest::Approx(2.0 * c.scores[a]).epsilon(1e-12));
      CHECK(infogain_scores(doubled, 5).scores[a] == doctest::Approx(g.scores[a]).epsilon(1e-12));
    }
  }
}

TEST_CASE("top k") {
  AttributeScores s;
  s.scores = {0.5, 0.9, 0.5};
  CHECK(select_top_k(s, 2) == std::vector<std::size_t>{1, 0});
  CHECK(select_top_k(s, 3) == std::vector<std::size_t>{1, 0, 2});
  CHECK_THROWS(select_top_k(s, 0));
  CHECK_THROWS(select_top_k(s, 4));
  Rng rng(3);
  s.scores.clear();
  for (int i = 0; i < 12; ++i) s.scores.push_back(static_cast<double>(rng.uniform_index(4)));
  for (std::size_t k1 = 1; k1 < 12; ++k1) {
    const auto a = select_top_k(s, k1);
    const auto b = select_top_k(s, k1 + 1);
    CHECK(std::equal(a.begin(), a.end(), b.begin()));
  }
}

TEST_CASE("scores csv") {
  AttributeScores s;
  s.scores = {0.5, 0.9};
  std::ostringstream out;
  write_scores(out, s, {"x", "y"});
  CHECK(out.str() == "attribute,score,rank\nx,0.5,2\ny,0.9,1\n");
}
