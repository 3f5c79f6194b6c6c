#include <algorithm>
#include <map>
#include <set>

#include "doctest.h"
#include "rsc/ensemble.hpp"
#include "rsc/error.hpp"
#include "rsc/random.hpp"
#include "rsc/serialization.hpp"
#include "support.hpp"

using namespace rsc;

namespace {

Dataset twonorm(std::size_t n, std::uint64_t seed, std::size_t dims = 20) {
  return normalize(gen_synthetic({SyntheticFamily::twonorm, dims, seed}, n)).first;
}

std::multiset<std::size_t> as_multiset(const std::vector<std::size_t>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_CASE("arse with one member matches the member") {
  const auto d = twonorm(60, 1);
  const auto e = build_arse(d, 1, 1, 42);
  REQUIRE(e.members.size() == 1);
  const auto test = twonorm(40, 2);
  for (std::size_t i = 0; i < test.size(); ++i) {
    CHECK(vote(e, test.row(i), tie_seed(42, i)).winner == predict(e.members[0], test.row(i)));
  }
}

TEST_CASE("arse members differ and ensembles repeat") {
  const auto d = twonorm(50, 3);
  const auto e = build_arse(d, 1, 2, 5);
  CHECK(to_json(e.members[0]).dump() != to_json(e.members[1]).dump());
  CHECK(to_json(build_arse(d, 1, 4, 5, 2)).dump() == to_json(build_arse(d, 1, 4, 5, 1)).dump());
}

TEST_CASE("border cases") {
  const auto pair = test::make_dataset({{{0.0}, "A"}, {{1.0}, "B"}});
  CHECK(border_cases(build_rsc(pair, 1, 0), pair) == std::vector<std::size_t>{0, 1});
  const auto one = test::make_dataset({{{0.0}, "A"}, {{1.0}, "A"}});
  CHECK(border_cases(build_rsc(one, 1, 0), one).empty());
  // A border index beyond the current set is dropped.
  const auto m = build_rsc(pair, 1, 0);
  const auto shorter = test::make_dataset({{{0.0}, "A"}});
  CHECK(border_cases(m, shorter) == std::vector<std::size_t>{0});
}

TEST_CASE("uncovered cases") {
  std::vector<test::Row> rows;
  for (int i = 0; i < 10; ++i) rows.push_back({{i < 5 ? 0.02 * i : 0.9 + 0.02 * (i - 5)}, i < 5 ? "A" : "B"});
  const auto sep = test::make_dataset(rows);
  CHECK(uncovered_cases(build_rsc(sep, 1, 3), sep).empty());
  const auto none = build_rsc(sep, 11, 3);
  CHECK(uncovered_cases(none, sep).size() == 10);

  // Points 0..2 and 3..4 form clusters; the A point at 1.0 cannot gather 2 cases.
  const auto d = test::make_dataset(
      {{{0.0}, "A"}, {{0.05}, "A"}, {{0.1}, "A"}, {{0.5}, "B"}, {{0.55}, "B"}, {{1.0}, "A"}});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    CHECK(uncovered_cases(build_rsc(d, 2, seed), d) == std::vector<std::size_t>{5});
  }
}

TEST_CASE("misclassified cases") {
  const auto d = test::random_dataset(3, 40, 2, 2);
  CHECK(misclassified_cases(build_rsc(d, 1, 1), d).empty());
  CHECK_THROWS_AS(misclassified_cases(build_rsc(d, 41, 1), d), UnusableModelError);

  const auto x = test::make_dataset({{{0, 0}, "A"}, {{1, 1}, "A"}, {{0, 1}, "B"}, {{1, 0}, "B"}});
  const auto m = build_rsc(x, 1, 2);
  const auto shifted = test::make_dataset({{{0.5, 0.0}, "A"}, {{0.5, 1.0}, "A"}, {{0.0, 0.5}, "A"}, {{1.0, 0.5}, "A"},
                                           {{0.1, 0.1}, "A"}, {{0.9, 0.1}, "A"}});
  const auto wrong = misclassified_cases(m, shifted);
  CHECK_FALSE(wrong.empty());
  // Brute-force Rule 2 check: points on the boundary of two unit spheres are
  // uncovered and go to the sphere with the nearest surface, lowest index on ties.
  std::vector<std::size_t> expected;
  for (std::size_t i = 0; i < shifted.size(); ++i) {
    std::size_t best = 0;
    double best_key = 0.0;
    bool covered_any = false;
    for (std::size_t s = 0; s < m.spheres.size(); ++s) {
      const double dc = distance(shifted.row(i), m.spheres[s].center);
      if (dc < m.spheres[s].radius && (!covered_any || dc < best_key)) {
        covered_any = true;
        best = s;
        best_key = dc;
      }
    }
    if (!covered_any) {
      best_key = 1e300;
      for (std::size_t s = 0; s < m.spheres.size(); ++s) {
        const double e = distance(shifted.row(i), m.spheres[s].center) - m.spheres[s].radius;
        if (e < best_key) {
          best = s;
          best_key = e;
        }
      }
    }
    if (m.spheres[best].label != shifted.label(i)) expected.push_back(i);
  }
  CHECK(wrong == expected);
}

TEST_CASE("abrse with one member is a single cover") {
  const auto d = twonorm(50, 4);
  const auto e = build_abrse(d, 1, 1, 9);
  const auto single = build_rsc(d, 1, member_seed(9, 0));
  CHECK(to_json(e.members[0]).dump() == to_json(single).dump());
}

TEST_CASE("abrse single class keeps the training set") {
  const auto d = test::make_dataset({{{0.0}, "A"}, {{0.3}, "A"}, {{0.7}, "A"}});
  ResampleTrace trace;
  build_abrse(d, 1, 5, 1, &trace);
  for (const auto& t : trace.training_sets) CHECK(t == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("abrse multiset algebra on a 10-point set") {
  std::vector<test::Row> rows;
  const double xs[10] = {0.0, 0.1, 0.2, 0.45, 0.6, 0.4, 0.55, 0.8, 0.9, 1.0};
  for (int i = 0; i < 10; ++i) rows.push_back({{xs[i]}, i < 5 ? "A" : "B"});
  const auto d = test::make_dataset(rows);
  ResampleTrace trace;
  const auto e = build_abrse(d, 1, 3, 17, &trace);
  REQUIRE(trace.training_sets.size() == 3);
  for (const auto& t : trace.training_sets) CHECK(t.size() == 10);

  for (std::size_t j = 0; j + 1 < 3; ++j) {
    const auto& dj = trace.training_sets[j];
    const auto dj_set = d.subset(dj);
    const auto& m = e.members[j];
    // H as original indices: border and uncovered cases of D_j plus misclassified cases of D.
    std::set<std::size_t> h;
    for (auto p : border_cases(m, dj_set)) h.insert(dj[p]);
    for (auto p : uncovered_cases(m, dj_set)) h.insert(dj[p]);
    for (auto i : misclassified_cases(m, d)) h.insert(i);
    CHECK(trace.drawn[j].size() == trace.removed[j].size());
    for (auto i : trace.drawn[j]) CHECK(h.count(i) == 1);

    auto expected = as_multiset(dj);
    for (auto i : trace.removed[j]) {
      REQUIRE(expected.count(i) > 0);
      expected.erase(expected.find(i));
    }
    for (auto i : trace.drawn[j]) expected.insert(i);
    CHECK(as_multiset(trace.training_sets[j + 1]) == expected);
  }
}

TEST_CASE("arsse subspaces") {
  const auto d = twonorm(40, 5, 3);
  const auto full = build_arsse(d, 1, 3, 5, 2);
  for (const auto& m : full.members) CHECK(m.attribute_subset == std::vector<std::size_t>{0, 1, 2});

  const auto e = build_arsse(d, 1, 1, 300, 8, 4);
  std::map<std::size_t, int> counts;
  for (const auto& m : e.members) {
    REQUIRE(m.attribute_subset.size() == 1);
    ++counts[m.attribute_subset[0]];
  }
  for (std::size_t a = 0; a < 3; ++a) CHECK(std::abs(counts[a] - 100) <= 30);

  // Perturbing attributes outside a member's subspace leaves its vote alone.
  const auto m = e.members[0];
  std::vector<double> x{0.2, 0.4, 0.6};
  const auto before = predict(m, x);
  for (std::size_t a = 0; a < 3; ++a) {
    if (a != m.attribute_subset[0]) x[a] += 0.7;
  }
  CHECK(predict(m, x) == before);
}

TEST_CASE("vote tally") {
  const std::vector<std::size_t> clear{0, 0, 0, 1, 1};
  const auto t = tally_votes(clear, 2, 1);
  CHECK(t.winner == 0);
  CHECK_FALSE(t.tie_broken);
  CHECK(t.counts == std::vector<std::size_t>{3, 2});

  const std::vector<std::size_t> same{1, 1, 1};
  for (std::uint64_t s = 0; s < 50; ++s) CHECK(tally_votes(same, 3, s).winner == 1);

  const std::vector<std::size_t> tied{0, 0, 1, 1};
  int a = 0;
  for (std::uint64_t s = 0; s < 10000; ++s) {
    const auto r = tally_votes(tied, 2, s);
    CHECK(r.tie_broken);
    a += r.winner == 0;
  }
  CHECK(std::abs(a - 5000) <= 150);
}
