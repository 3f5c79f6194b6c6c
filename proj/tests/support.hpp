#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "rsc/dataset.hpp"
#include "rsc/random.hpp"

namespace rsc::test {

inline std::filesystem::path data_dir() { return RSC_TEST_DATA_DIR; }

struct Row {
  std::vector<double> x;
  std::string label;
};

/// Dataset with attributes a0..a{m-1}; the domain is the sorted label set.
inline Dataset make_dataset(const std::vector<Row>& rows) {
  std::vector<std::string> domain;
  for (const auto& r : rows) domain.push_back(r.label);
  std::sort(domain.begin(), domain.end());
  domain.erase(std::unique(domain.begin(), domain.end()), domain.end());
  std::vector<std::string> attrs;
  for (std::size_t a = 0; a < rows.front().x.size(); ++a) attrs.push_back("a" + std::to_string(a));
  Dataset d(attrs, domain);
  for (const auto& r : rows) {
    const auto idx = static_cast<std::size_t>(std::lower_bound(domain.begin(), domain.end(), r.label) - domain.begin());
    d.add(r.x, idx);
  }
  return d;
}

/// Random points in [0,1]^m with no two identical points carrying different
/// labels. Every class listed in the domain is used at least once.
inline Dataset random_dataset(std::uint64_t seed, std::size_t n, std::size_t m, std::size_t classes) {
  Rng rng(seed);
  std::vector<std::string> domain;
  for (std::size_t c = 0; c < classes; ++c) domain.push_back(std::string(1, static_cast<char>('A' + c)));
  std::vector<std::string> attrs;
  for (std::size_t a = 0; a < m; ++a) attrs.push_back("a" + std::to_string(a));
  Dataset d(attrs, domain);
  std::vector<double> x(m);
  for (std::size_t i = 0; i < n; ++i) {
    // Coarse grid values so exact duplicates occur; duplicates share a label.
    std::optional<std::size_t> seen;
    do {
      for (auto& v : x) v = static_cast<double>(rng.uniform_index(6)) / 5.0;
      seen.reset();
      for (std::size_t j = 0; j < d.size() && !seen; ++j) {
        const auto r = d.row(j);
        if (std::equal(r.begin(), r.end(), x.begin())) seen = d.label(j);
      }
    } while (i < classes && seen);
    d.add(x, seen ? *seen : (i < classes ? i : rng.uniform_index(classes)));
  }
  return d;
}

}  // namespace rsc::test
