#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "rsc/dataset.hpp"

namespace rsc::test {

// Brute-force references: explicit contingency tables, no shared code with
// the library scorers.

inline std::size_t oracle_bin(double v, std::size_t bins) {
  long b = static_cast<long>(std::floor(v * static_cast<double>(bins)));
  return static_cast<std::size_t>(std::clamp<long>(b, 0, static_cast<long>(bins) - 1));
}

inline std::vector<std::vector<double>> oracle_table(const Dataset& d, std::size_t a, std::size_t bins) {
  std::vector<std::vector<double>> t(bins, std::vector<double>(d.class_domain().size(), 0.0));
  for (std::size_t i = 0; i < d.size(); ++i) t[oracle_bin(d.row(i)[a], bins)][d.label(i)] += 1.0;
  return t;
}

inline double oracle_chi2(const Dataset& d, std::size_t a, std::size_t bins) {
  const auto t = oracle_table(d, a, bins);
  const double n = static_cast<double>(d.size());
  double chi = 0.0;
  for (std::size_t b = 0; b < t.size(); ++b) {
    for (std::size_t c = 0; c < t[b].size(); ++c) {
      double row = 0.0, col = 0.0;
      for (std::size_t cc = 0; cc < t[b].size(); ++cc) row += t[b][cc];
      for (std::size_t bb = 0; bb < t.size(); ++bb) col += t[bb][c];
      const double e = row * col / n;
      if (e > 0.0) chi += (t[b][c] - e) * (t[b][c] - e) / e;
    }
  }
  return chi;
}

inline double oracle_entropy(const std::vector<double>& counts) {
  double n = 0.0;
  for (double c : counts) n += c;
  double h = 0.0;
  for (double c : counts) {
    if (c > 0.0) h -= c / n * std::log2(c / n);
  }
  return h;
}

inline double oracle_infogain(const Dataset& d, std::size_t a, std::size_t bins) {
  const auto t = oracle_table(d, a, bins);
  std::vector<double> cls(d.class_domain().size(), 0.0);
  for (std::size_t i = 0; i < d.size(); ++i) cls[d.label(i)] += 1.0;
  const double n = static_cast<double>(d.size());
  double cond = 0.0;
  for (const auto& row : t) {
    double m = 0.0;
    for (double c : row) m += c;
    if (m > 0.0) cond += m / n * oracle_entropy(row);
  }
  return oracle_entropy(cls) - cond;
}

}  // namespace rsc::test
