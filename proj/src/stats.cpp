#include "rsc/stats.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "rsc/dataset.hpp"
#include "rsc/error.hpp"

namespace rsc {

void AccuracyMatrix::validate() const {
  if (datasets.size() < 2) throw std::invalid_argument("accuracy matrix needs at least 2 datasets");
  if (classifiers.size() < 2) throw std::invalid_argument("accuracy matrix needs at least 2 classifiers");
  if (values.size() != datasets.size() * classifiers.size()) {
    throw std::invalid_argument("accuracy matrix is not rectangular");
  }
}

namespace {

std::string trimmed(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

std::vector<std::string> csv_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trimmed(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

AccuracyMatrix parse_accuracy_matrix(std::istream& in) {
  AccuracyMatrix m;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trimmed(line).empty() || line.front() == '#') continue;
    auto fields = csv_fields(line);
    if (!have_header) {
      if (fields.size() < 3) throw ParseError("header needs a name column and at least 2 classifiers", line_no);
      m.classifiers.assign(fields.begin() + 1, fields.end());
      have_header = true;
      continue;
    }
    if (fields.size() != m.classifiers.size() + 1) {
      throw ParseError("expected " + std::to_string(m.classifiers.size() + 1) + " fields, found " +
                           std::to_string(fields.size()),
                       line_no);
    }
    m.datasets.push_back(fields[0]);
    for (std::size_t c = 1; c < fields.size(); ++c) {
      double v = 0.0;
      const auto& f = fields[c];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc{} || ptr != f.data() + f.size() || f.empty() || !std::isfinite(v)) {
        throw ParseError("non-numeric accuracy '" + f + "'", line_no);
      }
      m.values.push_back(v);
    }
  }
  if (!have_header) throw ParseError("empty accuracy matrix");
  try {
    m.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
  return m;
}

AccuracyMatrix load_accuracy_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open accuracy matrix '" + path.string() + "'");
  return parse_accuracy_matrix(in);
}

std::vector<double> descending_midranks(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    // Positions i..j-1 share ranks i+1..j.
    const double mid = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t t = i; t < j; ++t) ranks[order[t]] = mid;
    i = j;
  }
  return ranks;
}

RankSummary friedman_test(const AccuracyMatrix& m) {
  m.validate();
  const auto n = m.rows();
  const auto k = m.cols();
  RankSummary s;
  s.classifiers = m.classifiers;
  s.datasets = n;
  s.mean_ranks.assign(k, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row(m.values.begin() + static_cast<std::ptrdiff_t>(i * k),
                            m.values.begin() + static_cast<std::ptrdiff_t>((i + 1) * k));
    auto r = descending_midranks(row);
    for (std::size_t j = 0; j < k; ++j) s.mean_ranks[j] += r[j];
    s.ranks.push_back(std::move(r));
  }
  for (auto& r : s.mean_ranks) r /= static_cast<double>(n);

  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  double sum_sq = 0.0;
  for (double r : s.mean_ranks) sum_sq += r * r;
  s.friedman_chi2 = 12.0 * nd / (kd * (kd + 1.0)) * (sum_sq - kd * (kd + 1.0) * (kd + 1.0) / 4.0);
  if (std::abs(s.friedman_chi2) < 1e-12) s.friedman_chi2 = 0.0;
  s.df1 = k - 1;
  s.df2 = (k - 1) * (n - 1);
  const double denom = nd * (kd - 1.0) - s.friedman_chi2;
  if (s.friedman_chi2 == 0.0) {
    s.iman_davenport_f = 0.0;
    s.p_value = 1.0;
  } else if (denom <= 0.0) {
    // Every dataset ranks the classifiers identically.
    s.iman_davenport_f = std::numeric_limits<double>::infinity();
    s.p_value = 0.0;
  } else {
    s.iman_davenport_f = (nd - 1.0) * s.friedman_chi2 / denom;
    s.p_value = f_distribution_sf(s.iman_davenport_f, static_cast<double>(s.df1),
                                  static_cast<double>(s.df2));
  }
  return s;
}

namespace {

// Two-tailed Nemenyi constants (studentized range quantile / sqrt 2), k = 2..10.
constexpr std::array<double, 9> kQ05 = {1.960, 2.343, 2.569, 2.728, 2.850, 2.949, 3.031, 3.102, 3.164};
constexpr std::array<double, 9> kQ10 = {1.645, 2.052, 2.291, 2.459, 2.589, 2.693, 2.780, 2.855, 2.920};

}  // namespace

double nemenyi_q(std::size_t k, double level) {
  if (k < 2 || k > 10) {
    throw std::out_of_range("no Nemenyi constant for k=" + std::to_string(k) +
                            "; the embedded table covers k = 2..10 and must be extended");
  }
  if (std::abs(level - 0.05) < 1e-12) return kQ05[k - 2];
  if (std::abs(level - 0.10) < 1e-12) return kQ10[k - 2];
  throw std::invalid_argument("significance level must be 0.05 or 0.10");
}

double nemenyi_cd(std::size_t k, std::size_t n, double level) {
  if (n < 1) throw std::invalid_argument("nemenyi_cd: n must be positive");
  const double kd = static_cast<double>(k);
  return nemenyi_q(k, level) * std::sqrt(kd * (kd + 1.0) / (6.0 * static_cast<double>(n)));
}

double bonferroni_dunn_z(double mean_rank_i, double mean_rank_j, std::size_t k, std::size_t n) {
  const double kd = static_cast<double>(k);
  return (mean_rank_i - mean_rank_j) / std::sqrt(kd * (kd + 1.0) / (6.0 * static_cast<double>(n)));
}

bool bonferroni_dunn_significant(double z, std::size_t k, double level) {
  if (k < 2) throw std::invalid_argument("bonferroni_dunn_significant: k must be at least 2");
  const double two_sided_p = std::erfc(std::abs(z) / std::sqrt(2.0));
  return two_sided_p < level / static_cast<double>(k - 1);
}

namespace {

/// Continued fraction for the incomplete beta, modified Lentz.
double beta_continued_fraction(double a, double b, double x) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-10;
  constexpr int kMaxIter = 10000;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double md = m;
    const double m2 = 2.0 * md;
    double aa = md * (b - md) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + md) * (qab + md) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) return h;
  }
  throw std::runtime_error("incomplete beta continued fraction did not converge");
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0 && b > 0.0)) throw std::invalid_argument("incomplete beta: a and b must be positive");
  if (x < 0.0 || x > 1.0) throw std::invalid_argument("incomplete beta: x outside [0,1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                           b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double f_distribution_sf(double f, double d1, double d2) {
  if (f <= 0.0) return 1.0;
  if (std::isinf(f)) return 0.0;
  return regularized_incomplete_beta(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * f));
}

std::vector<std::vector<std::size_t>> cd_cliques(const std::vector<double>& mean_ranks, double cd) {
  std::vector<std::size_t> order(mean_ranks.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return mean_ranks[a] < mean_ranks[b]; });
  std::vector<std::vector<std::size_t>> cliques;
  std::size_t last_end = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    std::size_t j = i;
    while (j + 1 < order.size() && mean_ranks[order[j + 1]] - mean_ranks[order[i]] < cd) ++j;
    if (j > i && (cliques.empty() || j > last_end)) {
      cliques.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(i),
                           order.begin() + static_cast<std::ptrdiff_t>(j + 1));
      last_end = j;
    }
  }
  return cliques;
}

void write_rank_report(std::ostream& out, const RankSummary& s, double cd, double level) {
  out << "classifier,mean_rank\n";
  for (std::size_t j = 0; j < s.classifiers.size(); ++j) {
    out << s.classifiers[j] << ',' << format_double(s.mean_ranks[j]) << '\n';
  }
  char buf[256];
  std::snprintf(buf, sizeof buf, "friedman_chi2 = %.6g\niman_davenport_F = %.6g (df %zu, %zu)\np_value = %.6g\n",
                s.friedman_chi2, s.iman_davenport_f, s.df1, s.df2, s.p_value);
  out << buf;
  std::snprintf(buf, sizeof buf, "critical_difference = %.4f (level %.2f, k = %zu, n = %zu)\n", cd, level,
                s.classifiers.size(), s.datasets);
  out << buf;
  const auto cliques = cd_cliques(s.mean_ranks, cd);
  out << "cliques = " << cliques.size() << '\n';
  for (const auto& c : cliques) {
    out << "clique:";
    for (auto j : c) out << ' ' << s.classifiers[j];
    out << '\n';
  }
}

}  // namespace rsc
