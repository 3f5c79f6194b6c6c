#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "rsc/error.hpp"
#include "rsc/evaluation.hpp"
#include "rsc/parallel.hpp"
#include "rsc/random.hpp"

namespace rsc {

BVInstanceStats bv_point_stats(std::span<const std::size_t> predictions, std::size_t truth) {
  if (predictions.empty()) throw std::invalid_argument("bv_point_stats: no predictions");
  std::vector<std::size_t> sorted(predictions.begin(), predictions.end());
  std::sort(sorted.begin(), sorted.end());

  // Mode; scanning ascending with a strict comparison keeps the lowest label.
  std::size_t main = sorted.front();
  std::size_t best_run = 0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    if (j - i > best_run) {
      best_run = j - i;
      main = sorted[i];
    }
    i = j;
  }

  const double s = static_cast<double>(predictions.size());
  std::size_t off_main = 0;
  std::size_t wrong = 0;
  for (auto p : predictions) {
    if (p != main) ++off_main;
    if (p != truth) ++wrong;
  }
  BVInstanceStats st;
  st.main_prediction = main;
  st.bias = main != truth;
  st.variance = static_cast<double>(off_main) / s;
  st.c2 = st.bias ? -1 : 1;
  st.per_set_loss = static_cast<double>(wrong) / s;
  return st;
}

BVReport aggregate_bv(std::vector<BVInstanceStats> points, std::size_t replicates) {
  if (points.empty()) throw std::invalid_argument("aggregate_bv: no points");
  BVReport r;
  r.replicates = replicates;
  const double n = static_cast<double>(points.size());
  for (const auto& p : points) {
    r.average_error += p.per_set_loss;
    if (p.bias) {
      r.bias += 1.0;
      r.biased_variance += p.variance;
    } else {
      r.unbiased_variance += p.variance;
    }
  }
  r.average_error /= n;
  r.bias /= n;
  r.unbiased_variance /= n;
  r.biased_variance /= n;
  r.net_variance = r.unbiased_variance - r.biased_variance;
  r.points = std::move(points);
  return r;
}

BVReport bv_decompose(const Dataset& d, const Learner& learner, const BVOptions& options,
                      std::uint64_t seed) {
  if (options.replicates < 2) throw std::invalid_argument("bv_decompose: need at least 2 replicates");
  if (options.boot_size < 1) throw std::invalid_argument("bv_decompose: boot size must be positive");
  auto [test_idx, pool_idx] = split_indices(d, options.test_fraction, derive_seed(seed, "bv-split"));
  const Dataset test = d.subset(test_idx);
  const Dataset pool = d.subset(pool_idx);

  std::vector<std::vector<std::size_t>> predictions(options.replicates);
  parallel_for(options.replicates, options.threads, [&](std::size_t r) {
    const auto sample = bootstrap(pool, options.boot_size, derive_seed(seed, "bootstrap", r));
    auto p = learner(sample, test, derive_seed(seed, "replicate", r));
    if (p.size() != test.size()) throw InvariantError("learner returned the wrong number of predictions");
    predictions[r] = std::move(p);
  });

  std::vector<BVInstanceStats> points(test.size());
  std::vector<std::size_t> column(options.replicates);
  for (std::size_t i = 0; i < test.size(); ++i) {
    for (std::size_t r = 0; r < options.replicates; ++r) column[r] = predictions[r][i];
    points[i] = bv_point_stats(column, test.label(i));
  }
  return aggregate_bv(std::move(points), options.replicates);
}

Learner make_learner(const ModelSpec& spec) {
  return [spec](const Dataset& train, const Dataset& test, std::uint64_t seed) {
    const auto model = fit(spec, train, seed);
    const auto none = test.class_domain().size();
    std::vector<std::size_t> map(model.class_labels.size());
    for (std::size_t c = 0; c < map.size(); ++c) {
      map[c] = test.class_index(model.class_labels[c]).value_or(none);
    }
    std::vector<std::size_t> out(test.size(), none);
    try {
      for (std::size_t i = 0; i < test.size(); ++i) out[i] = map[predict(model, test.row(i), i).label];
    } catch (const UnusableModelError&) {
      std::fill(out.begin(), out.end(), none);
    }
    return out;
  };
}

BVReport bv_decompose(const Dataset& d, const ModelSpec& spec, const BVOptions& options,
                      std::uint64_t seed) {
  spec.validate();
  return bv_decompose(d, make_learner(spec), options, seed);
}

std::string percent_difference(double first, double second) {
  if (first == second) return "+0.00";
  if (first == 0.0) return second > 0.0 ? "+inf" : "-inf";
  const double pct = (second - first) / first * 100.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%+.2f", pct);
  return buf;
}

void write_bv_reports(std::ostream& out, const std::vector<std::pair<std::string, BVReport>>& reports) {
  out << "spec,avg_error,bias,net_var,var_unbiased,var_biased\n";
  auto fields = [](const BVReport& r) {
    return std::array<double, 5>{r.average_error, r.bias, r.net_variance, r.unbiased_variance,
                                 r.biased_variance};
  };
  for (const auto& [name, r] : reports) {
    out << name;
    for (double v : fields(r)) out << ',' << format_double(v);
    out << '\n';
  }
  for (std::size_t i = 0; i < reports.size(); ++i) {
    for (std::size_t j = i + 1; j < reports.size(); ++j) {
      out << "diff(" << reports[i].first << " vs " << reports[j].first << ")%";
      const auto a = fields(reports[i].second);
      const auto b = fields(reports[j].second);
      for (std::size_t f = 0; f < a.size(); ++f) out << ',' << percent_difference(a[f], b[f]);
      out << '\n';
    }
  }
}

}  // namespace rsc
