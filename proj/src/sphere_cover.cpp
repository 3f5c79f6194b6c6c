#include "rsc/sphere_cover.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "rsc/error.hpp"
#include "rsc/random.hpp"

namespace rsc {

double distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("distance: vectors of length " + std::to_string(a.size()) +
                                " and " + std::to_string(b.size()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

namespace {

/// Removable pool of candidate centers supporting O(1) uniform draws.
class CenterPool {
 public:
  explicit CenterPool(std::size_t n) : items_(n), position_(n) {
    std::iota(items_.begin(), items_.end(), std::size_t{0});
    std::iota(position_.begin(), position_.end(), std::size_t{0});
  }

  std::size_t draw(Rng& rng) const { return items_[rng.uniform_index(items_.size())]; }

  void remove(std::size_t i) {
    const auto p = position_[i];
    if (p == kGone) return;
    const auto last = items_.back();
    items_[p] = last;
    position_[last] = p;
    items_.pop_back();
    position_[i] = kGone;
  }

 private:
  static constexpr std::size_t kGone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> items_;
  std::vector<std::size_t> position_;
};

}  // namespace

SphereCoverModel build_rsc(const Dataset& train, int alpha, std::uint64_t seed) {
  if (train.empty()) throw std::invalid_argument("build_rsc: empty training set");
  if (alpha < 0) throw std::invalid_argument("build_rsc: alpha must be non-negative");

  SphereCoverModel model;
  model.class_labels = train.class_domain();
  model.alpha = alpha;
  model.attribute_subset.resize(train.attribute_count());
  std::iota(model.attribute_subset.begin(), model.attribute_subset.end(), std::size_t{0});

  // alpha = 0 behaves as alpha = 1: a sphere always needs at least one case.
  const auto min_members = static_cast<std::size_t>(std::max(alpha, 1));
  const auto n = train.size();
  constexpr double kInf = std::numeric_limits<double>::infinity();

  Rng rng(seed);
  std::vector<char> covered(n, 0);
  std::vector<char> uncovered(n, 0);
  std::size_t unresolved = n;  // |D \ (C u U)|
  CenterPool pool(n);          // D \ C
  std::vector<double> dist(n);

  auto mark = [&](std::vector<char>& set, std::size_t i) {
    if (!set[i]) {
      if (!covered[i] && !uncovered[i]) --unresolved;
      set[i] = 1;
    }
  };

  while (unresolved > 0) {
    const auto center = pool.draw(rng);
    mark(covered, center);
    pool.remove(center);

    const auto x = train.row(center);
    const auto y = train.label(center);
    double radius = kInf;
    std::optional<std::size_t> border;
    for (std::size_t j = 0; j < n; ++j) {
      dist[j] = distance(x, train.row(j));
      if (train.label(j) != y && dist[j] < radius) {
        radius = dist[j];
        border = j;
      }
    }

    std::vector<std::size_t> inside;
    for (std::size_t j = 0; j < n; ++j) {
      if (dist[j] < radius) inside.push_back(j);
    }

    if (inside.size() >= min_members) {
      for (auto j : inside) {
        mark(covered, j);
        pool.remove(j);
      }
      Sphere s;
      s.label = y;
      s.center.assign(x.begin(), x.end());
      s.radius = radius;
      s.members = std::move(inside);
      s.border_index = border;
      model.spheres.push_back(std::move(s));
    } else {
      for (auto j : inside) mark(uncovered, j);
    }
  }
  return model;
}

std::vector<CoverHit> covering_spheres(const SphereCoverModel& m, std::span<const double> x) {
  std::vector<CoverHit> hits;
  for (std::size_t s = 0; s < m.spheres.size(); ++s) {
    const double d = distance(x, m.spheres[s].center);
    if (d < m.spheres[s].radius) hits.push_back({s, d});
  }
  return hits;
}

double edge_distance(const Sphere& s, std::span<const double> x) {
  if (s.unbounded()) return -std::numeric_limits<double>::infinity();
  return distance(x, s.center) - s.radius;
}

std::size_t classify(const SphereCoverModel& m, std::span<const double> x) {
  if (m.spheres.empty()) throw UnusableModelError("model retained no spheres");
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::size_t best_covering = m.spheres.size();
  double best_center = kInf;
  std::size_t best_edge_sphere = 0;
  double best_edge = kInf;
  for (std::size_t s = 0; s < m.spheres.size(); ++s) {
    const auto& sphere = m.spheres[s];
    const double d = distance(x, sphere.center);
    if (d < sphere.radius) {
      if (best_covering == m.spheres.size() || d < best_center) {
        best_covering = s;
        best_center = d;
      }
    } else if (best_covering == m.spheres.size()) {
      const double edge = d - sphere.radius;
      if (edge < best_edge) {
        best_edge = edge;
        best_edge_sphere = s;
      }
    }
  }
  if (best_covering != m.spheres.size()) return m.spheres[best_covering].label;
  return m.spheres[best_edge_sphere].label;
}

std::size_t predict(const SphereCoverModel& m, std::span<const double> x_full) {
  if (m.attribute_subset.size() == x_full.size()) {
    bool identity = true;
    for (std::size_t a = 0; a < x_full.size() && identity; ++a) identity = m.attribute_subset[a] == a;
    if (identity) return classify(m, x_full);
  }
  for (auto a : m.attribute_subset) {
    if (a >= x_full.size()) throw SchemaError("instance is narrower than the model's attributes");
  }
  const auto projected = project_row(x_full, m.attribute_subset);
  return classify(m, projected);
}

std::size_t predict_raw(const SphereCoverModel& m, std::span<const double> x_raw) {
  if (m.normalization.empty()) return predict(m, x_raw);
  const auto scaled = m.normalization.apply(x_raw);
  return predict(m, scaled);
}

void verify_cover(const SphereCoverModel& m, const Dataset& projected_train) {
  const auto min_members = static_cast<std::size_t>(std::max(m.alpha, 1));
  for (std::size_t s = 0; s < m.spheres.size(); ++s) {
    const auto& sphere = m.spheres[s];
    if (sphere.members.size() < min_members) {
      throw InvariantError("sphere " + std::to_string(s) + " has fewer than alpha members");
    }
    for (std::size_t i = 0; i < projected_train.size(); ++i) {
      if (projected_train.label(i) == sphere.label) continue;
      if (distance(projected_train.row(i), sphere.center) < sphere.radius) {
        throw InvariantError("sphere " + std::to_string(s) + " contains other-class case " +
                             std::to_string(i));
      }
    }
    if (sphere.border_index && projected_train.label(*sphere.border_index) == sphere.label) {
      throw InvariantError("border case of sphere " + std::to_string(s) + " shares its class");
    }
  }
}

}  // namespace rsc
