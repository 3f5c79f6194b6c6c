#include "rsc/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <mutex>
#include <numeric>
#include <set>
#include <stdexcept>

#include "rsc/error.hpp"
#include "rsc/log.hpp"
#include "rsc/parallel.hpp"
#include "rsc/random.hpp"

namespace rsc {

namespace {
std::atomic<bool> g_warnings{true};
std::mutex g_warn_mutex;
}  // namespace

void warn(std::string_view msg) {
  if (!g_warnings) return;
  std::lock_guard lock(g_warn_mutex);
  std::cerr << "warning: " << msg << '\n';
}

void set_warnings_enabled(bool enabled) { g_warnings = enabled; }

std::string_view to_string(ModelKind k) {
  switch (k) {
    case ModelKind::rsc:
      return "rsc";
    case ModelKind::arse:
      return "arse";
    case ModelKind::abrse:
      return "abrse";
    case ModelKind::arsse:
      return "arsse";
    case ModelKind::majority:
      return "majority";
  }
  return "?";
}

ModelKind parse_model_kind(std::string_view s) {
  if (s == "rsc") return ModelKind::rsc;
  if (s == "arse") return ModelKind::arse;
  if (s == "abrse") return ModelKind::abrse;
  if (s == "arsse") return ModelKind::arsse;
  if (s == "majority") return ModelKind::majority;
  throw std::invalid_argument("unknown model scheme '" + std::string(s) + "'");
}

void ModelSpec::validate() const {
  if (alpha < 0) throw std::invalid_argument("alpha must be non-negative");
  if ((kind == ModelKind::arsse) != kappa.has_value()) {
    throw std::invalid_argument("kappa must be given exactly when the scheme is arsse");
  }
  if (kappa && *kappa < 1) throw std::invalid_argument("kappa must be at least 1");
  if (members < 1) throw std::invalid_argument("L must be at least 1");
  if (filter) {
    if (filter->k < 1) throw std::invalid_argument("filter k must be at least 1");
    if (filter->bins < 2) throw std::invalid_argument("filter bins must be at least 2");
  }
}

namespace {

AttributeScores score_attributes(const FilterSpec& f, const Dataset& normalized, std::uint64_t seed) {
  switch (f.method) {
    case FilterMethod::chi2:
      return chi2_scores(normalized, f.bins);
    case FilterMethod::infogain:
      return infogain_scores(normalized, f.bins);
    case FilterMethod::relief:
      return relief_scores(normalized, std::min(f.relief_samples, normalized.size()), seed);
  }
  throw std::logic_error("unhandled filter method");
}

void attach(SphereCoverModel& m, const std::vector<std::size_t>& selected, const Normalization& norm) {
  if (!selected.empty()) {
    for (auto& a : m.attribute_subset) a = selected[a];
  }
  m.normalization = norm;
}

}  // namespace

FittedModel fit(const ModelSpec& spec, const Dataset& train, std::uint64_t seed, std::size_t threads) {
  spec.validate();
  if (train.empty()) throw std::invalid_argument("fit: empty training set");
  FittedModel fm;
  fm.spec = spec;
  fm.attributes = train.attributes();
  fm.class_labels = train.class_domain();

  if (spec.kind == ModelKind::majority) {
    const auto counts = train.class_counts();
    fm.model = MajorityModel{
        static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin())};
    return fm;
  }

  auto [scaled, norm] = normalize(train);
  Dataset working = std::move(scaled);
  if (spec.filter) {
    if (spec.filter->k > working.attribute_count()) {
      throw std::invalid_argument("filter k exceeds the attribute count");
    }
    const auto scores = score_attributes(*spec.filter, working, derive_seed(seed, "filter"));
    fm.selected_attributes = select_top_k(scores, spec.filter->k);
    working = working.project(fm.selected_attributes);
  }

  switch (spec.kind) {
    case ModelKind::rsc: {
      auto m = build_rsc(working, spec.alpha, seed);
      attach(m, fm.selected_attributes, norm);
      fm.model = std::move(m);
      break;
    }
    case ModelKind::arse:
    case ModelKind::abrse:
    case ModelKind::arsse: {
      EnsembleModel e;
      if (spec.kind == ModelKind::arse) {
        e = build_arse(working, spec.alpha, spec.members, seed, threads);
      } else if (spec.kind == ModelKind::abrse) {
        e = build_abrse(working, spec.alpha, spec.members, seed);
      } else {
        e = build_arsse(working, spec.alpha, *spec.kappa, spec.members, seed, threads);
      }
      for (auto& m : e.members) attach(m, fm.selected_attributes, norm);
      fm.model = std::move(e);
      break;
    }
    case ModelKind::majority:
      break;
  }
  return fm;
}

Prediction predict(const FittedModel& m, std::span<const double> x_raw, std::size_t query) {
  if (x_raw.size() != m.attributes.size()) {
    throw SchemaError("instance has " + std::to_string(x_raw.size()) + " attributes, model expects " +
                      std::to_string(m.attributes.size()));
  }
  if (const auto* single = std::get_if<SphereCoverModel>(&m.model)) {
    return {predict_raw(*single, x_raw), std::nullopt};
  }
  if (const auto* ensemble = std::get_if<EnsembleModel>(&m.model)) {
    auto t = vote_raw(*ensemble, x_raw, tie_seed(ensemble->master_seed, query));
    const auto winner = t.winner;
    return {winner, std::move(t)};
  }
  return {std::get<MajorityModel>(m.model).label, std::nullopt};
}

namespace {

/// Maps model label indices to `d`'s class domain; unknown labels map to a
/// value past the end of the domain.
std::vector<std::size_t> label_map(const std::vector<std::string>& model_labels, const Dataset& d) {
  std::vector<std::size_t> out(model_labels.size());
  for (std::size_t c = 0; c < model_labels.size(); ++c) {
    out[c] = d.class_index(model_labels[c]).value_or(d.class_domain().size());
  }
  return out;
}

void check_schema(const Dataset& train, const Dataset& test) {
  if (train.attributes() != test.attributes()) {
    throw SchemaError("train and test attribute schemas differ");
  }
}

}  // namespace

double accuracy(const FittedModel& m, const Dataset& test) {
  if (test.empty()) throw std::invalid_argument("accuracy: empty test set");
  const auto map = label_map(m.class_labels, test);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    if (map[predict(m, test.row(i), i).label] == test.label(i)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(test.size());
}

double evaluate_accuracy(const ModelSpec& spec, const Dataset& train, const Dataset& test,
                         std::uint64_t seed, std::size_t threads) {
  check_schema(train, test);
  if (test.empty()) throw std::invalid_argument("evaluate_accuracy: empty test set");
  const auto model = fit(spec, train, seed, threads);
  try {
    return accuracy(model, test);
  } catch (const UnusableModelError&) {
    warn("model with alpha=" + std::to_string(spec.alpha) +
         " retained no spheres; scoring all predictions as wrong");
    return 0.0;
  }
}

double cross_validate(const Dataset& d, const ModelSpec& spec, std::size_t k, std::uint64_t seed,
                      std::size_t threads) {
  const auto folds = cv_folds(d, k, derive_seed(seed, "folds"));
  double total = 0.0;
  for (std::size_t f = 0; f < k; ++f) {
    const auto train = d.subset(folds.complement_indices(f));
    const auto test = d.subset(folds.fold_indices(f));
    total += evaluate_accuracy(spec, train, test, derive_seed(seed, "fold", f), threads);
  }
  return total / static_cast<double>(k);
}

int select_alpha(const Dataset& train, std::span<const int> alpha_grid, std::size_t cv_k,
                 std::uint64_t seed, const std::optional<FilterSpec>& filter, std::size_t threads) {
  if (alpha_grid.empty()) throw std::invalid_argument("select_alpha: empty alpha grid");
  std::vector<int> grid(alpha_grid.begin(), alpha_grid.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  std::vector<double> scores(grid.size());
  parallel_for(grid.size(), threads, [&](std::size_t g) {
    ModelSpec spec;
    spec.kind = ModelKind::rsc;
    spec.alpha = grid[g];
    spec.filter = filter;
    scores[g] = cross_validate(train, spec, cv_k, seed);
  });
  std::size_t best = 0;
  for (std::size_t g = 1; g < grid.size(); ++g) {
    if (scores[g] > scores[best]) best = g;
  }
  return grid[best];
}

KappaAlpha select_kappa_alpha(const Dataset& train, std::span<const std::size_t> kappa_grid,
                              std::span<const int> alpha_grid, std::size_t members,
                              std::size_t cv_k, std::uint64_t seed,
                              const std::optional<FilterSpec>& filter, std::size_t threads) {
  if (kappa_grid.empty()) throw std::invalid_argument("select_kappa_alpha: empty kappa grid");
  if (alpha_grid.empty()) throw std::invalid_argument("select_kappa_alpha: empty alpha grid");
  std::vector<std::size_t> kappas(kappa_grid.begin(), kappa_grid.end());
  std::sort(kappas.begin(), kappas.end());
  kappas.erase(std::unique(kappas.begin(), kappas.end()), kappas.end());
  std::vector<int> alphas(alpha_grid.begin(), alpha_grid.end());
  std::sort(alphas.begin(), alphas.end());
  alphas.erase(std::unique(alphas.begin(), alphas.end()), alphas.end());

  if (kappas.size() == 1 && alphas.size() == 1) return {kappas.front(), alphas.front()};

  auto subsample_idx = split_indices(train, 1.0 / 3.0, derive_seed(seed, "subsample")).first;
  const Dataset sub = train.subset(subsample_idx);
  const auto k = std::min(cv_k, sub.size());

  auto score = [&](std::size_t kappa, int alpha) {
    ModelSpec spec;
    spec.kind = ModelKind::arsse;
    spec.kappa = kappa;
    spec.alpha = alpha;
    spec.members = members;
    spec.filter = filter;
    return cross_validate(sub, spec, k, seed);
  };

  KappaAlpha best{kappas.front(), alphas[(alphas.size() - 1) / 2]};
  if (kappas.size() > 1) {
    std::vector<double> scores(kappas.size());
    parallel_for(kappas.size(), threads, [&](std::size_t i) { scores[i] = score(kappas[i], best.alpha); });
    std::size_t arg = 0;
    for (std::size_t i = 1; i < kappas.size(); ++i) {
      if (scores[i] > scores[arg]) arg = i;
    }
    best.kappa = kappas[arg];
  }
  if (alphas.size() > 1) {
    std::vector<double> scores(alphas.size());
    parallel_for(alphas.size(), threads, [&](std::size_t i) { scores[i] = score(best.kappa, alphas[i]); });
    std::size_t arg = 0;
    for (std::size_t i = 1; i < alphas.size(); ++i) {
      if (scores[i] > scores[arg]) arg = i;
    }
    best.alpha = alphas[arg];
  }
  return best;
}

std::vector<int> default_alpha_grid() {
  std::vector<int> grid(31);
  std::iota(grid.begin(), grid.end(), 0);
  return grid;
}

std::vector<std::size_t> default_kappa_grid(std::size_t attribute_count, bool with_filter) {
  std::set<std::size_t> values;
  for (int f = 1; f <= 10; ++f) {
    const auto v = static_cast<std::size_t>(std::llround(static_cast<double>(attribute_count) * f / 10.0));
    values.insert(std::clamp<std::size_t>(v, 1, attribute_count));
  }
  if (with_filter) {
    for (std::size_t v : {5, 10, 20, 30, 40, 50}) {
      if (v <= attribute_count) values.insert(v);
    }
  }
  return {values.begin(), values.end()};
}

}  // namespace rsc
