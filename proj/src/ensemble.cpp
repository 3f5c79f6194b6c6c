#include "rsc/ensemble.hpp"

#include <algorithm>
#include <stdexcept>

#include "rsc/error.hpp"
#include "rsc/parallel.hpp"
#include "rsc/random.hpp"

namespace rsc {

std::string_view to_string(EnsembleScheme s) {
  switch (s) {
    case EnsembleScheme::arse:
      return "arse";
    case EnsembleScheme::abrse:
      return "abrse";
    case EnsembleScheme::arsse:
      return "arsse";
  }
  return "?";
}

EnsembleScheme parse_ensemble_scheme(std::string_view s) {
  if (s == "arse") return EnsembleScheme::arse;
  if (s == "abrse") return EnsembleScheme::abrse;
  if (s == "arsse") return EnsembleScheme::arsse;
  throw std::invalid_argument("unknown ensemble scheme '" + std::string(s) + "'");
}

std::uint64_t member_seed(std::uint64_t master, std::size_t member) {
  return derive_seed(master, "member", member);
}

std::uint64_t tie_seed(std::uint64_t master, std::size_t query) {
  return derive_seed(master, "tie", query);
}

namespace {

void check_common(const Dataset& train, std::size_t members) {
  if (train.empty()) throw std::invalid_argument("ensemble: empty training set");
  if (members < 1) throw std::invalid_argument("ensemble: L must be at least 1");
}

EnsembleModel make_envelope(EnsembleScheme scheme, const Dataset& train, int alpha,
                            std::size_t members, std::uint64_t seed) {
  EnsembleModel e;
  e.scheme = scheme;
  e.size = members;
  e.alpha = alpha;
  e.master_seed = seed;
  e.class_labels = train.class_domain();
  e.members.resize(members);
  return e;
}

}  // namespace

EnsembleModel build_arse(const Dataset& train, int alpha, std::size_t members, std::uint64_t seed,
                         std::size_t threads) {
  check_common(train, members);
  auto e = make_envelope(EnsembleScheme::arse, train, alpha, members, seed);
  parallel_for(members, threads, [&](std::size_t j) {
    e.members[j] = build_rsc(train, alpha, member_seed(seed, j));
  });
  return e;
}

std::vector<std::size_t> border_cases(const SphereCoverModel& m, const Dataset& d) {
  std::vector<std::size_t> out;
  for (const auto& s : m.spheres) {
    if (s.border_index && *s.border_index < d.size()) out.push_back(*s.border_index);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::size_t> uncovered_cases(const SphereCoverModel& m, const Dataset& d) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto x = project_row(d.row(i), m.attribute_subset);
    if (covering_spheres(m, x).empty()) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> misclassified_cases(const SphereCoverModel& m, const Dataset& d) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto predicted = predict(m, d.row(i));
    if (m.class_labels[predicted] != d.label_name(i)) out.push_back(i);
  }
  return out;
}

EnsembleModel build_abrse(const Dataset& train, int alpha, std::size_t members, std::uint64_t seed,
                          ResampleTrace* trace) {
  check_common(train, members);
  auto e = make_envelope(EnsembleScheme::abrse, train, alpha, members, seed);

  // Current training multiset as indices into `train`.
  std::vector<std::size_t> current(train.size());
  for (std::size_t i = 0; i < current.size(); ++i) current[i] = i;

  for (std::size_t j = 0; j < members; ++j) {
    const Dataset dj = train.subset(current);
    e.members[j] = build_rsc(dj, alpha, member_seed(seed, j));
    if (trace) trace->training_sets.push_back(current);
    if (j + 1 == members) break;

    const auto& member = e.members[j];
    const auto border = border_cases(member, dj);  // positions in dj
    std::vector<std::size_t> removed;
    std::vector<std::size_t> drawn;
    if (!border.empty()) {
      const auto uncovered = uncovered_cases(member, dj);          // positions in dj
      const auto misclassified = misclassified_cases(member, train);  // indices in train

      std::vector<std::size_t> hard;  // multiset, indices in train
      hard.reserve(border.size() + uncovered.size() + misclassified.size());
      for (auto p : border) hard.push_back(current[p]);
      for (auto p : uncovered) hard.push_back(current[p]);
      hard.insert(hard.end(), misclassified.begin(), misclassified.end());

      std::vector<std::size_t> next;
      next.reserve(current.size());
      std::size_t b = 0;
      for (std::size_t p = 0; p < current.size(); ++p) {
        if (b < border.size() && border[b] == p) {
          removed.push_back(current[p]);
          ++b;
        } else {
          next.push_back(current[p]);
        }
      }
      Rng rng(derive_seed(seed, "resample", j));
      for (std::size_t m = 0; m < border.size(); ++m) {
        const auto c = hard[rng.uniform_index(hard.size())];
        drawn.push_back(c);
        next.push_back(c);
      }
      current = std::move(next);
    }
    if (trace) {
      trace->removed.push_back(std::move(removed));
      trace->drawn.push_back(std::move(drawn));
    }
  }
  return e;
}

EnsembleModel build_arsse(const Dataset& train, int alpha, std::size_t kappa, std::size_t members,
                          std::uint64_t seed, std::size_t threads) {
  check_common(train, members);
  const auto m = train.attribute_count();
  if (kappa < 1 || kappa > m) {
    throw std::invalid_argument("build_arsse: kappa=" + std::to_string(kappa) +
                                " outside [1, " + std::to_string(m) + "]");
  }
  auto e = make_envelope(EnsembleScheme::arsse, train, alpha, members, seed);
  e.kappa = kappa;
  parallel_for(members, threads, [&](std::size_t j) {
    Rng rng(derive_seed(seed, "subspace", j));
    auto attributes = rng.sample_without_replacement(m, kappa);
    std::sort(attributes.begin(), attributes.end());
    auto member = build_rsc(train.project(attributes), alpha, member_seed(seed, j));
    member.attribute_subset = std::move(attributes);
    e.members[j] = std::move(member);
  });
  return e;
}

VoteTally tally_votes(std::span<const std::size_t> votes, std::size_t class_count,
                      std::uint64_t tie_seed) {
  VoteTally t;
  t.counts.assign(class_count, 0);
  for (auto v : votes) {
    if (v >= class_count) throw std::out_of_range("vote for unknown class");
    ++t.counts[v];
  }
  const auto best = *std::max_element(t.counts.begin(), t.counts.end());
  std::vector<std::size_t> tied;
  for (std::size_t c = 0; c < class_count; ++c) {
    if (t.counts[c] == best) tied.push_back(c);
  }
  if (tied.size() == 1) {
    t.winner = tied.front();
  } else {
    Rng rng(tie_seed);
    t.winner = tied[rng.uniform_index(tied.size())];
    t.tie_broken = true;
  }
  return t;
}

VoteTally vote(const EnsembleModel& e, std::span<const double> x, std::uint64_t tie_seed) {
  if (e.members.empty()) throw std::invalid_argument("vote: empty ensemble");
  std::vector<std::size_t> votes;
  votes.reserve(e.members.size());
  for (const auto& m : e.members) votes.push_back(predict(m, x));
  return tally_votes(votes, e.class_labels.size(), tie_seed);
}

VoteTally vote_raw(const EnsembleModel& e, std::span<const double> x_raw, std::uint64_t tie_seed) {
  if (e.members.empty()) throw std::invalid_argument("vote: empty ensemble");
  const auto& norm = e.members.front().normalization;
  if (norm.empty()) return vote(e, x_raw, tie_seed);
  const auto scaled = norm.apply(x_raw);
  return vote(e, scaled, tie_seed);
}

}  // namespace rsc
