#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rsc {

/// A multiset of labeled real-valued instances.
///
/// Rows are stored contiguously (row-major). Labels are indices into
/// class_domain(), which is kept sorted so that subsets, folds and
/// bootstrap samples drawn from the same source share one label coding.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<std::string> attributes, std::vector<std::string> class_domain);

  std::size_t size() const noexcept { return labels_.size(); }
  bool empty() const noexcept { return labels_.empty(); }
  std::size_t attribute_count() const noexcept { return attributes_.size(); }

  const std::vector<std::string>& attributes() const noexcept { return attributes_; }
  const std::vector<std::string>& class_domain() const noexcept { return class_domain_; }

  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * attributes_.size(), attributes_.size()};
  }
  std::size_t label(std::size_t i) const { return labels_[i]; }
  const std::string& label_name(std::size_t i) const { return class_domain_[labels_[i]]; }
  const std::vector<std::size_t>& labels() const noexcept { return labels_; }

  /// Index of `name` in the class domain, if present.
  std::optional<std::size_t> class_index(std::string_view name) const;

  void add(std::span<const double> x, std::size_t label);

  /// Instance counts per class-domain entry.
  std::vector<std::size_t> class_counts() const;

  /// Rows picked by index; repeats are kept (multiset semantics).
  Dataset subset(std::span<const std::size_t> indices) const;

  /// Columns picked by attribute index, in the given order.
  Dataset project(std::span<const std::size_t> attribute_indices) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::vector<std::string> attributes_;
  std::vector<std::string> class_domain_;
  std::vector<double> values_;
  std::vector<std::size_t> labels_;
};

/// Copies `x` restricted to `attribute_indices`.
std::vector<double> project_row(std::span<const double> x,
                                std::span<const std::size_t> attribute_indices);

// ---------------------------------------------------------------------------
// CSV

struct CsvSchema {
  /// Column holding the class label; negative values count from the end.
  int class_column = -1;
};

/// Reads a header-first, comma-separated file. Labels are taken verbatim.
Dataset load_dataset(const std::filesystem::path& path, const CsvSchema& schema = {});
Dataset parse_dataset(std::istream& in, const CsvSchema& schema = {});

/// Reads a file whose columns are exactly `attributes` (no class column);
/// every instance gets the placeholder label "?".
Dataset load_unlabeled(const std::filesystem::path& path);

/// Writes the same dialect load_dataset reads, class label last. Values are
/// printed in shortest round-trip form.
void write_dataset(std::ostream& out, const Dataset& d, std::string_view class_header = "class");
void save_dataset(const std::filesystem::path& path, const Dataset& d,
                  std::string_view class_header = "class");

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

// ---------------------------------------------------------------------------
// Normalization

struct AttributeRange {
  double min = 0.0;
  double max = 0.0;
  friend bool operator==(const AttributeRange&, const AttributeRange&) = default;
};

/// Per-attribute min-max scaling fitted on training data. Values outside the
/// training range map outside [0,1]; no clamping. Constant attributes map to 0.
class Normalization {
 public:
  Normalization() = default;
  explicit Normalization(std::vector<AttributeRange> ranges) : ranges_(std::move(ranges)) {}

  static Normalization fit(const Dataset& d);

  bool empty() const noexcept { return ranges_.empty(); }
  const std::vector<AttributeRange>& ranges() const noexcept { return ranges_; }

  double apply(std::size_t attribute, double value) const;
  std::vector<double> apply(std::span<const double> x) const;
  Dataset apply(const Dataset& d) const;

  friend bool operator==(const Normalization&, const Normalization&) = default;

 private:
  std::vector<AttributeRange> ranges_;
};

/// Fits on `d` and returns the scaled copy together with the fitted table.
std::pair<Dataset, Normalization> normalize(const Dataset& d);

// ---------------------------------------------------------------------------
// Resampling

struct TrainTest {
  Dataset train;
  Dataset test;
};

/// Stratified split with |test| = round(test_fraction * n).
TrainTest split(const Dataset& d, double test_fraction, std::uint64_t seed);

/// Index form of split(): test indices first, then train indices, each sorted.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(
    const Dataset& d, double test_fraction, std::uint64_t seed);

/// Stratified fold assignment; entry i is the fold of instance i, in [0,k).
struct FoldAssignment {
  std::size_t k = 0;
  std::vector<std::size_t> fold_of;

  std::vector<std::size_t> fold_indices(std::size_t fold) const;
  std::vector<std::size_t> complement_indices(std::size_t fold) const;
};

FoldAssignment cv_folds(const Dataset& d, std::size_t k, std::uint64_t seed);

/// `size` draws with replacement, uniformly over instances.
Dataset bootstrap(const Dataset& d, std::size_t size, std::uint64_t seed);
std::vector<std::size_t> bootstrap_indices(std::size_t n, std::size_t size, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Synthetic data

enum class SyntheticFamily { twonorm, ringnorm };

struct SyntheticSpec {
  SyntheticFamily family = SyntheticFamily::twonorm;
  std::size_t dimensions = 20;
  std::uint64_t seed = 0;
};

std::string_view to_string(SyntheticFamily f);
SyntheticFamily parse_synthetic_family(std::string_view s);

/// Balanced two-class Gaussian data (classes "-1" and "+1"); Breiman's
/// twonorm and ringnorm definitions.
Dataset gen_synthetic(const SyntheticSpec& spec, std::size_t n);

}  // namespace rsc
