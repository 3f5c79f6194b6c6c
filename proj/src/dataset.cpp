#include "rsc/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "rsc/error.hpp"
#include "rsc/random.hpp"

namespace rsc {

Dataset::Dataset(std::vector<std::string> attributes, std::vector<std::string> class_domain)
    : attributes_(std::move(attributes)), class_domain_(std::move(class_domain)) {
  if (!std::is_sorted(class_domain_.begin(), class_domain_.end()) ||
      std::adjacent_find(class_domain_.begin(), class_domain_.end()) != class_domain_.end()) {
    throw std::invalid_argument("class domain must be sorted and free of duplicates");
  }
}

std::optional<std::size_t> Dataset::class_index(std::string_view name) const {
  auto it = std::lower_bound(class_domain_.begin(), class_domain_.end(), name);
  if (it == class_domain_.end() || *it != name) return std::nullopt;
  return static_cast<std::size_t>(it - class_domain_.begin());
}

void Dataset::add(std::span<const double> x, std::size_t label) {
  if (x.size() != attributes_.size()) {
    throw std::invalid_argument("instance has " + std::to_string(x.size()) +
                                " values, expected " + std::to_string(attributes_.size()));
  }
  if (label >= class_domain_.size()) throw std::out_of_range("label outside class domain");
  values_.insert(values_.end(), x.begin(), x.end());
  labels_.push_back(label);
}

std::vector<std::size_t> Dataset::class_counts() const {
  std::vector<std::size_t> counts(class_domain_.size(), 0);
  for (auto y : labels_) ++counts[y];
  return counts;
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Dataset out(attributes_, class_domain_);
  out.values_.reserve(indices.size() * attributes_.size());
  out.labels_.reserve(indices.size());
  for (auto i : indices) {
    if (i >= size()) throw std::out_of_range("subset index out of range");
    auto r = row(i);
    out.values_.insert(out.values_.end(), r.begin(), r.end());
    out.labels_.push_back(labels_[i]);
  }
  return out;
}

Dataset Dataset::project(std::span<const std::size_t> attribute_indices) const {
  std::vector<std::string> names;
  names.reserve(attribute_indices.size());
  for (auto a : attribute_indices) {
    if (a >= attributes_.size()) throw std::out_of_range("attribute index out of range");
    names.push_back(attributes_[a]);
  }
  Dataset out(std::move(names), class_domain_);
  out.labels_ = labels_;
  out.values_.reserve(size() * attribute_indices.size());
  for (std::size_t i = 0; i < size(); ++i) {
    auto r = row(i);
    for (auto a : attribute_indices) out.values_.push_back(r[a]);
  }
  return out;
}

std::vector<double> project_row(std::span<const double> x,
                                std::span<const std::size_t> attribute_indices) {
  std::vector<double> out;
  out.reserve(attribute_indices.size());
  for (auto a : attribute_indices) out.push_back(x[a]);
  return out;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

double parse_value(const std::string& text, std::size_t line) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || text.empty()) {
    throw ParseError("non-numeric attribute value '" + text + "'", line);
  }
  if (!std::isfinite(v)) throw ParseError("non-finite attribute value '" + text + "'", line);
  return v;
}

struct RawRows {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;
};

RawRows read_rows(std::istream& in) {
  RawRows raw;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto fields = split_fields(line);
    for (auto& f : fields) f = trim(std::move(f));
    if (!have_header) {
      raw.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != raw.header.size()) {
      throw ParseError("expected " + std::to_string(raw.header.size()) + " fields, found " +
                           std::to_string(fields.size()),
                       line_no);
    }
    raw.rows.push_back(std::move(fields));
    raw.line_numbers.push_back(line_no);
  }
  if (!have_header) throw ParseError("empty file");
  return raw;
}

}  // namespace

Dataset parse_dataset(std::istream& in, const CsvSchema& schema) {
  RawRows raw = read_rows(in);
  const auto columns = static_cast<int>(raw.header.size());
  if (columns < 2) throw ParseError("need at least one attribute column and a class column", 1);
  const int class_col = schema.class_column < 0 ? columns + schema.class_column : schema.class_column;
  if (class_col < 0 || class_col >= columns) throw ParseError("class column out of range", 1);
  if (raw.rows.empty()) throw ParseError("file has a header but no instances");

  std::vector<std::string> attributes;
  for (int c = 0; c < columns; ++c) {
    if (c != class_col) attributes.push_back(raw.header[c]);
  }
  std::set<std::string> domain;
  for (const auto& r : raw.rows) domain.insert(r[class_col]);
  Dataset d(std::move(attributes), std::vector<std::string>(domain.begin(), domain.end()));

  std::vector<double> x(d.attribute_count());
  for (std::size_t i = 0; i < raw.rows.size(); ++i) {
    const auto& r = raw.rows[i];
    std::size_t a = 0;
    for (int c = 0; c < columns; ++c) {
      if (c == class_col) continue;
      x[a++] = parse_value(r[c], raw.line_numbers[i]);
    }
    d.add(x, *d.class_index(r[class_col]));
  }
  return d;
}

Dataset load_dataset(const std::filesystem::path& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset '" + path.string() + "'");
  return parse_dataset(in, schema);
}

Dataset load_unlabeled(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset '" + path.string() + "'");
  RawRows raw = read_rows(in);
  if (raw.rows.empty()) throw ParseError("file has a header but no instances");
  Dataset d(raw.header, {"?"});
  std::vector<double> x(d.attribute_count());
  for (std::size_t i = 0; i < raw.rows.size(); ++i) {
    for (std::size_t a = 0; a < x.size(); ++a) x[a] = parse_value(raw.rows[i][a], raw.line_numbers[i]);
    d.add(x, 0);
  }
  return d;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

void write_dataset(std::ostream& out, const Dataset& d, std::string_view class_header) {
  for (const auto& a : d.attributes()) out << a << ',';
  out << class_header << '\n';
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (double v : d.row(i)) out << format_double(v) << ',';
    out << d.label_name(i) << '\n';
  }
}

void save_dataset(const std::filesystem::path& path, const Dataset& d, std::string_view class_header) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  write_dataset(out, d, class_header);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

// ---------------------------------------------------------------------------
// Normalization

Normalization Normalization::fit(const Dataset& d) {
  if (d.empty()) throw std::invalid_argument("cannot fit normalization on an empty dataset");
  std::vector<AttributeRange> ranges(d.attribute_count());
  for (std::size_t a = 0; a < ranges.size(); ++a) {
    ranges[a] = {d.row(0)[a], d.row(0)[a]};
  }
  for (std::size_t i = 1; i < d.size(); ++i) {
    auto r = d.row(i);
    for (std::size_t a = 0; a < ranges.size(); ++a) {
      ranges[a].min = std::min(ranges[a].min, r[a]);
      ranges[a].max = std::max(ranges[a].max, r[a]);
    }
  }
  return Normalization(std::move(ranges));
}

double Normalization::apply(std::size_t attribute, double value) const {
  const auto& r = ranges_[attribute];
  const double width = r.max - r.min;
  if (!(width > 0.0)) return 0.0;
  return (value - r.min) / width;
}

std::vector<double> Normalization::apply(std::span<const double> x) const {
  if (x.size() != ranges_.size()) throw SchemaError("normalization arity mismatch");
  std::vector<double> out(x.size());
  for (std::size_t a = 0; a < x.size(); ++a) out[a] = apply(a, x[a]);
  return out;
}

Dataset Normalization::apply(const Dataset& d) const {
  if (d.attribute_count() != ranges_.size()) throw SchemaError("normalization arity mismatch");
  Dataset out(d.attributes(), d.class_domain());
  for (std::size_t i = 0; i < d.size(); ++i) out.add(apply(d.row(i)), d.label(i));
  return out;
}

std::pair<Dataset, Normalization> normalize(const Dataset& d) {
  auto n = Normalization::fit(d);
  auto scaled = n.apply(d);
  return {std::move(scaled), std::move(n)};
}

// ---------------------------------------------------------------------------
// Resampling

namespace {

/// Instance indices grouped by class, each group shuffled.
std::vector<std::vector<std::size_t>> shuffled_strata(const Dataset& d, Rng& rng) {
  std::vector<std::vector<std::size_t>> strata(d.class_domain().size());
  for (std::size_t i = 0; i < d.size(); ++i) strata[d.label(i)].push_back(i);
  for (auto& s : strata) rng.shuffle(s);
  return strata;
}

}  // namespace

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(
    const Dataset& d, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw std::invalid_argument("test fraction must lie in (0,1)");
  }
  if (d.empty()) throw std::invalid_argument("cannot split an empty dataset");
  Rng rng(seed);
  auto strata = shuffled_strata(d, rng);
  const auto n = d.size();
  const auto total = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(n)));

  // Largest-remainder allocation of the test quota across classes.
  std::vector<std::size_t> quota(strata.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t allocated = 0;
  for (std::size_t c = 0; c < strata.size(); ++c) {
    const double exact = static_cast<double>(total) * static_cast<double>(strata[c].size()) /
                         static_cast<double>(n);
    quota[c] = static_cast<std::size_t>(std::floor(exact));
    allocated += quota[c];
    remainders.emplace_back(exact - std::floor(exact), c);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t r = 0; allocated < total && r < remainders.size(); ++r) {
    const auto c = remainders[r].second;
    if (quota[c] < strata[c].size()) {
      ++quota[c];
      ++allocated;
    }
  }

  std::vector<std::size_t> test, train;
  for (std::size_t c = 0; c < strata.size(); ++c) {
    test.insert(test.end(), strata[c].begin(), strata[c].begin() + quota[c]);
    train.insert(train.end(), strata[c].begin() + quota[c], strata[c].end());
  }
  std::sort(test.begin(), test.end());
  std::sort(train.begin(), train.end());
  return {std::move(test), std::move(train)};
}

TrainTest split(const Dataset& d, double test_fraction, std::uint64_t seed) {
  auto [test, train] = split_indices(d, test_fraction, seed);
  return {d.subset(train), d.subset(test)};
}

std::vector<std::size_t> FoldAssignment::fold_indices(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold_of.size(); ++i) {
    if (fold_of[i] == fold) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> FoldAssignment::complement_indices(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold_of.size(); ++i) {
    if (fold_of[i] != fold) out.push_back(i);
  }
  return out;
}

FoldAssignment cv_folds(const Dataset& d, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("cv_folds: k must be at least 2");
  if (k > d.size()) {
    throw std::invalid_argument("cv_folds: k=" + std::to_string(k) + " exceeds n=" +
                                std::to_string(d.size()));
  }
  Rng rng(seed);
  auto strata = shuffled_strata(d, rng);
  FoldAssignment folds{k, std::vector<std::size_t>(d.size())};
  // Dealing the class-ordered sequence round-robin keeps both the fold sizes
  // and every per-class fold count within one of each other.
  std::size_t position = 0;
  for (const auto& s : strata) {
    for (auto i : s) folds.fold_of[i] = position++ % k;
  }
  return folds;
}

std::vector<std::size_t> bootstrap_indices(std::size_t n, std::size_t size, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("bootstrap: empty dataset");
  if (size == 0) throw std::invalid_argument("bootstrap: size must be positive");
  Rng rng(seed);
  std::vector<std::size_t> idx(size);
  for (auto& i : idx) i = rng.uniform_index(n);
  return idx;
}

Dataset bootstrap(const Dataset& d, std::size_t size, std::uint64_t seed) {
  return d.subset(bootstrap_indices(d.size(), size, seed));
}

// ---------------------------------------------------------------------------
// Synthetic data

std::string_view to_string(SyntheticFamily f) {
  return f == SyntheticFamily::twonorm ? "twonorm" : "ringnorm";
}

SyntheticFamily parse_synthetic_family(std::string_view s) {
  if (s == "twonorm") return SyntheticFamily::twonorm;
  if (s == "ringnorm") return SyntheticFamily::ringnorm;
  throw std::invalid_argument("unknown synthetic family '" + std::string(s) + "'");
}

Dataset gen_synthetic(const SyntheticSpec& spec, std::size_t n) {
  if (spec.dimensions < 1) throw std::invalid_argument("synthetic dimensions must be >= 1");
  if (n < 2) throw std::invalid_argument("synthetic dataset needs n >= 2");
  std::vector<std::string> names;
  for (std::size_t a = 0; a < spec.dimensions; ++a) names.push_back("x" + std::to_string(a + 1));
  Dataset d(std::move(names), {"+1", "-1"});
  const auto positive = *d.class_index("+1");
  const auto negative = *d.class_index("-1");
  const double dim = static_cast<double>(spec.dimensions);

  Rng rng(derive_seed(spec.seed, to_string(spec.family)));
  std::vector<double> x(spec.dimensions);
  for (std::size_t i = 0; i < n; ++i) {
    // Alternate classes so any n is balanced to within one.
    const bool is_positive = (i % 2 == 0);
    for (auto& v : x) {
      const double z = rng.normal();
      if (spec.family == SyntheticFamily::twonorm) {
        const double a = 2.0 / std::sqrt(dim);
        v = z + (is_positive ? a : -a);
      } else {
        const double a = 1.0 / std::sqrt(dim);
        v = is_positive ? 2.0 * z : z + a;
      }
    }
    d.add(x, is_positive ? positive : negative);
  }
  return d;
}

}  // namespace rsc
