#include "cli/config.hpp"

#include <fstream>
#include <set>

#include "rsc/error.hpp"

namespace rsc::cli {

void ExperimentConfig::validate_data_source() const {
  if (data.has_value() == synthetic.has_value()) {
    throw ParseError("config must name exactly one data source (data path or synthetic)");
  }
}

void ExperimentConfig::validate_models() const {
  if (models.empty()) throw ParseError("config names no model");
  if (runs < 1) throw ParseError("runs must be at least 1");
  std::set<std::string> names;
  for (const auto& m : models) {
    if (!names.insert(m.name).second) throw ParseError("duplicate model name '" + m.name + "'");
    if (m.kind != ModelKind::arsse && (m.kappa || !m.kappa_grid.empty())) {
      throw ParseError("model '" + m.name + "': kappa only applies to arsse");
    }
    if (m.members < 1) throw ParseError("model '" + m.name + "': L must be at least 1");
  }
}

json load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  try {
    auto j = json::parse(in, nullptr, true, /*ignore_comments=*/true);
    if (!j.is_object()) throw ParseError("config '" + path.string() + "' is not a JSON object");
    return j;
  } catch (const json::exception& e) {
    throw ParseError("config '" + path.string() + "': " + e.what());
  }
}

void merge_config(json& base, const json& overrides) {
  if (!base.is_object() || !overrides.is_object()) {
    base = overrides;
    return;
  }
  for (auto it = overrides.begin(); it != overrides.end(); ++it) {
    if (base.contains(it.key()) && base[it.key()].is_object() && it.value().is_object()) {
      merge_config(base[it.key()], it.value());
    } else {
      base[it.key()] = it.value();
    }
  }
}

namespace {

void reject_unknown(const json& obj, std::initializer_list<const char*> known, const std::string& where) {
  std::set<std::string> allowed(known.begin(), known.end());
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) throw ParseError("unknown config key '" + where + it.key() + "'");
  }
}

FilterSpec parse_filter(const json& f, bool* k_given) {
  reject_unknown(f, {"method", "bins", "k", "relief_samples"}, "filter.");
  FilterSpec fs;
  fs.method = parse_filter_method(f.at("method").get<std::string>());
  fs.bins = f.value("bins", kDefaultBins);
  fs.relief_samples = f.value("relief_samples", kDefaultReliefSamples);
  if (f.contains("k")) fs.k = f.at("k").get<std::size_t>();
  if (k_given) *k_given = f.contains("k");
  return fs;
}

ModelEntry parse_model(const json& m, std::size_t index) {
  reject_unknown(m, {"name", "scheme", "alpha", "alpha_grid", "kappa", "kappa_grid", "L", "filter"}, "model.");
  ModelEntry e;
  e.kind = parse_model_kind(m.value("scheme", std::string("rsc")));
  e.name = m.value("name", std::string(to_string(e.kind)) + (index > 0 ? std::to_string(index + 1) : ""));
  if (m.contains("alpha") && !m.at("alpha").is_null()) e.alpha = m.at("alpha").get<int>();
  if (m.contains("kappa") && !m.at("kappa").is_null()) e.kappa = m.at("kappa").get<std::size_t>();
  if (m.contains("alpha_grid")) e.alpha_grid = m.at("alpha_grid").get<std::vector<int>>();
  if (m.contains("kappa_grid")) e.kappa_grid = m.at("kappa_grid").get<std::vector<std::size_t>>();
  if (m.contains("alpha_grid") && e.alpha_grid.empty()) throw ParseError("alpha_grid is empty");
  if (m.contains("kappa_grid") && e.kappa_grid.empty()) throw ParseError("kappa_grid is empty");
  e.members = m.value("L", std::size_t{25});
  if (m.contains("filter") && !m.at("filter").is_null()) e.filter = parse_filter(m.at("filter"), nullptr);
  return e;
}

}  // namespace

ExperimentConfig parse_config(const json& doc) {
  try {
    reject_unknown(doc,
                   {"data", "class_column", "synthetic", "model", "models", "model_file", "seed", "runs",
                    "test_fraction", "cv_folds", "out", "threads", "bv", "filter", "matrix", "level"},
                   "");
    ExperimentConfig c;
    if (doc.contains("data")) c.data = doc.at("data").get<std::string>();
    c.class_column = doc.value("class_column", -1);
    c.seed = doc.value("seed", std::uint64_t{0});
    if (doc.contains("synthetic")) {
      const auto& s = doc.at("synthetic");
      reject_unknown(s, {"family", "n", "dimensions", "seed"}, "synthetic.");
      SyntheticSource src;
      src.spec.family = parse_synthetic_family(s.value("family", std::string("twonorm")));
      src.spec.dimensions = s.value("dimensions", std::size_t{20});
      src.spec.seed = s.value("seed", c.seed);
      src.n = s.value("n", std::size_t{300});
      c.synthetic = src;
    }
    if (doc.contains("model") && doc.contains("models")) {
      throw ParseError("give either 'model' or 'models', not both");
    }
    if (doc.contains("model")) c.models.push_back(parse_model(doc.at("model"), 0));
    if (doc.contains("models")) {
      std::size_t i = 0;
      for (const auto& m : doc.at("models")) c.models.push_back(parse_model(m, i++));
    }
    if (doc.contains("model_file")) c.model_file = doc.at("model_file").get<std::string>();
    c.runs = doc.value("runs", std::size_t{1});
    c.test_fraction = doc.value("test_fraction", 1.0 / 3.0);
    c.cv_folds = doc.value("cv_folds", std::size_t{10});
    c.out = doc.value("out", std::string("."));
    c.threads = doc.value("threads", std::size_t{1});
    if (doc.contains("bv")) {
      const auto& bv = doc.at("bv");
      reject_unknown(bv, {"s", "boot_size"}, "bv.");
      c.bv_replicates = bv.value("s", std::size_t{200});
      c.bv_boot_size = bv.value("boot_size", std::size_t{200});
    }
    if (doc.contains("filter")) c.filter = parse_filter(doc.at("filter"), &c.filter_k_given);
    if (doc.contains("matrix")) c.matrix = doc.at("matrix").get<std::string>();
    c.level = doc.value("level", 0.10);
    return c;
  } catch (const json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
}

}  // namespace rsc::cli
