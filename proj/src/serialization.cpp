#include "rsc/serialization.hpp"

#include <fstream>
#include <limits>

#include "rsc/error.hpp"

namespace rsc {

namespace {

std::size_t label_index(const std::vector<std::string>& labels, const std::string& name) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == name) return i;
  }
  throw ParseError("sphere label '" + name + "' is not among the model's class labels");
}

json radius_to_json(double r) {
  if (r == std::numeric_limits<double>::infinity()) return "inf";
  return r;
}

double radius_from_json(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() != "inf") throw ParseError("radius must be a number or \"inf\"");
    return std::numeric_limits<double>::infinity();
  }
  return j.get<double>();
}

template <typename Fn>
auto guarded(Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw ParseError(std::string("model document: ") + e.what());
  }
}

}  // namespace

json to_json(const SphereCoverModel& m) {
  json spheres = json::array();
  for (const auto& s : m.spheres) {
    spheres.push_back({
        {"label", m.class_labels.at(s.label)},
        {"center", s.center},
        {"radius", radius_to_json(s.radius)},
        {"member_count", s.members.size()},
        {"members", s.members},
        {"border_index", s.border_index ? json(*s.border_index) : json(nullptr)},
    });
  }
  json ranges = json::array();
  for (const auto& r : m.normalization.ranges()) ranges.push_back({r.min, r.max});
  return {
      {"alpha", m.alpha},
      {"class_labels", m.class_labels},
      {"attribute_subset", m.attribute_subset},
      {"normalization", ranges},
      {"spheres", spheres},
  };
}

SphereCoverModel sphere_cover_from_json(const json& j) {
  return guarded([&] {
    SphereCoverModel m;
    m.alpha = j.at("alpha").get<int>();
    m.class_labels = j.at("class_labels").get<std::vector<std::string>>();
    m.attribute_subset = j.at("attribute_subset").get<std::vector<std::size_t>>();
    std::vector<AttributeRange> ranges;
    for (const auto& r : j.at("normalization")) ranges.push_back({r.at(0).get<double>(), r.at(1).get<double>()});
    m.normalization = Normalization(std::move(ranges));
    for (const auto& js : j.at("spheres")) {
      Sphere s;
      s.label = label_index(m.class_labels, js.at("label").get<std::string>());
      s.center = js.at("center").get<std::vector<double>>();
      s.radius = radius_from_json(js.at("radius"));
      if (js.contains("members")) s.members = js.at("members").get<std::vector<std::size_t>>();
      if (!js.at("border_index").is_null()) s.border_index = js.at("border_index").get<std::size_t>();
      if (s.center.size() != m.attribute_subset.size()) {
        throw ParseError("sphere center width differs from the attribute subset");
      }
      m.spheres.push_back(std::move(s));
    }
    return m;
  });
}

json to_json(const EnsembleModel& e) {
  json members = json::array();
  for (const auto& m : e.members) members.push_back(to_json(m));
  json out = {
      {"scheme", std::string(to_string(e.scheme))},
      {"L", e.size},
      {"alpha", e.alpha},
      {"master_seed", e.master_seed},
      {"class_labels", e.class_labels},
      {"members", members},
  };
  if (e.kappa) out["kappa"] = *e.kappa;
  return out;
}

EnsembleModel ensemble_from_json(const json& j) {
  return guarded([&] {
    EnsembleModel e;
    e.scheme = parse_ensemble_scheme(j.at("scheme").get<std::string>());
    e.size = j.at("L").get<std::size_t>();
    e.alpha = j.at("alpha").get<int>();
    e.master_seed = j.at("master_seed").get<std::uint64_t>();
    e.class_labels = j.at("class_labels").get<std::vector<std::string>>();
    if (j.contains("kappa")) e.kappa = j.at("kappa").get<std::size_t>();
    for (const auto& m : j.at("members")) e.members.push_back(sphere_cover_from_json(m));
    if (e.members.size() != e.size) throw ParseError("ensemble member count differs from L");
    return e;
  });
}

json to_json(const ModelSpec& spec) {
  json out = {
      {"scheme", std::string(to_string(spec.kind))},
      {"alpha", spec.alpha},
      {"L", spec.members},
  };
  if (spec.kappa) out["kappa"] = *spec.kappa;
  if (spec.filter) {
    out["filter"] = {
        {"method", std::string(to_string(spec.filter->method))},
        {"bins", spec.filter->bins},
        {"k", spec.filter->k},
        {"relief_samples", spec.filter->relief_samples},
    };
  }
  return out;
}

ModelSpec model_spec_from_json(const json& j) {
  return guarded([&] {
    ModelSpec spec;
    spec.kind = parse_model_kind(j.at("scheme").get<std::string>());
    spec.alpha = j.value("alpha", 1);
    spec.members = j.value("L", std::size_t{25});
    if (j.contains("kappa")) spec.kappa = j.at("kappa").get<std::size_t>();
    if (j.contains("filter")) {
      const auto& f = j.at("filter");
      FilterSpec fs;
      fs.method = parse_filter_method(f.at("method").get<std::string>());
      fs.bins = f.value("bins", kDefaultBins);
      fs.k = f.at("k").get<std::size_t>();
      fs.relief_samples = f.value("relief_samples", kDefaultReliefSamples);
      spec.filter = fs;
    }
    return spec;
  });
}

json to_json(const FittedModel& m) {
  json body;
  if (const auto* single = std::get_if<SphereCoverModel>(&m.model)) {
    body = to_json(*single);
  } else if (const auto* ensemble = std::get_if<EnsembleModel>(&m.model)) {
    body = to_json(*ensemble);
  } else {
    body = {{"label", m.class_labels.at(std::get<MajorityModel>(m.model).label)}};
  }
  return {
      {"format", "rsc-model"},
      {"version", 1},
      {"spec", to_json(m.spec)},
      {"attributes", m.attributes},
      {"class_labels", m.class_labels},
      {"selected_attributes", m.selected_attributes},
      {"model", body},
  };
}

FittedModel fitted_model_from_json(const json& j) {
  return guarded([&] {
    if (j.value("format", std::string()) != "rsc-model") throw ParseError("not an rsc model document");
    FittedModel m;
    m.spec = model_spec_from_json(j.at("spec"));
    m.attributes = j.at("attributes").get<std::vector<std::string>>();
    m.class_labels = j.at("class_labels").get<std::vector<std::string>>();
    m.selected_attributes = j.at("selected_attributes").get<std::vector<std::size_t>>();
    const auto& body = j.at("model");
    switch (m.spec.kind) {
      case ModelKind::rsc:
        m.model = sphere_cover_from_json(body);
        break;
      case ModelKind::arse:
      case ModelKind::abrse:
      case ModelKind::arsse:
        m.model = ensemble_from_json(body);
        break;
      case ModelKind::majority:
        m.model = MajorityModel{label_index(m.class_labels, body.at("label").get<std::string>())};
        break;
    }
    return m;
  });
}

void save_model(const std::filesystem::path& path, const FittedModel& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write model '" + path.string() + "'");
  out << to_json(m).dump(1) << '\n';
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

FittedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError("model '" + path.string() + "': " + e.what());
  }
  return fitted_model_from_json(j);
}

}  // namespace rsc
