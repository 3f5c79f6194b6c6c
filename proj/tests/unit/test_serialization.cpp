#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "rsc/error.hpp"
#include "rsc/serialization.hpp"
#include "support.hpp"

using namespace rsc;

TEST_CASE("model round trips") {
  const auto d = gen_synthetic({SyntheticFamily::twonorm, 5, 4}, 80);
  const auto probe = gen_synthetic({SyntheticFamily::twonorm, 5, 5}, 50);
  std::vector<ModelSpec> specs(6);
  specs[1].kind = ModelKind::arse;
  specs[2].kind = ModelKind::abrse;
  specs[3].kind = ModelKind::arsse;
  specs[3].kappa = 3;
  specs[4].kind = ModelKind::majority;
  specs[5].filter = FilterSpec{FilterMethod::relief, 10, 2, 40};
  for (auto& s : specs) s.members = 7;
  for (const auto& s : specs) {
    const auto m = fit(s, d, 9);
    const auto j = to_json(m);
    const auto back = fitted_model_from_json(j);
    CHECK(to_json(back).dump() == j.dump());
    for (std::size_t i = 0; i < probe.size(); ++i) {
      CHECK(predict(back, probe.row(i), i).label == predict(m, probe.row(i), i).label);
    }
  }
}

TEST_CASE("unbounded radius") {
  const auto d = test::make_dataset({{{0.0}, "A"}, {{1.0}, "A"}});
  const auto m = build_rsc(d, 1, 0);
  const auto j = to_json(m);
  CHECK(j["spheres"][0]["radius"] == "inf");
  CHECK(sphere_cover_from_json(j).spheres[0].unbounded());
}

TEST_CASE("model files") {
  const auto dir = std::filesystem::temp_directory_path() / "rsc_serialization_test";
  std::filesystem::create_directories(dir);
  const auto d = gen_synthetic({SyntheticFamily::ringnorm, 4, 1}, 40);
  const auto m = fit(ModelSpec{}, d, 2);
  save_model(dir / "m.json", m);
  CHECK(to_json(load_model(dir / "m.json")).dump() == to_json(m).dump());
  CHECK_THROWS_AS(load_model(dir / "missing.json"), IoError);
  {
    std::ofstream bad(dir / "bad.json");
    bad << "{ not json";
  }
  CHECK_THROWS_AS(load_model(dir / "bad.json"), ParseError);
  {
    std::ofstream wrong(dir / "wrong.json");
    wrong << R"({"format": "something-else"})";
  }
  CHECK_THROWS_AS(load_model(dir / "wrong.json"), ParseError);
  std::filesystem::remove_all(dir);
}
