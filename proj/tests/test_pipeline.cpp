#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "test_util.hpp"
#include "tivreg/error.hpp"
#include "tivreg/harness.hpp"
#include "tivreg/pipeline.hpp"
#include "tivreg/shapes.hpp"

using namespace tivreg;

TEST_SUITE("pipeline") {
  TEST_CASE("joint normalization maps the union into the unit cube") {
    const PointCloud a({Point3(1, 1, 1), Point3(3, 2, 1)});
    const PointCloud b({Point3(2, 5, 1), Point3(1, 1, 2)});
    const NormalizedPair n = normalize_to_unit_cube(a, b);
    CHECK(n.record.scale == doctest::Approx(0.25));
    CHECK(n.record.offset == Vector3(1, 1, 1));
    CHECK(n.scene[0].isApprox(Point3(0.25, 1.0, 0.0)));
    const PointCloud back = denormalize(n.model, n.record);
    CHECK((back[1] - a[1]).norm() < 1e-12);
    CHECK_THROWS_AS(normalize_to_unit_cube(PointCloud({Point3(1, 1, 1)}), PointCloud({Point3(1, 1, 1)})), Error);
  }

  TEST_CASE("denormalized transforms act in original units") {
    std::mt19937_64 rng(71);
    Normalization rec;
    rec.offset = Vector3(2, -1, 0.5);
    rec.scale = 0.125;
    const RigidTransform tn(oracle::rotation_of(testutil::random_rotation_vector(rng)), Vector3(0.1, 0.2, -0.3));
    const RigidTransform t = rec.denormalize(tn);
    const Point3 p(3, 4, 5);
    CHECK((rec.inverse(tn.apply(rec.forward(p))) - t.apply(p)).norm() < 1e-12);
  }

  TEST_CASE("TIV selection clamp") {
    CHECK(clamp_tiv_selection(249500, 5000, 200) == std::pair<std::size_t, std::size_t>{5000, 200});
    CHECK(clamp_tiv_selection(1000, 5000, 200) == std::pair<std::size_t, std::size_t>{800, 200});
    CHECK(clamp_tiv_selection(6, 5000, 200) == std::pair<std::size_t, std::size_t>{0, 6});
  }

  TEST_CASE("config validation") {
    RegistrationConfig c;
    c.epsilon = 0.0;
    CHECK_THROWS_AS(c.validate(), Error);
    c = {};
    c.tiv_keep = 0;
    CHECK_THROWS_AS(c.validate(), Error);
    c = {};
    c.iv_resolution = {0, 1, 1};
    CHECK_THROWS_AS(c.validate(), Error);
    CHECK(parse_scene_tiv_selection("rank") == SceneTivSelection::Rank);
    CHECK_THROWS_AS(parse_scene_tiv_selection("other"), Error);
  }

  TEST_CASE("too few points") {
    const PointCloud one({Point3(0, 0, 0)});
    const PointCloud two({Point3(0, 0, 0), Point3(1, 0, 0)});
    CHECK_THROWS_AS(register_clouds(one, two), Error);
  }

  TEST_CASE("clean instance is recovered in both scene TIV modes") {
    const PointCloud base = make_shape("bracket", 300, 3);
    const Instance inst = make_instance(base, DegradationSpec{DegradationKind::Outliers, 0.0, 17});
    for (auto mode : {SceneTivSelection::NormWindow, SceneTivSelection::Rank}) {
      RegistrationConfig config;
      config.normalize = false;
      config.scene_tivs = mode;
      const RegistrationResult res = register_clouds(inst.model, inst.scene, config);
      CHECK(rms_error(res.transform, inst.correspondences, inst.model, inst.scene) <= 2 * config.epsilon);
      CHECK(res.rotation.certificate_gap() == 0);
      CHECK(res.translation.certificate_gap() == 0);
      CHECK(is_rotation(res.transform.rotation));
      CHECK(res.transform.rotation == rodrigues(res.rotation.best_rotation));
      CHECK(res.model_tivs == 200);
    }
  }

  TEST_CASE("normalization is undone in the reported transform") {
    const PointCloud base = make_shape("blob", 200, 4);
    const Instance inst = make_instance(base, DegradationSpec{DegradationKind::Outliers, 0.0, 5});
    std::vector<Point3> big_model, big_scene;
    for (const auto& p : inst.model) big_model.push_back(10.0 * p + Vector3(100, 0, 0));
    for (const auto& p : inst.scene) big_scene.push_back(10.0 * p + Vector3(100, 0, 0));
    const PointCloud m(big_model), s(big_scene);
    RegistrationConfig config;
    config.translation_range.reset();
    const RegistrationResult res = register_clouds(m, s, config);
    CHECK(rms_error(res.transform, inst.correspondences, m, s) <= 10 * 2 * config.epsilon);
    CHECK(res.normalization.scale < 1.0);
    CHECK(res.timings.total >= res.timings.rotation_search);
  }

  TEST_CASE("missing points with the norm-window scene selection") {
    const PointCloud base = make_shape("hand", 300, 6);
    const Instance inst = make_instance(base, DegradationSpec{DegradationKind::Missing, 0.2, 8});
    RegistrationConfig config;
    config.normalize = false;
    const RegistrationResult res = register_clouds(inst.model, inst.scene, config);
    CHECK(rms_error(res.transform, inst.correspondences, inst.model, inst.scene) <= 2 * config.epsilon);
    CHECK(res.scene_tivs >= res.model_tivs);
  }
}
