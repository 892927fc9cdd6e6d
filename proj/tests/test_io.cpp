#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>

#include "ofl/adversary.hpp"
#include "ofl/error.hpp"
#include "ofl/io.hpp"

using namespace ofl;

TEST(Io, TreeInstanceRoundTrip) {
  const auto h = generate_lower_bound_instance(2, {1, 2}, 4);
  const io::InstanceFile file{h.instance, h.predictions.locations, "lb"};
  const auto back = io::instance_from_json(io::instance_to_json(file));
  EXPECT_EQ(back.instance.demands, h.instance.demands);
  EXPECT_EQ(back.predictions, h.predictions.locations);
  EXPECT_EQ(back.instance.facility_cost, h.instance.facility_cost);
  EXPECT_EQ(back.label, "lb");
  // Replaying the exported instance gives the same run.
  const auto a = run(Algorithm::PredFL, h.instance, h.predictions.locations, 8);
  const auto b = run(Algorithm::PredFL, back.instance, back.predictions, 8);
  EXPECT_EQ(a.trace, b.trace);
}

TEST(Io, EuclideanAndMatrixSpaces) {
  const auto e = io::space_from_json(io::space_to_json(MetricSpace::euclidean(5)));
  EXPECT_EQ(e.kind(), SpaceKind::Euclidean);
  EXPECT_EQ(e.size(), 5u);
  const auto m = io::space_from_json(io::space_to_json(MetricSpace::matrix(2, {0, 1.5, 1.5, 0})));
  EXPECT_EQ(m.distance(node(0), node(1)), 1.5);
  EXPECT_THROW(io::space_from_json(io::Json{{"kind", "torus"}}), ParseError);
}

TEST(Io, FileRoundTrip) {
  Instance inst{MetricSpace::euclidean(2), {point({0.1, 0.2}), point({1.0 / 3.0, 7})}, 2.5};
  const auto path = (std::filesystem::temp_directory_path() / "ofl_io_test.json").string();
  io::save_instance({inst, {}, ""}, path);
  const auto back = io::load_instance(path);
  std::remove(path.c_str());
  EXPECT_EQ(back.instance.demands, inst.demands);
  EXPECT_TRUE(back.predictions.empty());
}

TEST(Io, RejectsMismatchedPredictions) {
  Instance inst{MetricSpace::euclidean(1), {point({0}), point({1})}, 1.0};
  auto j = io::instance_to_json({inst, {point({0})}, ""});
  EXPECT_THROW(io::instance_from_json(j), ParseError);
}

TEST(Io, ResultJsonFields) {
  Instance inst{MetricSpace::euclidean(1), {point({0}), point({3})}, 1.0};
  const auto r = run(Algorithm::Meyerson, inst, {}, 2);
  const auto j = io::result_to_json(r, true);
  EXPECT_EQ(j.at("algorithm"), "meyerson");
  EXPECT_EQ(j.at("n_opened").get<std::size_t>(), r.n_opened);
  EXPECT_EQ(j.at("trace").size(), 2u);
  EXPECT_FALSE(io::result_to_json(r, false).contains("trace"));
}
