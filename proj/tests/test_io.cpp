#include <gtest/gtest.h>

#include "lyap/io.hpp"
#include "test_util.hpp"

namespace lyap {
namespace {

TEST(InstanceJson, ParsesAndValidates) {
  const auto inst = instance_from_json(json::parse(R"({"t": 1, "x": [0, 0.5], "m": [1, 2]})"));
  EXPECT_EQ(inst.t, 1.0);
  EXPECT_EQ(inst.x, (std::vector<double>{0.0, 0.5}));
  EXPECT_EQ(inst.m, (std::vector<int>{1, 2}));

  auto code = [](const char* text) {
    try {
      instance_from_json(json::parse(text));
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::NoMerge;
  };
  EXPECT_EQ(code(R"({"t": 1, "x": [0]})"), ErrorCode::InvalidArgument);
  EXPECT_EQ(code(R"({"t": 1, "x": [0], "m": [1.5]})"), ErrorCode::InvalidArgument);
  EXPECT_EQ(code(R"({"t": -1, "x": [0], "m": [1]})"), ErrorCode::NonPositiveTime);
  EXPECT_EQ(code(R"({"t": 1, "x": [1, 0], "m": [1, 1]})"), ErrorCode::UnsortedLocations);
}

TEST(GammaReportJson, KeysAndOneBasedPartition) {
  const auto j = to_json(gamma_report(validate_instance(1.0, {0.0, 2.0}, {1, 1})));
  for (const char* key : {"gamma1", "gamma2", "gamma3", "max_dev", "partition", "a", "b", "structure_ok"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["partition"], json::parse("[[1],[2]]"));
}

TEST(GammaReportJson, ReserializationIsIdempotent) {
  const auto gen = testing::property_instances(51);
  for (std::uint64_t i = 0; i < 100; ++i) {
    const std::string first = to_json(gamma_report(gen(i))).dump();
    const std::string second = to_json(gamma_report_from_json(json::parse(first))).dump();
    EXPECT_EQ(first, second);
  }
}

TEST(ClusterExport, CsvAndJson) {
  const auto res = simulate_inertia(validate_instance(1.0, {0.0, 0.5}, {1, 1}));
  EXPECT_EQ(trajectories_csv(res),
            "index,s,zeta,xi\n"
            "1,0,0,0\n1,0.5,0.25,0.125\n1,1,0.25,0\n"
            "2,0,0.5,0.5\n2,0.5,0.25,0.125\n2,1,0.25,0\n");
  const auto j = to_json(res);
  EXPECT_EQ(j["q_hat"], 1);
  EXPECT_EQ(j["events"][0]["merged"], json::parse("[[1,1],[2,2]]"));
  EXPECT_TRUE(j["next_collision"].is_null());
}

}  // namespace
}  // namespace lyap
