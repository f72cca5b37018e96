#include <gtest/gtest.h>

#include <filesystem>

#include "oracles.hpp"
#include "wsnlife/errors.hpp"
#include "wsnlife/instance_io.hpp"

using namespace wsn;
using nlohmann::json;

namespace {

ErrorCode code_of(const json& j) {
  try {
    instance_from_json(j);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::invalid_argument;
}

}  // namespace

TEST(InstanceIo, RoundTrip) {
  const auto inst = oracle::crossing(3);
  const auto back = instance_from_json(to_json(inst));
  EXPECT_EQ(back.positions, inst.positions);
  EXPECT_EQ(back.ranges, inst.ranges);
  EXPECT_EQ(back.energies, inst.energies);
  EXPECT_EQ(back.m_cs, inst.m_cs);
}

TEST(InstanceIo, FileRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "wsnlife_io_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "inst.json";
  save_json(path, to_json(oracle::chain6({7, 3, 9, 4})));
  const auto inst = load_instance(path);
  EXPECT_EQ(inst.energies, (std::vector<Energy>{7, 3, 9, 4}));
  EXPECT_EQ(inst.m_cs, 2);
  std::filesystem::remove_all(dir);
}

TEST(InstanceIo, ShapeErrors) {
  const json good = to_json(oracle::chain3());
  json j = good;
  j.erase("energies");
  EXPECT_EQ(code_of(j), ErrorCode::invalid_input);
  j = good;
  j["positions"] = "nope";
  EXPECT_EQ(code_of(j), ErrorCode::invalid_input);
  j = good;
  j["energies"] = {1.5};
  EXPECT_EQ(code_of(j), ErrorCode::invalid_input);
  j = good;
  j["m_cs"] = "two";
  EXPECT_EQ(code_of(j), ErrorCode::invalid_input);
  EXPECT_EQ(code_of(json::array()), ErrorCode::invalid_input);
}

TEST(InstanceIo, MissingFile) {
  try {
    load_instance("/nonexistent/instance.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_input);
  }
}

TEST(ScheduleIo, RoundTrip) {
  Schedule s;
  s.slots = {{{1, 3}}, {{2, 4}}};
  const json j = to_json(s);
  EXPECT_EQ(j["lifetime"], 2);
  EXPECT_EQ(schedule_from_json(j), s);
}

TEST(ScheduleIo, Errors) {
  EXPECT_THROW(schedule_from_json(json{{"slots", {{1, 2}}}, {"lifetime", 3}}), Error);
  EXPECT_THROW(schedule_from_json(json{{"slots", {{"a"}}}}), Error);
  EXPECT_THROW(schedule_from_json(json{{"slots", 4}}), Error);
}
