#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "config.hpp"

using namespace irslab::cli;

namespace {

const std::vector<KeySpec> kKeys = {{"n", "100", ""}, {"schedule", "1,0.5", ""}, {"out", "", ""},
                                    {"functionals", "A(1);B(2)", ""}, {"x-range", "-1,2", ""}};

std::string write_temp(const std::string& text) {
  const std::string path = testing::TempDir() + "irslab_config_test.cfg";
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST(Config, DefaultsAndTypedAccess) {
  ExperimentConfig c("run", kKeys);
  EXPECT_EQ(c.integer("n"), 100);
  EXPECT_EQ(c.numbers("schedule"), (std::vector<double>{1.0, 0.5}));
  EXPECT_EQ(c.items("functionals"), (std::vector<std::string>{"A(1)", "B(2)"}));
  EXPECT_EQ(c.range("x-range"), (std::pair<double, double>{-1.0, 2.0}));
  EXPECT_FALSE(c.has("out"));
  EXPECT_THROW(c.text("out"), ConfigError);
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  ExperimentConfig c("run", kKeys);
  EXPECT_THROW(c.set("bogus", "1"), ConfigError);
  c.set("n", "1.5");
  EXPECT_THROW(c.integer("n"), ConfigError);
  c.set("n", "12abc");
  EXPECT_THROW(c.number("n"), ConfigError);
  c.set("x-range", "3,1");
  EXPECT_THROW(c.range("x-range"), ConfigError);
}

TEST(Config, SectionsApplyToTheirCommandOnly) {
  const std::string path = write_temp(
      "# comment\n"
      "n = 5   # trailing comment\n"
      "[run]\n"
      "schedule = 2, 1\n"
      "[other]\n"
      "schedule = 9\n");
  const ConfigFile f = read_config_file(path, "run");
  EXPECT_EQ(f.global.at("n"), "5");
  EXPECT_EQ(f.section.at("schedule"), "2, 1");
  EXPECT_EQ(read_config_file(path, "other").section.at("schedule"), "9");
  std::remove(path.c_str());
}

TEST(Config, LaterValuesOverride) {
  ExperimentConfig c("run", kKeys);
  c.merge({{"n", "5"}});
  c.set("n", "7");
  EXPECT_EQ(c.integer("n"), 7);
}

TEST(Config, MalformedFiles) {
  EXPECT_THROW(read_config_file(testing::TempDir() + "does_not_exist.cfg", "run"), ConfigError);
  const std::string path = write_temp("just words\n");
  EXPECT_THROW(read_config_file(path, "run"), ConfigError);
  std::remove(path.c_str());
}

TEST(Commands, EveryCommandIsRegistered) {
  std::vector<std::string> names;
  for (const Command& c : commands()) names.push_back(c.name);
  EXPECT_EQ(names, (std::vector<std::string>{"area-check", "dirichlet", "degenerate", "chabauty-dist", "escape",
                                             "irs-estimate", "fiber-bound"}));
}

TEST(Commands, NonDecreasingScheduleIsAUsageError) {
  for (const Command& c : commands()) {
    if (c.name != "degenerate") continue;
    ExperimentConfig config(c.name, c.keys);
    config.set("schedule", "1, 0.5, 0.5");
    std::ostringstream out, err;
    EXPECT_THROW(c.run(config, out, err), ConfigError);
  }
}
