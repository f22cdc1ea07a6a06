#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "ergopt/cli.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    std::random_device rd;
    dir_ = fs::temp_directory_path() / ("ergopt-cli-" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(dir_);
    write("two_step.json", R"({"depth": 2, "values": {"00": 0.1, "01": 0.9, "10": 0.3, "11": 0.2}})");
    write("golden.json", R"({"alphabet": 2, "transitions": [[1, 1], [1, 0]]})");
  }
  void TearDown() override { fs::remove_all(dir_); }

  void write(const std::string& name, const std::string& text) { std::ofstream(dir_ / name) << text; }
  std::string read(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  int run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return ergopt::cli::run(args, out_, err_);
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

}  // namespace

TEST_F(Cli, MaximizeWritesResult) {
  ASSERT_EQ(run({"maximize", "--potential", path("two_step.json"), "--max-period", "6", "--out", path("o")}), 0)
      << err_.str();
  const auto j = json::parse(read(dir_ / "o" / "maximize.json"));
  EXPECT_NEAR(j.at("m0").get<double>(), 0.6, 1e-15);
  EXPECT_EQ(j.at("critical_cycles"), json::array({"01"}));
  EXPECT_EQ(j.at("brute_force").at("argmax"), json::array({"01"}));
  EXPECT_NE(out_.str().find("maximize.json"), std::string::npos);
}

TEST_F(Cli, MissingInputIsValidationErrorWithoutOutputs) {
  EXPECT_EQ(run({"maximize", "--potential", path("nope.json"), "--out", path("o")}), 1);
  EXPECT_FALSE(fs::exists(dir_ / "o"));
  EXPECT_FALSE(err_.str().empty());
  write("broken.json", "{\"depth\": 2, ");
  EXPECT_EQ(run({"pressure", "--potential", path("broken.json"), "--out", path("o")}), 1);
  EXPECT_FALSE(fs::exists(dir_ / "o"));
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run({}), 1);
  EXPECT_EQ(run({"frobnicate"}), 1);
  EXPECT_EQ(run({"maximize", "--depth", "99"}), 1);
  EXPECT_EQ(run({"maximize", "--help"}), 0);
}

TEST_F(Cli, InadmissibleWordInPotentialIsRejected) {
  write("bad.json", R"({"depth": 2, "values": {"00": 0, "01": 0, "10": 0, "11": 1}})");
  EXPECT_EQ(run({"maximize", "--potential", path("bad.json"), "--subshift", path("golden.json"), "--out", path("o")}),
            1);
}

TEST_F(Cli, ComputationErrorExitsTwo) {
  write("measures.json", R"({"cycles": ["0", "1", "01"], "target": 2})");
  EXPECT_EQ(run({"separate", "--measures", path("measures.json"), "--depth", "1", "--out", path("o")}), 2)
      << err_.str();
  EXPECT_NE(err_.str().find("NotExtreme"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir_ / "o" / "separate.json"));
}

TEST_F(Cli, ZeroTemperatureCsv) {
  ASSERT_EQ(run({"zerotemp", "--potential", path("two_step.json"), "--t", "1,4,16", "--out", path("o")}), 0)
      << err_.str();
  std::istringstream csv(read(dir_ / "o" / "zerotemp.csv"));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "t,pressure,entropy,energy,distance_to_candidate");
  int rows = 0;
  while (std::getline(csv, line)) ++rows;
  EXPECT_EQ(rows, 3);
}

TEST_F(Cli, PressureAndEquilibrium) {
  ASSERT_EQ(run({"pressure", "--potential", path("two_step.json"), "--t", "0", "--out", path("o")}), 0) << err_.str();
  const auto p = json::parse(read(dir_ / "o" / "pressure.json"));
  EXPECT_NE(p.dump().find("0.69314718055994"), std::string::npos);
  ASSERT_EQ(run({"equilibrium", "--potential", path("two_step.json"), "--out", path("o")}), 0) << err_.str();
  EXPECT_TRUE(fs::exists(dir_ / "o" / "equilibrium.json"));
}

TEST_F(Cli, SubactionManeAubryShadow) {
  for (const char* cmd : {"subaction", "mane", "aubry", "shadow"})
    EXPECT_EQ(run({cmd, "--potential", path("two_step.json"), "--delta", "0.1", "--seed", "3", "--out", path("o")}), 0)
        << cmd << ": " << err_.str();
  const auto aub = json::parse(read(dir_ / "o" / "aubry.json"));
  EXPECT_NE(aub.dump().find("\"01\""), std::string::npos);
  EXPECT_TRUE(fs::exists(dir_ / "o" / "shadow.json"));
}

TEST_F(Cli, CircleCommands) {
  write("map.json", R"({"kind": "builtin", "name": "perturbed_doubling", "epsilon": 0.5})");
  ASSERT_EQ(run({"circle-encode", "--map", path("map.json"), "--depth", "4", "--out", path("o")}), 0) << err_.str();
  ASSERT_EQ(run({"lyapmax", "--map", path("map.json"), "--depth", "5", "--max-period", "6", "--out", path("o")}), 0)
      << err_.str();
  EXPECT_TRUE(fs::exists(dir_ / "o" / "lyapmax.csv"));
  const auto lj = json::parse(read(dir_ / "o" / "lyapmax.json"));
  EXPECT_NE(lj.dump().find("\"0\""), std::string::npos);
  write("flat.json", R"({"depth": 1, "values": {"0": -0.6931471805599453, "1": -0.6931471805599453}})");
  ASSERT_EQ(run({"circle-decode", "--potential", path("flat.json"), "--depth", "6", "--out", path("o")}), 0)
      << err_.str();
  write("notzero.json", R"({"depth": 1, "values": {"0": 0, "1": 0}})");
  EXPECT_EQ(run({"circle-decode", "--potential", path("notzero.json"), "--out", path("p")}), 1);
  EXPECT_FALSE(fs::exists(dir_ / "p"));
}

TEST_F(Cli, LockOrbit) {
  ASSERT_EQ(run({"lock-orbit", "--potential", path("two_step.json"), "--cycle", "001", "--out", path("o")}), 0)
      << err_.str();
  EXPECT_TRUE(fs::exists(dir_ / "o" / "lock-orbit.json"));
  EXPECT_EQ(run({"lock-orbit", "--potential", path("two_step.json"), "--cycle", "001", "--beta", "0.9", "--out",
                 path("p")}),
            1);
}

TEST_F(Cli, GenericityIsByteIdenticalAcrossRuns) {
  const std::vector<std::string> base{"genericity", "--subshift", path("golden.json"), "--depth", "2",
                                      "--samples", "25", "--max-period", "8", "--seed", "11", "--out"};
  auto a = base, b = base;
  a.push_back(path("a"));
  b.push_back(path("b"));
  ASSERT_EQ(run(a), 0) << err_.str();
  ASSERT_EQ(run(b), 0) << err_.str();
  const std::string ta = read(dir_ / "a" / "genericity.csv");
  EXPECT_EQ(ta, read(dir_ / "b" / "genericity.csv"));
  EXPECT_EQ(ta.substr(0, ta.find('\n')), "sample_id,m0,unique_flag,period,gap");
  EXPECT_EQ(std::count(ta.begin(), ta.end(), '\n'), 26);
}

TEST_F(Cli, ShadowReadsPointFiles) {
  write("po.json", R"([{"preperiod": "", "cycle": "0"}, {"preperiod": "0001", "cycle": "0"}, {"cycle": "0"}])");
  ASSERT_EQ(run({"shadow", "--potential", path("two_step.json"), "--points", path("po.json"), "--out", path("o")}), 0)
      << err_.str();
  const auto j = json::parse(read(dir_ / "o" / "shadow.json"));
  EXPECT_EQ(j.at("jumps"), json::array({0, 1}));
  EXPECT_EQ(j.at("closed"), true);
  write("po2.json", R"j({"points": ["(0)", "0001(0)", "001(0)"]})j");
  ASSERT_EQ(run({"shadow", "--potential", path("two_step.json"), "--points", path("po2.json"), "--out", path("p")}), 0)
      << err_.str();
  write("po3.json", R"({"points": ["0001"]})");
  EXPECT_EQ(run({"shadow", "--potential", path("two_step.json"), "--points", path("po3.json"), "--out", path("q")}), 1);
}
