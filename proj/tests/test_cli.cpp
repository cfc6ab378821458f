#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli/commands.hpp"
#include "cli/config.hpp"

namespace fs = std::filesystem;
using namespace isospec;
using namespace isospec::cli;
using nlohmann::json;

namespace {

class ToolRun : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("isospec_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write_config(const json& j, const std::string& name = "config.json") {
    const auto p = dir_ / name;
    std::ofstream(p) << j.dump();
    return p;
  }

  int run(const std::string& args) {
    const std::string cmd = std::string("\"") + ISOSPEC_TOOL_PATH + "\" " + args + " > \"" +
                            (dir_ / "stdout.txt").string() + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  fs::path dir_;
};

}  // namespace

TEST(Config, DefaultsAndRoundTrip) {
  const auto c = parse_config(json::object());
  EXPECT_DOUBLE_EQ(c.a, std::acos(-1.0) / 4);
  EXPECT_EQ(c.nu, 1);
  EXPECT_EQ(c.alphas.size(), 4u);
  EXPECT_EQ(c.alphas.back(), (cplx{2.0, 3.0}));
  EXPECT_EQ(c.nystrom_n, 256u);
  EXPECT_EQ(c.spectrum.n_max, 20);
  const auto again = parse_config(to_json(c));
  EXPECT_EQ(to_json(again), to_json(c));
}

TEST(Config, ParsesComplexAlphas) {
  const auto c = parse_config(json{{"alphas", json::array({1.5, json::array({0.0, -2.0})})}});
  ASSERT_EQ(c.alphas.size(), 2u);
  EXPECT_EQ(c.alphas[0], cplx{1.5});
  EXPECT_EQ(c.alphas[1], (cplx{0.0, -2.0}));
}

TEST(Config, RejectsInvalidInput) {
  EXPECT_THROW((void)parse_config(json{{"bogus", 1}}), ConfigError);
  EXPECT_THROW((void)parse_config(json{{"grid", {{"nodes", 3}}}}), ConfigError);
  EXPECT_THROW((void)parse_config(json{{"a", 1.2}}), ConfigError);
  EXPECT_THROW((void)parse_config(json{{"nu", 2}}), ConfigError);
  EXPECT_THROW((void)parse_config(json{{"alphas", json::array()}}), ConfigError);
  EXPECT_THROW((void)parse_config(json{{"grid", {{"segment_nodes", 64}}}}), ConfigError);
  EXPECT_THROW((void)parse_config(json{{"grid", {{"steps_per_a", 6}}}}), ConfigError);
  EXPECT_THROW((void)parse_config(json{{"nystrom_n", 8}}), ConfigError);
  EXPECT_THROW((void)parse_config(json{{"potential", "other"}}), ConfigError);
  EXPECT_THROW((void)parse_config(json{{"a", "quarter"}}), ConfigError);
  EXPECT_THROW((void)load_config("/nonexistent/config.json"), ConfigError);
}

TEST(ValidationLambdas, Shape) {
  const auto ls = validation_lambdas();
  ASSERT_EQ(ls.size(), 70u);
  int real = 0;
  for (const auto l : ls) {
    if (l.imag() == 0.0) {
      ++real;
      EXPECT_GE(l.real(), -20.0);
      EXPECT_LE(l.real(), 400.0);
    } else {
      EXPECT_EQ(std::abs(l.imag()), 5.0);
    }
  }
  EXPECT_EQ(real, 60);
}

TEST(RunVerify, NystromEigenSourcePasses) {
  auto c = parse_config(json{{"eigen_source", "nystrom"}, {"alphas", json::array({0.0, 1.0})}});
  const auto r = run_verify(c);
  for (const auto& e : r.checks) EXPECT_TRUE(e.pass) << e.check_name << " " << e.max_residual;
}

TEST(RunVerify, MeanShiftFailsOnlyAffectedChecks) {
  auto c = parse_config(json{{"e_shift", 0.5}, {"alphas", json::array({0.0, 1.0})}});
  const auto r = run_verify(c);
  EXPECT_FALSE(r.pass());
  for (const auto& e : r.checks) {
    if (e.check_name == "zero_mean" || e.check_name == "transfer_integral" || e.check_name == "w_alpha_invariance" ||
        e.check_name == "eigenpair_apply") {
      EXPECT_FALSE(e.pass) << e.check_name;
    } else {
      EXPECT_TRUE(e.pass) << e.check_name;
    }
  }
}

TEST_F(ToolRun, VerifyDefaultPasses) {
  EXPECT_EQ(run("verify --out \"" + (dir_ / "out").string() + "\""), kExitPass) << slurp(dir_ / "stdout.txt");
  const auto report = json::parse(slurp(dir_ / "out" / "verify.json"));
  EXPECT_EQ(report["command"], "verify");
  ASSERT_TRUE(report["checks"].is_array());
  EXPECT_GE(report["checks"].size(), 9u);
  for (const auto& c : report["checks"]) {
    EXPECT_TRUE(c["pass"].get<bool>()) << c.dump();
    EXPECT_TRUE(c.contains("check_name") && c.contains("max_residual") && c.contains("tolerance"));
  }
}

TEST_F(ToolRun, BadDelayIsAConfigError) {
  const auto cfg = write_config(json{{"a", 1.2}});
  EXPECT_EQ(run("verify --config \"" + cfg.string() + "\" --out \"" + (dir_ / "out").string() + "\""),
            kExitConfigError);
  EXPECT_EQ(run("verify --config \"" + (dir_ / "missing.json").string() + "\""), kExitConfigError);
}

TEST_F(ToolRun, TamperedKernelFailsChecks) {
  const auto cfg = write_config(json{{"h_scale", 1.01}, {"alphas", json::array({0.0, 1.0})}});
  EXPECT_EQ(run("verify --config \"" + cfg.string() + "\" --out \"" + (dir_ / "out").string() + "\""),
            kExitCheckFailed);
  const auto report = json::parse(slurp(dir_ / "out" / "verify.json"));
  bool eigen_failed = false;
  for (const auto& c : report["checks"]) {
    if (c["check_name"] == "eigenpair_apply") eigen_failed = !c["pass"].get<bool>();
  }
  EXPECT_TRUE(eigen_failed);
}

TEST_F(ToolRun, FamilyWritesOneCsvPerAlpha) {
  const auto cfg = write_config(json{{"alphas", json::array({0.0, 1.0})}});
  ASSERT_EQ(run("family --config \"" + cfg.string() + "\" --out \"" + (dir_ / "out").string() + "\""), kExitPass);
  EXPECT_TRUE(fs::exists(dir_ / "out" / "q_alpha0.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "out" / "q_alpha1.csv"));
  EXPECT_FALSE(fs::exists(dir_ / "out" / "q_alpha2.csv"));
  const auto manifest = json::parse(slurp(dir_ / "out" / "family.json"));
  EXPECT_EQ(manifest["omega_per_alpha"].size(), 2u);
  EXPECT_TRUE(manifest["zero_mean_flag"].get<bool>());
}

TEST_F(ToolRun, OutputsAreDeterministic) {
  const auto cfg = write_config(json{{"alphas", json::array({0.0, json::array({2.0, 3.0})})}, {"seed", 7}});
  for (const std::string cmd : {"verify", "family", "fredholm"}) {
    ASSERT_EQ(run(cmd + " --config \"" + cfg.string() + "\" --out \"" + (dir_ / "a").string() + "\""), kExitPass);
    ASSERT_EQ(run(cmd + " --config \"" + cfg.string() + "\" --out \"" + (dir_ / "b").string() + "\""), kExitPass);
  }
  int files = 0;
  for (const auto& entry : fs::directory_iterator(dir_ / "a")) {
    ++files;
    EXPECT_EQ(slurp(entry.path()), slurp(dir_ / "b" / entry.path().filename())) << entry.path().filename();
  }
  EXPECT_GE(files, 5);
}

TEST_F(ToolRun, SpectrumWritesCsvPerAlphaAndJ) {
  const auto cfg = write_config(json{{"alphas", json::array({0.0})}, {"spectrum", {{"n_max", 5}}}});
  ASSERT_EQ(run("spectrum --config \"" + cfg.string() + "\" --out \"" + (dir_ / "out").string() + "\""), kExitPass)
      << slurp(dir_ / "stdout.txt");
  for (const char* name : {"spectrum_alpha0_j0.csv", "spectrum_alpha0_j1.csv", "spectrum.json"}) {
    EXPECT_TRUE(fs::exists(dir_ / "out" / name)) << name;
  }
  EXPECT_EQ(slurp(dir_ / "out" / "spectrum_alpha0_j0.csv").rfind("n,re_lambda,im_lambda,residual\n", 0), 0u);
}

TEST_F(ToolRun, UnknownSubcommandIsRejected) {
  EXPECT_NE(run("frobnicate"), kExitPass);
}
