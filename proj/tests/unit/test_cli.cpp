#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "wattspell/cli/commands.hpp"
#include "wattspell/cli/run_config.hpp"
#include "wattspell/data/synth.hpp"

using namespace wspl;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("wspl_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  /// A short noiseless scene and a tiny model so a full run takes a moment.
  void small_setup() {
    write(dir_ / "spec.json", to_json(reference_household(1500, 2.0, 3)).dump());
    ASSERT_EQ(run({"synth", "--spec", (dir_ / "spec.json").string(), "--out", (dir_ / "scene.csv").string()}).code, 0);
    write(dir_ / "cfg.json",
          R"({"window_len": 16, "conv_filters": 4, "hidden": 4, "attention_width": 8, "epochs": 1, "batch_size": 16})");
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, EmptyConfigGivesDefaults) {
  write(dir_ / "c.json", "{}");
  const RunConfig c = load_config(dir_ / "c.json");
  EXPECT_EQ(c.model, ModelConfig{});
  EXPECT_EQ(c.model.epochs, 20u);
  EXPECT_EQ(run_config_from_json(to_json(c)).model, c.model);
}

TEST_F(CliTest, OverrideTouchesOnlyNamedKey) {
  write(dir_ / "c.json", R"({"epochs": 5})");
  RunConfig expected;
  expected.model.epochs = 5;
  EXPECT_EQ(to_json(load_config(dir_ / "c.json")), to_json(expected));
}

TEST_F(CliTest, UnknownKeyIsNamed) {
  try {
    run_config_from_json(nlohmann::json::parse(R"({"epochz": 5})"));
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("epochz"), std::string::npos) << e.what();
  }
}

TEST_F(CliTest, TypeMismatchNamesExpectedType) {
  try {
    run_config_from_json(nlohmann::json::parse(R"({"split_ratio": "high"})"));
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("split_ratio"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("number"), std::string::npos) << e.what();
  }
}

TEST_F(CliTest, UnknownSubcommandIsUsageError) { EXPECT_EQ(run({"frobnicate"}).code, kExitUsage); }

TEST_F(CliTest, BadConfigFileIsUsageError) {
  write(dir_ / "c.json", R"({"epochz": 5})");
  const CliRun r = run({"train", "--config", (dir_ / "c.json").string(), "--input", "x.csv"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("epochz"), std::string::npos) << r.err;
}

TEST_F(CliTest, MissingInputIsDataError) {
  const std::string missing = (dir_ / "no_such_scene.csv").string();
  const CliRun r = run({"train", "--input", missing, "--out", (dir_ / "run").string()});
  EXPECT_EQ(r.code, kExitData);
  EXPECT_NE(r.err.find(missing), std::string::npos) << r.err;
}

TEST_F(CliTest, SynthWritesSceneAndManifest) {
  const fs::path out = dir_ / "s.csv";
  const CliRun r = run({"synth", "--out", out.string(), "--seed", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(out));
  const auto manifest = nlohmann::json::parse(slurp(out.string() + ".manifest.json"));
  EXPECT_EQ(manifest.at("toolkit_version"), kToolkitVersion);
  EXPECT_EQ(slurp(out).rfind("timestamp,aggregate,refrigerator", 0), 0u);
}

TEST_F(CliTest, GradcheckPasses) {
  const CliRun r = run({"gradcheck", "--seeds", "2"});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_NE(r.out.find("bilstm"), std::string::npos);
}

TEST_F(CliTest, TrainThenEvalReproducesReport) {
  small_setup();
  const fs::path run_dir = dir_ / "run";
  const CliRun t = run({"train", "--config", (dir_ / "cfg.json").string(), "--input", (dir_ / "scene.csv").string(),
                     "--out", run_dir.string()});
  ASSERT_EQ(t.code, 0) << t.err;
  for (const char* f : {"config.json", "loss.csv", "model.ckpt", "norm.json", "report.csv", "timing.json", "manifest.json",
                        "plot_refrigerator.csv"}) {
    EXPECT_TRUE(fs::exists(run_dir / f)) << f;
  }
  const auto manifest = nlohmann::json::parse(slurp(run_dir / "manifest.json"));
  EXPECT_EQ(manifest.at("seed"), 42);
  EXPECT_EQ(slurp(run_dir / "loss.csv").substr(0, 26), "epoch,train_loss,val_loss\n");

  const CliRun e = run({"eval", "--manifest", (run_dir / "manifest.json").string()});
  ASSERT_EQ(e.code, 0) << e.err;
  EXPECT_EQ(slurp(run_dir / "eval" / "report.csv"), slurp(run_dir / "report.csv"));

  write(dir_ / "agg.csv", "timestamp,aggregate\n0,100\n10,120\n20,1300\n30,1290\n40,160\n50,150\n60,150\n70,140\n"
                          "80,150\n90,150\n100,150\n110,150\n120,150\n130,150\n140,150\n150,150\n160,150\n170,150\n");
  const CliRun d = run({"disaggregate", "--checkpoint", (run_dir / "model.ckpt").string(), "--input",
                     (dir_ / "agg.csv").string(), "--out", (dir_ / "est").string()});
  ASSERT_EQ(d.code, 0) << d.err;
  EXPECT_TRUE(fs::exists(dir_ / "est" / "estimate_refrigerator.csv"));
}

TEST_F(CliTest, EvalDetectsChangedScene) {
  small_setup();
  const fs::path run_dir = dir_ / "run";
  ASSERT_EQ(run({"train", "--config", (dir_ / "cfg.json").string(), "--input", (dir_ / "scene.csv").string(), "--out",
                 run_dir.string()})
                .code,
            0);
  std::ofstream(dir_ / "scene.csv", std::ios::app) << "\n";
  EXPECT_EQ(run({"eval", "--manifest", (run_dir / "manifest.json").string()}).code, kExitData);
}
