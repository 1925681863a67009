#include <gtest/gtest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "commands.hpp"
#include "fairuc/instance_io.hpp"
#include "oracles.hpp"

namespace fairuc {
namespace {

namespace fs = std::filesystem;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("fairuc_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(std::vector<std::string> args) {
    args.insert(args.begin(), "fairuc");
    std::vector<const char*> argv;
    for (const std::string& a : args) argv.push_back(a.c_str());
    out_.str("");
    err_.str("");
    return cli::run_command(static_cast<int>(argv.size()), argv.data(), out_, err_);
  }

  std::string write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

TEST_F(Cli, ExitCodes) {
  const std::string good = std::string(FAIRUC_DATA_DIR) + "/asymmetric_3pv.json";
  EXPECT_EQ(run({"check", good}), 0);
  EXPECT_NE(out_.str().find("ok:"), std::string::npos);
  EXPECT_EQ(run({"check", std::string(FAIRUC_DATA_DIR) + "/bad_instance.json"}), 1);
  EXPECT_NE(out_.str().find("p_min"), std::string::npos);
  EXPECT_EQ(run({"check", write("trunc.json", slurp(good).substr(0, 120))}), 1);
  EXPECT_NE(err_.str().find("line"), std::string::npos);
  EXPECT_EQ(run({"check", good, "--bogus"}), 2);
  EXPECT_EQ(run({}), 2);
  EXPECT_EQ(run({"solve", good, "--backend", "other"}), 2);
  EXPECT_EQ(run({"solve", good, "--chi", "-1"}), 2);
  EXPECT_EQ(run({"--help"}), 0);
}

TEST_F(Cli, SolvedPlanReparsesAndIsFeasible) {
  std::mt19937_64 rng(89);
  const SystemInstance in = testing::random_small_instance(rng);
  const std::string inst = write("in.json", serialize_instance(in));
  ASSERT_EQ(run({"solve", inst, "--chi", "100", "--out-dir", (dir_ / "s").string()}), 0)
      << err_.str();
  const CommitmentPlan plan = parse_plan((dir_ / "s" / "plan.json").string());
  const CommitmentPlan again = parse_plan((dir_ / "s" / "result.json").string());
  EXPECT_EQ(plan.on, again.on);
  EXPECT_EQ(plan.curtail, again.curtail);
  EXPECT_TRUE(check_commitment(in, plan).ok());
  EXPECT_TRUE(dispatch_feasibility(in, plan).feasible);
  const std::string trace = slurp(dir_ / "s" / "trace.csv");
  EXPECT_EQ(trace.rfind("iteration,lower,upper,best_upper,gap", 0), 0u);

  ASSERT_EQ(run({"dispatch", inst, (dir_ / "s" / "plan.json").string(), "--out-dir",
                 (dir_ / "d").string()}),
            0)
      << err_.str();
  EXPECT_TRUE(fs::exists(dir_ / "d" / "dispatch.json"));
  const std::string real = (dir_ / "d" / "realization.json").string();
  EXPECT_TRUE(check_realization(in, parse_realization_text(slurp(real))).ok());
  EXPECT_EQ(run({"dispatch", inst, (dir_ / "s" / "plan.json").string(), "--realization", real,
                 "--out-dir", (dir_ / "e").string()}),
            0);
  EXPECT_EQ(slurp(dir_ / "d" / "dispatch.json"), slurp(dir_ / "e" / "dispatch.json"));
}

TEST_F(Cli, SweepWritesOneRowPerChi) {
  std::mt19937_64 rng(97);
  const std::string inst = write("in.json", serialize_instance(testing::random_small_instance(rng)));
  ASSERT_EQ(run({"sweep-chi", inst, "--chi-list", "0,1,10,100", "--samples", "50", "--out-dir",
                 dir_.string()}),
            0)
      << err_.str();
  const std::string csv = slurp(dir_ / "chi_sweep.csv");
  EXPECT_EQ(csv.rfind("chi,total_cost,mean_gini\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
}

}  // namespace
}  // namespace fairuc
