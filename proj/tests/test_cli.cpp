#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "tsera/cli.hpp"
#include "tsera/io.hpp"

using namespace tsera;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("tsera_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kSmall =
    "[experiment]\nshape = 15 5 4\nreplications = 4\nthreads = 2\n";

}  // namespace

TEST(Cli, UsageErrors) {
  EXPECT_EQ(cli({}).code, kExitUsage);
  EXPECT_EQ(cli({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(cli({"sera", "--pairs", "x.csv"}).code, kExitUsage);
  EXPECT_EQ(cli({"sera", "--pairs", "x.csv", "--out", "y.csv", "--alpha", "1.5"}).code, kExitUsage);
  EXPECT_EQ(cli({"sera", "--pairs", "x.csv", "--out", "y.csv", "--bogus"}).code, kExitUsage);
  EXPECT_EQ(cli({"--help"}).code, kExitOk);
}

TEST(Cli, SeraAllNull) {
  const auto dir = scratch("sera_null");
  atomic_write(dir / "pairs.csv", "p,U\n1,0.5\n1,0.5\n1,0.5\n1,0.5\n");
  const auto r = cli({"sera", "--pairs", (dir / "pairs.csv").string(), "--alpha", "0.05", "--out",
                      (dir / "out.csv").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto table = read_csv(dir / "out.csv");
  EXPECT_EQ(table.numeric("reject").sum(), 0.0);
  EXPECT_EQ(table.rows.size(), 4u);
}

TEST(Cli, SeraDataErrorsWriteNothing) {
  const auto dir = scratch("sera_bad");
  atomic_write(dir / "pairs.csv", "q,U\n1,0.5\n");
  EXPECT_EQ(cli({"sera", "--pairs", (dir / "pairs.csv").string(), "--out", (dir / "o.csv").string()}).code,
            kExitData);
  EXPECT_EQ(cli({"sera", "--pairs", (dir / "none.csv").string(), "--out", (dir / "o.csv").string()}).code,
            kExitData);
  atomic_write(dir / "p.csv", "p,U\n1.5,0.5\n0.1,0.2\n");
  EXPECT_EQ(cli({"sera", "--pairs", (dir / "p.csv").string(), "--out", (dir / "o.csv").string()}).code,
            kExitData);
  EXPECT_FALSE(fs::exists(dir / "o.csv"));
}

TEST(Cli, SimulateThenTest) {
  const auto dir = scratch("simtest");
  atomic_write(dir / "c.ini", kSmall);
  auto r = cli({"simulate", "--config", (dir / "c.ini").string(), "--out", (dir / "data").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(fs::exists(dir / "data" / "truth.csv"));
  EXPECT_EQ(read_csv(dir / "data" / "truth.csv").rows.size(), 105u);

  const std::string g1 = (dir / "data" / "group1.manifest").string();
  const std::string g2 = (dir / "data" / "group2.manifest").string();
  r = cli({"test", "--group1", g1, "--group2", g2, "--mode", "1", "--scenario", "corr", "--alpha", "0.05",
           "--out", (dir / "t.csv").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto t = read_csv(dir / "t.csv");
  EXPECT_EQ(t.header, (std::vector<std::string>{"i", "j", "rho1", "rho2", "T", "U", "p", "pi_hat",
                                                "p_weighted", "reject"}));
  EXPECT_EQ(t.rows.size(), 105u);

  r = cli({"test", "--group1", g1, "--group2", g2, "--mode", "1", "--scenario", "pcorr", "--out",
           (dir / "pc.csv").string(), "--oracle-sigmas", (dir / "data" / "sigma1_mode2.tensor").string(),
           (dir / "data" / "sigma1_mode3.tensor").string(), (dir / "data" / "sigma2_mode2.tensor").string(),
           (dir / "data" / "sigma2_mode3.tensor").string()});
  EXPECT_EQ(r.code, kExitOk) << r.err;

  r = cli({"test", "--group1", g1, "--group2", g2, "--mode", "4", "--out", (dir / "x.csv").string()});
  EXPECT_EQ(r.code, kExitData);
  r = cli({"test", "--group1", g1, "--group2", g2, "--mode", "1", "--out", (dir / "y.csv").string(),
           "--oracle-sigmas", (dir / "data" / "sigma1_mode2.tensor").string()});
  EXPECT_EQ(r.code, kExitData);
  EXPECT_FALSE(fs::exists(dir / "x.csv"));
  EXPECT_FALSE(fs::exists(dir / "y.csv"));
}

TEST(Cli, TestOnIdenticalGroupsRejectsLittle) {
  const auto dir = scratch("nulltest");
  Index total = 0;
  for (int seed = 1; seed <= 5; ++seed) {
    atomic_write(dir / "c.ini", "[experiment]\nshape = 20 6 5\ndesign = band/band\nn1 = 4\nn2 = 4\nseed = " +
                                    std::to_string(seed) + "\n");
    ASSERT_EQ(cli({"simulate", "--config", (dir / "c.ini").string(), "--out", (dir / "d").string()}).code, 0);
    const auto r = cli({"test", "--group1", (dir / "d" / "group1.manifest").string(), "--group2",
                        (dir / "d" / "group2.manifest").string(), "--mode", "1", "--out",
                        (dir / "t.csv").string()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    total += static_cast<Index>(read_csv(dir / "t.csv").numeric("reject").sum());
  }
  EXPECT_LE(total, 5);
}

TEST(Cli, BenchIsDeterministic) {
  const auto dir = scratch("bench");
  atomic_write(dir / "c.ini", kSmall);
  ASSERT_EQ(cli({"bench", "--config", (dir / "c.ini").string(), "--out", (dir / "a.csv").string()}).code, 0);
  ASSERT_EQ(cli({"bench", "--config", (dir / "c.ini").string(), "--out", (dir / "b.csv").string(),
                 "--threads", "1"}).code,
            0);
  EXPECT_EQ(slurp(dir / "a.csv"), slurp(dir / "b.csv"));
  const auto t = read_csv(dir / "a.csv");
  EXPECT_EQ(t.header.size(), 11u);
  EXPECT_EQ(t.rows[0][9], "NA");
  EXPECT_NE(slurp(dir / "a.csv").find("# master_seed 20240501"), std::string::npos);
  EXPECT_EQ(cli({"bench", "--config", (dir / "missing.ini").string(), "--out", (dir / "c.csv").string()}).code,
            kExitData);
}
