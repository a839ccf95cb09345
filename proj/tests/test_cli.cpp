#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <sys/wait.h>

#include <gtest/gtest.h>

#include "lyap/io.hpp"

namespace {

using lyap::json;

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(LYAP_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

TEST(Cli, GammaReport) {
  const auto r = run("gamma --t 1 --x 0,0.5 --m 1,1");
  ASSERT_EQ(r.status, 0);
  const auto j = json::parse(r.out);
  EXPECT_NEAR(j["gamma1"].get<double>(), -0.0625, 1e-15);
  EXPECT_NEAR(j["gamma3"].get<double>(), -0.0625, 1e-15);
  EXPECT_TRUE(j["structure_ok"].get<bool>());

  const auto single = run("gamma --t 1 --x 0 --m 1");
  ASSERT_EQ(single.status, 0);
  EXPECT_EQ(json::parse(single.out)["gamma2"].get<double>(), 0.0);
}

TEST(Cli, InvalidInputIsMachineReadable) {
  const auto r = run("gamma --t -1 --x 0 --m 1");
  EXPECT_EQ(r.status, 1);
  EXPECT_EQ(json::parse(r.out)["error"], "NonPositiveTime");

  EXPECT_EQ(run("gamma --t 1 --x 0,0 --m 1,1").status, 1);
  EXPECT_EQ(run("gamma --t 1 --x 0 --m 1 --input foo.json").status, 1);
  EXPECT_EQ(run("gamma --x 0 --m 1").status, 1);
  EXPECT_EQ(run("nosuchcommand").status, 1);
}

TEST(Cli, InputFile) {
  const auto r = run(std::string("gamma --input ") + LYAP_SAMPLES_DIR + "/fig2_instance.json");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(json::parse(r.out)["partition"], json::parse("[[1,2,3],[4,5]]"));
}

TEST(Cli, ClustersExport) {
  const auto none = run("clusters --t 1 --x 0,2 --m 1,1");
  ASSERT_EQ(none.status, 0);
  const auto j = json::parse(none.out);
  EXPECT_TRUE(j["events"].empty());
  EXPECT_EQ(j["paths"].size(), 2u);

  const auto flat = run("clusters --t 1 --x 0 --m 4 --format csv");
  ASSERT_EQ(flat.status, 0);
  EXPECT_EQ(flat.out, "index,s,zeta,xi\n1,0,0,0\n1,1,0,0\n");

  const auto path = std::filesystem::temp_directory_path() / "lyap_clusters_test.csv";
  ASSERT_EQ(run("clusters --t 1 --x 0,0.5 --m 1,1 --format csv --output " + path.string()).status, 0);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "index,s,zeta,xi");
  std::filesystem::remove(path);

  EXPECT_EQ(run("clusters --t 1 --x 0 --m 1 --output /nonexistent-dir/out.json").status, 1);
}

TEST(Cli, Verify) {
  const auto r = run("verify --seed 0 --count 20");
  EXPECT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("triple: 20 passed, 0 failed [PASS]"), std::string::npos) << r.out;

  const auto quad = run("verify --suites quadrature --count 5 --format json");
  ASSERT_EQ(quad.status, 0);
  const auto j = json::parse(quad.out);
  ASSERT_EQ(j["suites"].size(), 1u);
  EXPECT_EQ(j["suites"][0]["suite"], "quadrature");
  EXPECT_EQ(j["suites"][0]["passed"], 5);

  const auto empty = run("verify --count 0");
  EXPECT_EQ(empty.status, 0);

  EXPECT_EQ(run("verify --suites bogus").status, 1);
}

TEST(Cli, Moments) {
  const auto r = run("moments --t 1 --x 0 --m 1 --T 10 --points 400");
  ASSERT_EQ(r.status, 0) << r.out;
  const auto j = json::parse(r.out);
  EXPECT_NEAR(j["rate"].get<double>(), -0.1 * 0.5 * std::log(20.0 * M_PI), 1e-10);
  EXPECT_EQ(j["gamma"].get<double>(), 0.0);
  for (const char* key : {"moment", "rate", "gamma", "gap", "imag_residual"}) EXPECT_TRUE(j.contains(key));

  EXPECT_EQ(run("moments --t 1 --x 0 --m 2 --T 4 --offsets 0.5,-0.5").status, 1);
  EXPECT_EQ(json::parse(run("moments --t 1 --x 0 --m 4 --T 4").out)["error"], "NuTooLarge");
}

TEST(Cli, SweepLocation) {
  const auto r = run("sweep --t 1 --x 0,0.5 --m 1,1 --param x2 --from 0.1 --to 3 --steps 30");
  ASSERT_EQ(r.status, 0);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "parameter,gamma,q_hat,s0");
  int rows = 0;
  while (std::getline(lines, line)) {
    double p = 0, g = 0;
    int q = 0;
    ASSERT_EQ(std::sscanf(line.c_str(), "%lf,%lf,%d", &p, &g, &q), 3);
    const double want = p <= 1.0 ? lyap::corollary_n2_merged(1, 0, p, 1, 1) : lyap::corollary_n2_separated(1, 0, p, 1, 1);
    EXPECT_NEAR(g, want, 1e-12);
    EXPECT_EQ(q, p <= 1.0 ? 1 : 2);
    ++rows;
  }
  EXPECT_EQ(rows, 30);
}

TEST(Cli, SweepTime) {
  const auto r = run("sweep --t 1 --x 0,1 --m 1,1 --param t --from 0.1 --to 4 --steps 40 --format json");
  ASSERT_EQ(r.status, 0);
  for (const auto& row : json::parse(r.out)) {
    const double t = row["parameter"].get<double>();
    EXPECT_EQ(row["q_hat"].get<int>(), t >= 1.0 ? 1 : 2) << t;
    EXPECT_EQ(row["s0"].is_null(), t < 1.0);
  }
}

TEST(Cli, SweepEdgeCases) {
  const auto empty = run("sweep --t 1 --x 0,1 --m 1,1 --param t --from 0.1 --to 4 --steps 0");
  EXPECT_EQ(empty.status, 0);
  EXPECT_EQ(empty.out, "parameter,gamma,q_hat,s0\n");
  EXPECT_EQ(run("sweep --t 1 --x 0,1 --m 1,1 --param y --from 0 --to 1 --steps 3").status, 1);
  EXPECT_EQ(run("sweep --t 1 --x 0,1 --m 1,1 --param x3 --from 0 --to 1 --steps 3").status, 1);
  EXPECT_EQ(run("sweep --t 1 --x 0,1 --m 1,1 --param x2 --from -1 --to 1 --steps 3").status, 1);
}

TEST(Cli, Deterministic) {
  const std::string args = "verify --seed 7 --count 30 --format json";
  EXPECT_EQ(run(args).out, run(args).out);
  const std::string sweep = "sweep --t 1 --x 0,1 --m 2,1 --param t --from 0.2 --to 3 --steps 25";
  EXPECT_EQ(run(sweep).out, run("sweep --t 1 --x 0,1 --m 2,1 --param t --from 0.2 --to 3 --steps 25").out);
}

}  // namespace
