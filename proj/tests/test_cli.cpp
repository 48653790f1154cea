#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "support.hpp"

using namespace treeperm;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args, bool merge_stderr = false) {
  std::string cmd = std::string(TREEPERM_CLI) + " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return {-1, ""};
  std::string out;
  char buf[4096];
  while (std::size_t k = fread(buf, 1, sizeof buf, p)) out.append(buf, k);
  int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string data(const std::string& name) { return std::string(TREEPERM_DATA_DIR) + "/" + name; }

std::string scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "treeperm_cli_test";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

} // namespace

TEST(Cli, PermanentOfIdentity) {
  auto r = run("compute --fn perm --input " + data("id4.tns") + " --heuristic min-fill");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "1\n");
}

TEST(Cli, GridWithOracle) {
  auto r = run("compute --fn perm --input " + data("fig2grid.tns") + " --heuristic min-fill --oracle");
  EXPECT_EQ(r.code, 0);
  auto m = grid_matrix<Integer>(3);
  EXPECT_EQ(r.out, oracle::ryser_permanent(m).get_str() + "\noracle: match\n");
}

TEST(Cli, HyperdeterminantNeedsEvenOrder) {
  auto r = run("compute --fn hyperdet --input " + data("order3.tns"), true);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("hyperdeterminant requires even tensor order"), std::string::npos) << r.out;
}

TEST(Cli, GeneratedBandDeterminant) {
  const auto path = scratch("band6.tns");
  ASSERT_EQ(run("gen band --n 6 --w1 1 --w2 1 --seed 3 --output " + path).code, 0);
  auto m = parse_tensor<Integer>(slurp(path));
  auto r = run("compute --fn det --input " + path);
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, oracle::exact_determinant(m).get_str() + "\n");
}

TEST(Cli, GeneratedGridMatchesFamily) {
  auto r = run("gen grid --m 3");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(parse_tensor<Integer>(r.out), grid_matrix<Integer>(3));
  EXPECT_EQ(r.out, slurp(data("fig2grid.tns")));
}

TEST(Cli, GeneratedSubsetSum) {
  auto r = run("gen subset-sum --a 1,-1 --delta 0");
  EXPECT_EQ(r.code, 0);
  auto zs = parse_zonotopes(r.out);
  EXPECT_EQ(zs.dimension(), 3u);
  EXPECT_EQ(zs, subset_sum_instance({Integer(1), Integer(-1)}, Integer(0)));
}

TEST(Cli, GeneratorsParseBack) {
  for (const auto& args : {"gen band --n 9 --w1 2 --w2 0", "gen two-per-row --n 7 --seed 5", "gen random --n 4 --order 3 --density 0.3"}) {
    auto r = run(args);
    EXPECT_EQ(r.code, 0) << args;
    EXPECT_NO_THROW(parse_tensor<Integer>(r.out)) << args;
  }
  auto z = run("gen few-directions --a 1,2 --b 3,4");
  EXPECT_NO_THROW(parse_zonotopes(z.out));
}

TEST(Cli, StatsJson) {
  const auto stats = scratch("stats.json");
  auto r = run("compute --fn det --input " + data("triangles.tns") + " --stats " + stats);
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(slurp(stats));
  for (const char* key : {"function", "n", "order", "width_multi_part", "nodes", "ring_mults", "result", "command",
                          "input_digest", "wall_time_ms"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["result"].get<std::string>() + "\n", r.out);
  EXPECT_EQ(j["function"], "det");
  EXPECT_EQ(j["n"], 5);
}

TEST(Cli, DecompositionFileRoundTrip) {
  const auto td = scratch("triangles.td");
  ASSERT_EQ(run("decompose --input " + data("triangles.tns") + " --graph column --output " + td).code, 0);
  auto direct = run("compute --fn perm --input " + data("triangles.tns"));
  for (const char* fn : {"perm", "det"}) {
    auto r = run(std::string("compute --fn ") + fn + " --input " + data("triangles.tns") + " --td " + td +
                 " --td-graph column --oracle");
    EXPECT_EQ(r.code, 0) << fn;
    EXPECT_NE(r.out.find("oracle: match"), std::string::npos);
  }
  EXPECT_EQ(run("compute --fn perm --input " + data("triangles.tns") + " --td " + td + " --td-graph column").out,
            direct.out);
  // A column decomposition read as a bipartite one has the wrong vertex count.
  EXPECT_EQ(run("compute --fn perm --input " + data("triangles.tns") + " --td " + td).code, 3);
}

TEST(Cli, GraphExport) {
  auto r = run("graph --input " + data("id4.tns"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("p tw 8 4\n", 0), 0u) << r.out;
}

TEST(Cli, MixedVolume) {
  auto r = run("mvol --input " + data("few_directions.zon") + " --oracle");
  EXPECT_EQ(r.code, 0);
  auto zs = parse_zonotopes(slurp(data("few_directions.zon")));
  EXPECT_EQ(r.out, oracle::naive_mixed_volume(zs).get_str() + "\noracle: match\n");
  const auto big = scratch("ss.zon");
  ASSERT_EQ(run("gen subset-sum --a 1,2,3,4,5,6 --delta 1 --output " + big).code, 0);
  EXPECT_EQ(run("mvol --input " + big).code, 4);
  EXPECT_EQ(run("mvol --input " + big + " --max-extra-directions 6 --oracle").code, 0);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("compute --input " + data("id4.tns")).code, 2);
  EXPECT_EQ(run("compute --fn trace --input " + data("id4.tns")).code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  const auto bad = scratch("bad.tns");
  std::ofstream(bad) << "tensor 2 2 2\n1 1 0\n";
  auto r = run("compute --fn perm --input " + bad, true);
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.out.find("line 2"), std::string::npos) << r.out;
  EXPECT_EQ(run("compute --fn perm --input /nonexistent/file.tns").code, 3);
  const auto wide = scratch("wide.tns");
  ASSERT_EQ(run("gen band --n 32 --w1 31 --w2 31 --output " + wide).code, 0);
  EXPECT_EQ(run("compute --fn perm --input " + wide).code, 4);
}

TEST(Cli, Bench) {
  auto r = run("bench --fn perm --sizes 50,100");
  EXPECT_EQ(r.code, 0);
  std::istringstream lines(r.out);
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    auto j = nlohmann::json::parse(line);
    EXPECT_EQ(j["width_single_part"], 2);
    ++count;
  }
  EXPECT_EQ(count, 2);
}
