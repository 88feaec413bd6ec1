#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "support.hpp"

namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("supertree_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) {
    fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  CliRun run(const std::string& args) {
    const fs::path err = dir_ / "stderr.txt";
    const std::string cmd = std::string(SUPERTREE_CLI) + " " + args + " 2>" + err.string();
    CliRun r;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    int status = ::pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.err = slurp(err);
    return r;
  }

  fs::path dir_;
};

TEST_F(Cli, MaspRootedExample) {
  auto f = write("in.nwk", "((a,b),c);\n((a,b),d);\n");
  CliRun r = run("--problem masp --mode rooted --input " + f.string());
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "size=4\n(((a,b),c),d);\n");
}

TEST_F(Cli, McspRootedExample) {
  auto f = write("in.nwk", "(a,b,c);\n((a,b),c);\n");
  CliRun r = run("--problem mcsp --mode rooted --input " + f.string());
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "size=3\n((a,b),c);\n");
}

TEST_F(Cli, TwoLeafUnrootedTreeIsInfeasible) {
  auto f = write("in.nwk", "(a,b);\n((a,b),(c,d));\n");
  EXPECT_EQ(run("--problem masp --mode unrooted --input " + f.string()).code, 3);
}

TEST_F(Cli, ParseErrorReportsPosition) {
  auto f = write("bad.nwk", "# header\n((a,b),c);\n((a,b),c;\n");
  CliRun r = run("--problem masp --input " + f.string());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find(f.string() + ":3:9:"), std::string::npos) << r.err;
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run("--problem nope --input x").code, 1);
  EXPECT_EQ(run("--problem masp").code, 1);
  EXPECT_EQ(run("--problem masp --input " + (dir_ / "missing.nwk").string()).code, 1);
  EXPECT_EQ(run("--bogus").code, 1);
  auto f = write("big.nwk", "((a,b),(c,d));\n((e,f),(g,h));\n");
  EXPECT_EQ(run("--problem masp --verify --input " + f.string()).code, 1);
  EXPECT_EQ(run("--problem masp --verify --oracle-cap 8 --input " + f.string()).code, 0);
  EXPECT_EQ(run("--mode unrooted --seed 1 --gen-d 2").code, 1);
}

TEST_F(Cli, VerifyAndStats) {
  auto f = write("in.nwk", "(b,a,d);\n((d,c),a,b);\n(d,b,c);\n");
  CliRun r = run("--problem masp --mode unrooted --verify --stats --input " + f.string());
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "size=4\n(a,b,(c,d));\n");
  auto line = r.err.substr(0, r.err.find('\n'));
  auto j = nlohmann::json::parse(line);
  EXPECT_EQ(j["size"], 4);
  EXPECT_GT(j["states_visited"].get<int>(), 0);
  EXPECT_TRUE(j.contains("transitions"));
  EXPECT_TRUE(j.contains("memo_size"));
  EXPECT_TRUE(j.contains("wall_ms"));
}

TEST_F(Cli, DumpStatesGoesToStderr) {
  auto f = write("in.nwk", "((a,b),c);\n");
  CliRun r = run("--problem mcsp --dump-states --input " + f.string());
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "size=3\n((a,b),c);\n");
  EXPECT_NE(r.err.find("Internal("), std::string::npos);
}

TEST_F(Cli, GeneratorIsByteIdentical) {
  CliRun a = run("--seed 1 --gen-k 2 --gen-n 5 --gen-d 3 --mode rooted");
  CliRun b = run("--seed 1 --gen-k 2 --gen-n 5 --gen-d 3 --mode rooted");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.rfind("# seed=1", 0), 0u);
  auto out = dir_ / "gen.nwk";
  EXPECT_EQ(run("--seed 9 --gen-k 3 --gen-n 6 --gen-d 3 --mode unrooted --output " + out.string()).code, 0);
  CliRun solved = run("--problem mcsp --mode unrooted --verify --input " + out.string());
  EXPECT_EQ(solved.code, 0) << solved.err;
  CliRun direct = run("--problem mcsp --mode unrooted --seed 9 --gen-k 3 --gen-n 6 --gen-d 3");
  EXPECT_EQ(direct.out, solved.out);
}

TEST_F(Cli, OutputIsDeterministicAndReparses) {
  for (int seed = 1; seed <= 6; ++seed) {
    const std::string mode = seed % 2 ? "rooted" : "unrooted";
    for (const std::string problem : {"masp", "mcsp"}) {
      const std::string args = "--problem " + problem + " --mode " + mode + " --seed " + std::to_string(seed) +
                               " --gen-k 3 --gen-n 6 --gen-d 3";
      CliRun a = run(args), b = run(args);
      ASSERT_EQ(a.code, 0) << a.err;
      EXPECT_EQ(a.out, b.out);
      auto text = supertree::generate_instance(
          {static_cast<std::uint64_t>(seed), 3, 6, 3, mode == "rooted", 0.5});
      std::string witness = a.out.substr(a.out.find('\n') + 1);
      witness.pop_back();
      if (mode == "rooted") {
        auto inst = supertree::load_instance_text<supertree::RootedTree>(text);
        auto x = inst.parse(witness);
        EXPECT_TRUE(problem == "masp" ? is_agreement_supertree(x, inst) : is_compatible_supertree(x, inst));
      } else {
        auto inst = supertree::load_instance_text<supertree::UnrootedTree>(text);
        auto x = inst.parse(witness);
        EXPECT_TRUE(problem == "masp" ? is_agreement_supertree(x, inst) : is_compatible_supertree(x, inst));
      }
    }
  }
}

}  // namespace
