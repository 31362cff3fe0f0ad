#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "portarb/cli.hpp"
#include "portarb/error.hpp"
#include "portarb/fixtures.hpp"

using namespace portarb;
namespace fs = std::filesystem;

namespace
{

struct Result
{
  int status;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args)
{
  std::ostringstream out, err;
  const int status = run_cli(args, out, err);
  return {status, out.str(), err.str()};
}

std::string fx(const std::string& rel) { return fixture_root() + "/" + rel; }

bool has(const std::string& hay, const std::string& needle)
{
  return hay.find(needle) != std::string::npos;
}

class CliFiles : public ::testing::Test
{
protected:
  void SetUp() override
  {
    dir_ = fs::temp_directory_path() /
           ("portarb_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST(Cli, CompileSearchAndTrack)
{
  const Result r = cli({"compile", fx("search-and-track/model.xml"), fx("search-and-track/network.xml"),
                        "--auto-observe"});
  EXPECT_EQ(r.status, kExitOk);
  EXPECT_EQ(r.out, read_file(fx("search-and-track/expected_rules.txt")));
  EXPECT_TRUE(has(r.err, "warning V3"));
}

TEST(Cli, CompileWithoutObserverFails)
{
  const Result r = cli({"compile", fx("search-and-track/model.xml"), fx("search-and-track/network.xml")});
  EXPECT_EQ(r.status, kExitValidation);
  EXPECT_EQ(r.out, "");
  EXPECT_TRUE(has(r.err, "error V3 [Track Object]"));
}

TEST(Cli, CompileJson)
{
  const Result r = cli({"compile", fx("search-and-track/model_restarm_collision.xml"),
                        fx("search-and-track/network.xml"), "--auto-observe", "--format", "json"});
  EXPECT_EQ(r.status, kExitOk);
  EXPECT_TRUE(has(r.out, "\"constraint\": \"not /Object/pos:o and not /collision:o\""));
  EXPECT_EQ(cli({"compile", fx("be-curious/model.xml"), fx("be-curious/network.xml"), "--format", "xml"})
                .status,
            kExitUsage);
}

TEST_F(CliFiles, CompileOut)
{
  const Result r = cli({"compile", fx("be-curious/model.xml"), fx("be-curious/network.xml"), "--out",
                        path("rules.txt")});
  EXPECT_EQ(r.status, kExitOk);
  EXPECT_EQ(r.out, "");
  EXPECT_EQ(read_file(path("rules.txt")), read_file(fx("be-curious/expected_rules.txt")));
}

TEST(Cli, Validate)
{
  const Result ok = cli({"validate", fx("be-curious/model.xml"), fx("be-curious/network.xml")});
  EXPECT_EQ(ok.status, kExitOk);
  EXPECT_EQ(ok.out, "");
  EXPECT_EQ(ok.err, "");

  const Result bad = cli({"validate", fx("invalid/cross-group.xml"), fx("search-and-track/network.xml"),
                          "--auto-observe"});
  EXPECT_EQ(bad.status, kExitValidation);
  EXPECT_TRUE(has(bad.err, "error V1 [Follow Face]"));
}

TEST(Cli, StrictTurnsConflictsIntoFailures)
{
  const std::vector<std::string> base{"compile", fx("conflict-demo/model.xml"),
                                      fx("conflict-demo/network.xml")};
  const Result lax = cli(base);
  EXPECT_EQ(lax.status, kExitOk);
  EXPECT_TRUE(has(lax.err, "warning CONFLICT"));
  auto strict_args = base;
  strict_args.push_back("--strict");
  EXPECT_EQ(cli(strict_args).status, kExitValidation);
  EXPECT_EQ(cli({"simulate", fx("conflict-demo/scenario.json"), "--strict"}).status, kExitValidation);
}

TEST(Cli, IoAndUsageErrors)
{
  EXPECT_EQ(cli({"compile", "/nonexistent/model.xml", fx("be-curious/network.xml")}).status, kExitIo);
  EXPECT_EQ(cli({"simulate", "/nonexistent/scenario.json"}).status, kExitIo);
  EXPECT_EQ(cli({}).status, kExitUsage);
  EXPECT_EQ(cli({"frobnicate"}).status, kExitUsage);
  EXPECT_EQ(cli({"compile", fx("be-curious/model.xml")}).status, kExitUsage);
  EXPECT_EQ(cli({"--help"}).status, kExitOk);
}

TEST_F(CliFiles, MalformedInputIsUsageError)
{
  write_file(path("bad.xml"), "<behavior name=\"A\">");
  EXPECT_EQ(cli({"compile", path("bad.xml"), fx("be-curious/network.xml")}).status, kExitUsage);
  write_file(path("bad.jsonl"), "{not json\n");
  EXPECT_EQ(cli({"explain", path("bad.jsonl")}).status, kExitUsage);
}

TEST_F(CliFiles, SimulateWritesTraceAndSummary)
{
  const Result r = cli({"simulate", fx("search-and-track/scenario.json"), "--trace", path("t.jsonl")});
  EXPECT_EQ(r.status, kExitOk);
  EXPECT_EQ(read_file(path("t.jsonl")), read_file(fx("search-and-track/expected_trace.jsonl")));
  EXPECT_TRUE(has(r.out, "/Arm/pos:i: 300 messages"));
  EXPECT_TRUE(has(r.out, "silent (13900, 16900)"));
}

TEST_F(CliFiles, SimulateUntil)
{
  EXPECT_EQ(cli({"simulate", fx("search-and-track/scenario.json"), "--until", "5000", "--trace",
                 path("t.jsonl")})
                .status,
            kExitOk);
  const std::string text = read_file(path("t.jsonl"));
  ASSERT_FALSE(text.empty());
  EXPECT_FALSE(has(text, "\"t\":5000,"));
  EXPECT_TRUE(has(text, "\"t\":4900,"));
}

TEST_F(CliFiles, Explain)
{
  ASSERT_EQ(cli({"simulate", fx("search-and-track/scenario.json"), "--trace", path("t.jsonl")}).status,
            kExitOk);
  const Result r = cli({"explain", path("t.jsonl"), "--at", "14100", "--port", "/Arm/pos:i"});
  EXPECT_EQ(r.status, kExitOk);
  EXPECT_TRUE(has(r.out, "constraint `not /collision:o` false; /collision:o active since 14000")) << r.out;

  write_file(path("empty.jsonl"), "");
  const Result none = cli({"explain", path("empty.jsonl")});
  EXPECT_EQ(none.status, kExitOk);
  EXPECT_EQ(none.out, "no records\n");
  EXPECT_EQ(cli({"explain", path("t.jsonl"), "--port", "nonsense"}).status, kExitUsage);
}
