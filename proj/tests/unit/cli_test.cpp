#include <sstream>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "flows.hpp"
#include "oracles.hpp"
#include "steer/cli.hpp"

using namespace steer;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST(Cli, IngestSteerVerifyHistory) {
  test::TempDir dir;
  const std::string data = dir.path().string();
  const auto ingest = cli({"ingest", test::fixture_path("pima.csv"), test::fixture_path("pima_schema.json"),
                           "--data-dir", data, "--fixed-clock", test::kFlowClock});
  ASSERT_EQ(ingest.code, 0) << ingest.err;
  EXPECT_EQ(ingest.out, "project_id p0001\nversion 1\naccuracy 0.7468\nrows 768\nfeatures 8\n");

  const auto steer = cli({"steer", "p0001", test::fixture_path("pima_steering_script.json"), "--data-dir", data,
                          "--fixed-clock", test::kFlowClock});
  ASSERT_EQ(steer.code, 0) << steer.err;
  std::istringstream lines(steer.out);
  std::string line;
  std::vector<std::string> got;
  while (std::getline(lines, line)) got.push_back(line);
  ASSERT_EQ(got.size(), 4u);
  EXPECT_EQ(got[0], "step 1 manual version 2 accuracy 0.7468 delta +0.0000");
  EXPECT_EQ(got[3].substr(0, 26), "step 4 rollback version 5 ");

  const auto verify = cli({"verify", "p0001", "--data-dir", data});
  EXPECT_EQ(verify.code, 0) << verify.out;
  EXPECT_NE(verify.out.find("OK versions 5 mismatches 0"), std::string::npos) << verify.out;

  const auto hist = cli({"history", "p0001", "--data-dir", data});
  EXPECT_EQ(hist.code, 0);
  EXPECT_EQ(hist.out.rfind("version 1 cause initial accuracy 0.7468 delta none | ", 0), 0u) << hist.out;
  EXPECT_NE(hist.out.find("active 5\n"), std::string::npos);
}

TEST(Cli, ErrorsExitWithTwo) {
  test::TempDir dir;
  const std::string data = dir.path().string();
  const auto missing = cli({"history", "p0007", "--data-dir", data});
  EXPECT_EQ(missing.code, 2);
  EXPECT_EQ(missing.err.rfind("error unknown_project: ", 0), 0u) << missing.err;

  const auto no_file = cli({"ingest", "/nonexistent.csv", test::fixture_path("pima_schema.json"), "--data-dir", data});
  EXPECT_EQ(no_file.code, 2);
  EXPECT_EQ(no_file.err.rfind("error io_error: ", 0), 0u) << no_file.err;

  EXPECT_EQ(cli({}).code, 2);
  EXPECT_EQ(cli({"frobnicate"}).code, 2);
  EXPECT_EQ(cli({"--help"}).code, 0);
}

TEST(Cli, JournalMatchesHttpFlow) {
  test::TempDir a, b;
  const auto via_cli = test::run_cli_flow(a.path());
  const auto via_http = test::run_http_flow(b.path());
  ASSERT_EQ(via_cli.exit_code, 0) << via_cli.output;
  ASSERT_EQ(via_http.exit_code, 0) << via_http.output;
  EXPECT_EQ(via_cli.project_id, via_http.project_id);
  EXPECT_FALSE(via_cli.journal.empty());
  EXPECT_EQ(via_cli.journal, via_http.journal);
}
