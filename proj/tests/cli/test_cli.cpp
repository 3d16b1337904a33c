#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <string>

#include "oracles.hpp"
#include "partial_search/subspace.hpp"

namespace ps = partial_search;
using nlohmann::json;

namespace {

struct CliRun {
  int code;
  std::string out;
};

CliRun run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + std::string(PS_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed");
  std::string out;
  std::array<char, 4096> buf{};
  while (std::size_t got = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), got);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string data_path(const std::string& name) { return std::string(PS_TEST_DATA_DIR) + "/" + name; }

}  // namespace

TEST(Cli, AnglesJson) {
  const CliRun r = run("angles --n 2 --m 1 --format json");
  ASSERT_EQ(r.code, 0);
  const json j = json::parse(r.out);
  EXPECT_EQ(j["command"], "angles");
  EXPECT_TRUE(j.contains("schema_version"));
  const json& row = j["rows"][0];
  EXPECT_EQ(row["sin_theta1"].get<double>(), 0.5);
  EXPECT_EQ(row["sin_theta2"].get<double>(), 0.7071067811865476);
  EXPECT_EQ(row["sin_gamma"].get<double>(), 0.7071067811865476);
}

TEST(Cli, SimulateTokenOrder) {
  const auto rows = oracle::read_csv_text(run("simulate --n 8 --m 2 --seq l:1,g:1").out);
  ASSERT_EQ(rows.size(), 1U);
  EXPECT_NEAR(std::stod(rows[0].at("block_prob")), 0.105747, 5e-7);
  EXPECT_EQ(rows[0].at("operator"), "G_8G_2");
  const auto reversed = oracle::read_csv_text(run("simulate --n 8 --m 2 --seq g:1,l:1").out);
  EXPECT_NE(reversed[0].at("block_prob"), rows[0].at("block_prob"));
}

TEST(Cli, TableOneGolden) {
  const CliRun r = run("tables --n 8 --which pr --format csv");
  ASSERT_EQ(r.code, 0);
  ASSERT_EQ(r.out.rfind("# schema_version=", 0), 0U);
  const auto rows = oracle::read_csv_text(r.out);
  const auto golden = oracle::read_csv(data_path("table1_pr.csv"));
  ASSERT_EQ(rows.size(), 60U);
  for (const auto& cell : golden) {
    const auto it = std::find_if(rows.begin(), rows.end(), [&](const auto& row) {
      return row.at("m") == cell.at("m") && row.at("k_tot") == cell.at("k_tot");
    });
    ASSERT_NE(it, rows.end());
    // Emitted at 4 decimals; a printed cell may be truncated rather than rounded.
    EXPECT_NEAR(std::stod(it->at("pr_percent")), std::stod(cell.at("value")), 1.0001e-4)
        << "m=" << cell.at("m") << " k=" << cell.at("k_tot");
  }
}

TEST(Cli, TableTwoGolden) {
  const auto rows = oracle::read_csv_text(run("tables --n 8 --which e").out);
  const auto golden = oracle::read_csv(data_path("table2_e.csv"));
  ASSERT_EQ(rows.size(), 60U);
  for (const auto& cell : golden) {
    const auto it = std::find_if(rows.begin(), rows.end(), [&](const auto& row) {
      return row.at("m") == cell.at("m") && row.at("k_tot") == cell.at("k_tot");
    });
    ASSERT_NE(it, rows.end());
    EXPECT_NEAR(std::stod(it->at("expected_iterations")), std::stod(cell.at("value")), 1.0001e-4);
    EXPECT_EQ(it->at("column_min") == "true", cell.at("highlight") == "red");
  }
}

TEST(Cli, EmittedSequencesRoundTrip) {
  const auto rows = oracle::read_csv_text(run("enumerate --n 8 --m 5 --ktot 2..9 --all-ties").out);
  ASSERT_FALSE(rows.empty());
  for (const auto& row : rows) {
    const auto seq = ps::OperatorSequence::parse_tokens(row.at("sequence"));
    EXPECT_EQ(seq.to_tokens(), row.at("sequence"));
    EXPECT_EQ(ps::OperatorSequence::parse_product(row.at("operator"), 8, 5), seq);
  }
}

TEST(Cli, CsvAndJsonCarryTheSameNumbers) {
  const auto csv = oracle::read_csv_text(run("parallel --scheme compare --n 6").out);
  const json j = json::parse(run("parallel --scheme compare --n 6 --format json").out);
  ASSERT_EQ(csv.size(), j["rows"].size());
  for (std::size_t i = 0; i < csv.size(); ++i) {
    const json& row = j["rows"][i];
    if (row["e_min"].is_null()) {
      EXPECT_TRUE(csv[i].at("e_min").empty());
      continue;
    }
    EXPECT_EQ(std::stod(csv[i].at("e_min")), row["e_min"].get<double>());
    EXPECT_EQ(csv[i].at("scheme"), row["scheme"].get<std::string>());
  }
}

TEST(Cli, OutputFile) {
  const std::string path = testing::TempDir() + "ps_cli_angles.json";
  ASSERT_EQ(run("--format json --out " + path + " angles --n 4 --m 2").code, 0);
  std::ifstream in(path);
  EXPECT_EQ(json::parse(in)["rows"][0]["n"], 4);
}

TEST(Cli, WorkerCountDoesNotChangeOutput) {
  const std::string args = "parallel --scheme hybrid --n 12 --l 3";
  const std::string a = run(args + " --workers 1").out;
  EXPECT_EQ(a, run(args + " --workers 6").out);
  EXPECT_EQ(a, run(args, "PARTIAL_SEARCH_WORKERS=3").out);
  EXPECT_EQ(run("--workers 2 angles --n 4 --m 2", "PARTIAL_SEARCH_WORKERS=x").code, 0);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("angles --n 4 --m 2 --bogus").code, 2);
  EXPECT_EQ(run("angles --n 4").code, 2);
  EXPECT_EQ(run("angles --n 4 --m 4").code, 1);
  EXPECT_EQ(run("simulate --n 8 --m 2 --seq q:1").code, 1);
  EXPECT_EQ(run("parallel --scheme inner --n 5 --l 3").code, 1);
  EXPECT_EQ(run("--help").code, 0);
}

TEST(Cli, ConstraintMessageNamesDefinition) {
  const std::string cmd = std::string(PS_CLI_PATH) + " parallel --scheme hybrid --n 5 --l 2 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string out;
  std::array<char, 1024> buf{};
  while (std::size_t got = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), got);
  EXPECT_NE(pclose(pipe), 0);
  EXPECT_NE(out.find("Definition"), std::string::npos) << out;
}
