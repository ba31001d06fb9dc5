#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

using namespace cmreg;
using cmreg::cli::Json;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> cell(std::string cmd, int p, int l, int a, int b) {
  return {std::move(cmd), "--p", std::to_string(p), "--l", std::to_string(l), "--a", std::to_string(a), "--b",
          std::to_string(b)};
}

std::vector<std::string> with(std::vector<std::string> args, std::initializer_list<std::string> extra) {
  args.insert(args.end(), extra);
  return args;
}

Json json_of(const std::vector<std::string>& args) {
  const Outcome o = invoke(with(args, {"--output", "json"}));
  EXPECT_EQ(o.err, "");
  return Json::parse(o.out);
}

const Json& section(const Json& doc, std::string_view name) {
  for (const auto& s : doc["sections"])
    if (s["name"] == name) return s;
  throw std::runtime_error("missing section " + std::string(name));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST(Cli, HodgeTable) {
  const Outcome o = invoke(cell("hodge", 3, 5, 1, 1));
  EXPECT_EQ(o.code, cli::kExitPass);
  EXPECT_NE(o.out.find("== hodge numbers"), std::string::npos);
  const Json doc = json_of(cell("hodge", 3, 5, 1, 1));
  EXPECT_EQ(doc["schema_version"], cli::kSchemaVersion);
  const Json& rows = section(doc, "hodge numbers")["rows"];
  ASSERT_EQ(rows.size(), 2u);
  for (const auto& row : rows) EXPECT_EQ(row["sum"], 4);
}

TEST(Cli, InvalidPrimeIsUsageError) {
  const Outcome o = invoke(cell("hodge", 4, 5, 1, 1));
  EXPECT_EQ(o.code, cli::kExitUsage);
  EXPECT_NE(o.err.find("p must be prime"), std::string::npos);
  EXPECT_EQ(o.out, "");
}

TEST(Cli, ParseErrors) {
  EXPECT_EQ(invoke({}).code, cli::kExitUsage);
  EXPECT_EQ(invoke({"frobnicate"}).code, cli::kExitUsage);
  EXPECT_EQ(invoke(with(cell("hodge", 3, 5, 1, 1), {"--output", "xml"})).code, cli::kExitUsage);
  EXPECT_EQ(invoke(with(cell("verify", 3, 5, 1, 1), {"--tol", "1e-2"})).code, cli::kExitUsage);
  EXPECT_EQ(invoke({"hodge", "--p", "3"}).code, cli::kExitUsage);
  EXPECT_EQ(invoke({"--help"}).code, cli::kExitPass);
}

TEST(Cli, PeriodFormula) {
  const Json doc = json_of(with(cell("period", 2, 3, 1, 1), {"--h", "1"}));
  const Json& rows = section(doc, "period formula")["rows"];
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0]["verdict"], "pass");
  EXPECT_EQ(rows[0]["alpha"], "1/2");
  EXPECT_EQ(rows[0]["beta"], "1/2");
  EXPECT_EQ(rows[0]["mu"], "1/3");
  EXPECT_EQ(invoke(with(cell("period", 2, 3, 1, 1), {"--h", "3"})).code, cli::kExitUsage);

  const Json all = json_of(cell("period", 3, 5, 1, 1));
  for (const auto& row : section(all, "period formula")["rows"]) EXPECT_EQ(row["verdict"], "pass");
}

TEST(Cli, RegulatorReports) {
  const Json doc = json_of(cell("regulator", 3, 5, 1, 1));
  EXPECT_FALSE(section(doc, "regulator values")["rows"].empty());
  for (const auto& row : section(doc, "non-vanishing")["rows"]) EXPECT_EQ(row["verdict"], "pass");

  const Json legendre = json_of(cell("regulator", 2, 3, 1, 1));
  EXPECT_NO_THROW(section(legendre, "legendre probe"));
  EXPECT_NO_THROW(section(legendre, "criterion ratios"));

  const Outcome swapped = invoke(cell("regulator", 5, 3, 1, 2));
  EXPECT_EQ(swapped.code, cli::kExitPass);
  EXPECT_NE(swapped.out.find("p < l"), std::string::npos);
}

TEST(Cli, VerifySingleCellWritesReport) {
  const auto report = std::filesystem::temp_directory_path() / "cmreg_test_verify.json";
  std::filesystem::remove(report);
  const Outcome o = invoke(with(cell("verify", 3, 5, 1, 1), {"--report", report.string(), "--tol", "1e-3"}));
  EXPECT_EQ(o.code, cli::kExitPass) << o.out << o.err;
  const Json file = Json::parse(read_file(report));
  EXPECT_EQ(file["pass"], true);
  EXPECT_EQ(file["timing"].size(), 13u);
  EXPECT_EQ(section(file, "acceptance")["rows"].size(), 13u);
  std::filesystem::remove(report);
}

TEST(Cli, PerturbedResidueFailsVerification) {
  const auto report = std::filesystem::temp_directory_path() / "cmreg_test_perturbed.json";
  const Json doc = json_of(with(cell("verify", 3, 5, 1, 1), {"--report", report.string(), "--perturb-residue", "1/7"}));
  EXPECT_EQ(doc["pass"], false);
  const Json& rows = section(doc, "acceptance")["rows"];
  EXPECT_EQ(rows[3]["verdict"], "fail");
  EXPECT_EQ(rows[3]["id"], 4);
  const Outcome o = invoke(with(cell("verify", 3, 5, 1, 1), {"--report", report.string(), "--perturb-residue", "1/7"}));
  EXPECT_EQ(o.code, cli::kExitFailure);
  std::filesystem::remove(report);
}

TEST(Cli, ResidueTablesMatchGolden) {
  const Json doc = json_of(cell("gm", 3, 5, 1, 1));
  const std::string golden = read_file(std::filesystem::path(CMREG_GOLDEN_DIR) / "gm_residues_3_5_1_1.txt");
  ASSERT_FALSE(golden.empty());
  EXPECT_EQ(cli::render_section_table(section(doc, "residue tables")), golden);
}

TEST(Cli, GmSpectraAndMonodromy) {
  const Json doc = json_of(cell("gm", 3, 7, 1, 2));
  for (const auto& row : section(doc, "residue spectra")["rows"]) EXPECT_EQ(row["in_[0,1)"], true);
  for (const auto& row : section(doc, "monodromy")["rows"]) {
    EXPECT_LT(row["|eig|-1"].get<double>(), 1e-6);
    EXPECT_LT(row["defect"].get<double>(), 1e-6) << row["loop"];
  }
}

TEST(Cli, JsonRoundTrip) {
  const Json doc = json_of(cell("regulator", 3, 5, 1, 2));
  EXPECT_EQ(Json::parse(doc.dump()), doc);
}

TEST(Cli, DeterministicOutput) {
  const auto args = cell("period", 5, 7, 2, 3);
  EXPECT_EQ(invoke(args).out, invoke(args).out);
  const auto report = std::filesystem::temp_directory_path() / "cmreg_test_parallel.json";
  const auto verify = with(cell("verify", 2, 5, 1, 1), {"--report", report.string()});
  EXPECT_EQ(invoke(verify).out, invoke(with(verify, {"--parallel"})).out);
  std::filesystem::remove(report);
}

TEST(Cli, CsvOutput) {
  const Outcome o = invoke(with(cell("regulator", 3, 5, 1, 1), {"--output", "csv"}));
  EXPECT_EQ(o.code, cli::kExitPass);
  EXPECT_EQ(o.out.rfind("section,", 0), 0u);
  EXPECT_NE(o.out.find("R.re"), std::string::npos);
  EXPECT_NE(o.out.find("\nregulator values,"), std::string::npos);
}
