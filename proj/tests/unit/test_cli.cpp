#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "odeof/cli/commands.hpp"
#include "odeof/cli/family_spec.hpp"
#include "odeof/cli/report.hpp"
#include "odeof/cli/state_file.hpp"
#include "odeof/entanglement.hpp"
#include "odeof/errors.hpp"
#include "reference.hpp"

using namespace odeof;
using namespace odeof::cli;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

RunReport call_json(std::vector<std::string> args) {
  args.push_back("--json");
  const CliRun r = call(args);
  EXPECT_EQ(r.code, 0) << r.err;
  return report_from_json(nlohmann::json::parse(r.out));
}

std::string tmp(const std::string& name) { return std::string(ODEOF_TEST_TMPDIR) + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(CliEof, SpecExamples) {
  const RunReport w = call_json({"eof", "--family", "werner", "--d", "3", "--F", "-0.5"});
  EXPECT_NEAR(*w.find_result("eof"), ref::h2(0.5 + 0.5 * std::sqrt(0.75)), 1e-12);

  const RunReport iso = call_json({"eof", "--family", "isotropic-member", "--d", "3"});
  EXPECT_NEAR(*iso.find_result("eof"), ref::frozen::kIsotropicMember3, 1e-9);

  const RunReport mc = call_json({"eof", "--family", "mc2", "--p", "0.5", "--theta", "0.7853981634"});
  EXPECT_NEAR(*mc.find_result("eof"), 1.0, 1e-9);
  EXPECT_NEAR(*mc.find_result("cost"), 1.0, 1e-9);
  ASSERT_TRUE(mc.find_result("distillable").has_value());
  ASSERT_TRUE(mc.find_result("gap").has_value());
}

TEST(CliEof, Lemma3ReportsGapAssembly) {
  const RunReport r = call_json({"eof", "--family", "lemma3", "--p", "0.5", "--d", "3", "--f", "2", "--c", "uniform"});
  EXPECT_NEAR(*r.find_result("eof"), ref::frozen::kLemma3Uniform, 1e-12);
  EXPECT_NEAR(*r.find_result("gap"), *r.find_result("cost") - *r.find_result("distillable"), 1e-12);
  ASSERT_EQ(r.checks.size(), 1u);
  EXPECT_TRUE(r.checks[0].passed);
}

TEST(CliEof, TextOutput) {
  const CliRun r = call({"eof", "--family", "werner", "--d", "3", "--F", "-0.5"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("eof = 0.354578902665"), std::string::npos);
}

TEST(CliEof, ValidationErrors) {
  CliRun r = call({"eof", "--family", "werner", "--d", "3", "--F", "0.5"});
  EXPECT_EQ(r.code, kExitInvalid);
  EXPECT_NE(r.err.find("entangled range"), std::string::npos);

  r = call({"eof", "--family", "isotropic", "--d", "4", "--F", "0.95"});
  EXPECT_EQ(r.code, kExitInvalid);
  EXPECT_NE(r.err.find("unsupported-dimension"), std::string::npos);

  r = call({"eof", "--family", "mc2", "--p", "0.5"});
  EXPECT_EQ(r.code, kExitInvalid);
  EXPECT_NE(r.err.find("--theta"), std::string::npos);

  EXPECT_EQ(call({"eof", "--family", "nope"}).code, kExitInvalid);
  EXPECT_EQ(call({"eof", "--unknown-flag"}).code, kExitInvalid);
  EXPECT_EQ(call({}).code, kExitInvalid);
  EXPECT_EQ(call({"eof", "--family", "mc2", "--p", "x", "--theta", "0.3"}).code, kExitInvalid);
}

TEST(CliOdVerify, SpecExamples) {
  const RunReport w = call_json({"od", "verify", "--family", "werner", "--d", "3", "--F", "-0.5"});
  EXPECT_TRUE(w.all_passed());
  EXPECT_EQ(w.checks.size(), 3u);

  const RunReport iso = call_json({"od", "verify", "--family", "isotropic", "--d", "3", "--F", "0.95", "--m", "2"});
  EXPECT_TRUE(iso.all_passed());
  EXPECT_EQ(*iso.find_result("L"), 39);
  EXPECT_EQ(*iso.find_result("n"), 13);

  const RunReport l3 =
      call_json({"od", "verify", "--family", "lemma3", "--p", "0.5", "--d", "3", "--f", "2", "--c", "uniform"});
  EXPECT_TRUE(l3.all_passed());
  ASSERT_FALSE(l3.notes.empty());
  EXPECT_NE(l3.notes[0].find("unequal"), std::string::npos);
}

TEST(CliOdVerify, FailingCheckExitCode) {
  // A zero claim tolerance fails on the rounding-level claim error.
  const CliRun r = call({"od", "verify", "--family", "lemma3", "--p", "0.5", "--d", "3", "--f", "2", "--c",
                         "uniform", "--claim-tol", "0", "--restarts", "2"});
  EXPECT_EQ(r.code, kExitCheckFailed);
  EXPECT_NE(r.out.find("check claimed_eof: FAIL"), std::string::npos);
  EXPECT_EQ(call({"od", "verify", "--family", "mc2", "--p", "0.3", "--theta", "0.7", "--recon-tol", "-1"}).code,
            kExitInvalid);
}

TEST(CliGapScan, Lemma3GridAndBoundary) {
  const CliRun r = call({"gap", "scan", "--kind", "lemma3", "--p", "0,1,3", "--theta", "0.3,1.2,2"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "p,theta,gap");
  std::getline(in, line);
  EXPECT_EQ(line, "0,0.3,0");
  EXPECT_NE(r.out.find("# min gap over grid"), std::string::npos);

  const CliRun pos = call({"gap", "scan", "--kind", "lemma3", "--p", "0.1,0.9,7", "--theta", "0.1,1.4,7",
                        "--assert-positive"});
  EXPECT_EQ(pos.code, 0);
}

TEST(CliGapScan, TensorMc) {
  const RunReport r = call_json({"gap", "scan", "--kind", "tensor-mc", "--theta", "0.7", "--theta", "0.4"});
  EXPECT_NEAR(*r.find_result("min_gap"), ref::frozen::kTensorGapUniform, 1e-12);
  const CliRun text = call({"gap", "scan", "--kind", "tensor-mc", "--theta", "0.7", "--theta", "0.4"});
  EXPECT_EQ(text.out.substr(0, text.out.find('\n')), "theta1,theta2,gap");

  // A single product-ket member has zero gap but lies on the boundary of the
  // weight simplex, so the positivity assertion does not cover it.
  const CliRun pure = call({"gap", "scan", "--kind", "tensor-mc", "--theta", "0.7", "--theta", "0.4", "--weights",
                         "1,0,0,0", "--assert-positive"});
  EXPECT_EQ(pure.code, 0);
  const CliRun bad_w = call({"gap", "scan", "--kind", "tensor-mc", "--theta", "0.7", "--weights", "0.5,0.6"});
  EXPECT_EQ(bad_w.code, kExitInvalid);
}

TEST(CliGapScan, InvalidGridWritesNothing) {
  const std::string path = tmp("invalid_scan.csv");
  std::filesystem::remove(path);
  const CliRun r = call({"gap", "scan", "--kind", "lemma3", "--p", "0,1,3", "--theta", "0,1,3", "--csv", path});
  EXPECT_EQ(r.code, kExitInvalid);
  EXPECT_FALSE(std::filesystem::exists(path));
  EXPECT_FALSE(std::filesystem::exists(path + ".tmp"));
  EXPECT_EQ(call({"gap", "scan", "--kind", "lemma3", "--p", "-0.5,1,3", "--theta", "0.2"}).code, kExitInvalid);
  EXPECT_EQ(call({"gap", "scan", "--kind", "other", "--theta", "0.2"}).code, kExitInvalid);
}

TEST(CliGapScan, CsvIsByteIdentical) {
  const std::string a = tmp("scan_a.csv"), b = tmp("scan_b.csv");
  const std::vector<std::string> base = {"gap", "scan", "--kind", "lemma3", "--p", "0,1,9", "--theta", "0.05,1.5,9", "--csv"};
  auto args_a = base;
  args_a.push_back(a);
  auto args_b = base;
  args_b.push_back(b);
  ASSERT_EQ(call(args_a).code, 0);
  ASSERT_EQ(call(args_b).code, 0);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_EQ(slurp(a).substr(0, 12), "p,theta,gap\n");
}

TEST(CliOracle, Examples) {
  const RunReport r = call_json({"oracle", "--family", "random2q", "--state-seed", "3", "--N", "6", "--restarts", "20"});
  EXPECT_LE(std::abs(*r.find_result("oracle_minus_analytic")), 1e-4);
  EXPECT_TRUE(r.all_passed());

  const RunReport mc = call_json({"oracle", "--family", "mc2", "--p", "0.3", "--theta", "0.7", "--restarts", "10"});
  EXPECT_NEAR(*mc.find_result("analytic_eof"), ref::frozen::kMcCos07, 1e-12);
  EXPECT_TRUE(mc.all_passed());

  const RunReport pure = call_json({"oracle", "--family", "mc2", "--p", "1", "--theta", "0.5"});
  EXPECT_EQ(*pure.find_result("restarts"), 1);
  EXPECT_NEAR(*pure.find_result("oracle_min"), eof_mc_two_qubit(0.5), 1e-9);
}

TEST(CliOracle, ScaleGuardAndForce) {
  EXPECT_EQ(call({"oracle", "--family", "werner", "--d", "3", "--F", "-0.5"}).code, kExitScale);
  const CliRun forced = call({"oracle", "--family", "werner", "--d", "3", "--F", "-0.5", "--force", "--restarts", "2",
                           "--max-iters", "100"});
  EXPECT_EQ(forced.code, 0) << forced.err;
}

TEST(CliOracle, Deterministic) {
  const std::vector<std::string> args = {"oracle", "--family", "random2q", "--state-seed", "11", "--restarts", "5"};
  const RunReport a = call_json(args), b = call_json(args);
  EXPECT_EQ(*a.find_result("oracle_min"), *b.find_result("oracle_min"));
}

TEST(CliCompose, Examples) {
  const RunReport pair = call_json({"compose", "--factor", "mc2:theta=0.7", "--factor", "mc2:theta=0.4"});
  EXPECT_NEAR(*pair.find_result("eof"), ref::frozen::kMcPair, 1e-12);
  EXPECT_NEAR(*pair.find_result("cost"), ref::frozen::kMcPair, 1e-12);
  EXPECT_EQ(*pair.find_result("family_size"), 4);

  const RunReport sep =
      call_json({"compose", "--factor", "sep:tags=00/++", "--factor", "mc2:theta=0.7", "--weights", "0.3,0,0,0.7"});
  EXPECT_NEAR(*sep.find_result("eof"), ref::frozen::kMcCos07, 1e-12);

  const RunReport single = call_json({"compose", "--factor", "mc2:theta=0.7"});
  EXPECT_EQ(*single.find_result("family_size"), 2);
  EXPECT_NEAR(*single.find_result("eof"), ref::frozen::kMcCos07, 1e-12);
}

TEST(CliCompose, HypothesisViolation) {
  const CliRun r = call({"compose", "--factor", "werner:d=2,F=-0.5", "--factor", "isotropic:d=3,F=0.95"});
  EXPECT_EQ(r.code, kExitInvalid);
  EXPECT_NE(r.err.find("additive"), std::string::npos);
}

TEST(CliState, RoundTripThroughFile) {
  const std::string path = tmp("state_roundtrip.json");
  ASSERT_EQ(call({"state", "--family", "lemma3", "--p", "0.3", "--c", "0.2,0.4,0.5,0.7416198487095663", "--f",
                  "3", "--out", path})
                .code,
            0);
  const BipartiteDensity back = read_state_file(path);
  const BipartiteDensity expect = lemma3_mc(0.3, {0.2, 0.4, 0.5, 0.7416198487095663}, 3);
  EXPECT_TRUE(back.matrix() == expect.matrix());
  EXPECT_EQ(back.dims(), BipartiteDims(4, 4));

  const std::string w = tmp("state_werner.json");
  ASSERT_EQ(call({"state", "--family", "werner", "--d", "2", "--F", "-0.5", "--out", w}).code, 0);
  const RunReport e = call_json({"eof", "--state", w});
  EXPECT_NEAR(*e.find_result("eof"), ref::frozen::kWernerHalf, 1e-12);
}

TEST(StateFile, ExactRoundTripAndValidation) {
  const BipartiteDensity rho = random_density(BipartiteDims(2, 3), 3, 123);
  EXPECT_TRUE(state_from_json(nlohmann::json::parse(state_to_json(rho).dump())).matrix() == rho.matrix());

  nlohmann::json j = state_to_json(mc_two_qubit(0.3, 0.7));
  j["dA"] = 3;
  EXPECT_THROW(state_from_json(j), ShapeError);
  j = state_to_json(mc_two_qubit(0.3, 0.7));
  j["matrix"][0][0][0] = 2.0;
  EXPECT_THROW(state_from_json(j), NormalizationError);
  j = state_to_json(mc_two_qubit(0.3, 0.7));
  j["matrix"][0][1] = {0.3, 0.0};
  EXPECT_THROW(state_from_json(j), HermiticityError);
  EXPECT_THROW(state_from_json(nlohmann::json::object()), ParameterError);
  EXPECT_THROW(read_state_file(tmp("does_not_exist.json")), ParameterError);
}

TEST(RunReport, JsonRoundTrip) {
  RunReport r;
  r.command = "od verify --family mc2";
  r.param("family", "mc2(p=0.3, theta=0.7)");
  r.result("eof", 0.1 + 0.2);
  r.result("tiny", 1.2345678901234567e-300);
  r.check("reconstruction", true, 1.1e-16, 1e-9);
  r.check("oracle", false, -0.04, 1e-4);
  r.note("a note");
  r.seed = 0xFFFFFFFFFFFFFFFFULL;
  r.wall_time_s = 0.123456789;
  const RunReport back = report_from_json(nlohmann::json::parse(to_json(r).dump()));
  EXPECT_EQ(back, r);
  EXPECT_FALSE(back.all_passed());
  RunReport no_seed;
  EXPECT_EQ(report_from_json(to_json(no_seed)), no_seed);
}

TEST(FamilySpec, Parsing) {
  EXPECT_EQ(parse_c_vector("uniform", 4).size(), 4u);
  EXPECT_THROW(parse_c_vector("uniform", 0), ParameterError);
  EXPECT_THROW(parse_c_vector("0.6,0.8", 3), ParameterError);
  const FamilyParams f = parse_factor("lemma3:p=0.5,d=3,f=2,c=uniform");
  EXPECT_EQ(family_name(f), "lemma3");
  EXPECT_EQ(std::get<Lemma3Mc>(parse_factor("lemma3:p=0.5,f=1,c=0.6/0.8")).c.size(), 2u);
  EXPECT_THROW(parse_factor("mc2:theta"), ParameterError);
  EXPECT_THROW(parse_factor("mc2:theta=abc"), ParameterError);
  EXPECT_THROW(parse_double("x", "1.5e"), ParameterError);
}
