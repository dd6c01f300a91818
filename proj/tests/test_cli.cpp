#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "causent/cli.hpp"
#include "causent/discrete_net.hpp"
#include "causent/io.hpp"

namespace causent {
namespace {

namespace fs = std::filesystem;
using io::Json;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("causent_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string file(const std::string& name, const std::string& text) {
    const std::string path = (dir_ / name).string();
    std::ofstream(path) << text;
    return path;
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string model() {
    return file("model.json", R"({"nodes":[
      {"name":"X","card":2,"parents":[],"cpt":[[0.5,0.5]]},
      {"name":"Z","card":2,"parents":[],"cpt":[[0.5,0.5]]},
      {"name":"Y","card":2,"parents":["X","Z"],"cpt":[[1,0],[0,1],[0,1],[1,0]]}]})");
  }
  std::string partition() { return file("part.json", R"({"layers":[["X","Z"],["Y"]]})"); }

  fs::path dir_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST_F(CliTest, OptimizeDesignAtBoundary) {
  const auto r = run({"optimize-design", "--d", "0.125", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_NEAR(j["objective"].get<double>(), 0.25, 1e-9);
  EXPECT_EQ(j["k"].get<int>(), 2);
}

TEST_F(CliTest, AteRunsFixture) {
  const auto t = file("t.csv", "y\n6\n5\n4\n");
  const auto c = file("c.csv", "y\n3\n2\n1\n");
  const auto r = run({"ate", "--treat", t, "--ctrl", c, "--method", "runs"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_NEAR(j["z"].get<double>(), -1.8257, 1e-4);
  EXPECT_EQ(j["r"].get<int>(), 2);
}

TEST_F(CliTest, AteErl) {
  const auto data = file("erl.csv", "y,exposure,exposure_mean,exposure_var\n2,1,0.5,0.25\n");
  const auto r = run({"ate", "--method", "erl", "--data", data});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_DOUBLE_EQ(Json::parse(r.out)["tau_hat"].get<double>(), 8.0);
}

TEST_F(CliTest, DensityOfBipartiteCounts) {
  const auto r = run({"density", "--rows", "9800000", "--cols", "121000", "--relations", "83000000"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_NEAR(j["d"].get<double>(), 83e6 / (9.8e6 * 121000.0), 1e-15);
  EXPECT_NEAR(j["d"].get<double>(), 7.0e-5, 0.05e-5);
}

TEST_F(CliTest, DensityOfRelationsFile) {
  const auto f = file("rel.txt", "1 2\n2 3\n");
  const auto r = run({"density", "--relations-file", f});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["relations"].get<int>(), 3);
  EXPECT_NEAR(j["d"].get<double>(), 3.0 / 9.0, 1e-12);
}

TEST_F(CliTest, InterveneRoundTripIsCanonical) {
  const auto out = path("ps.json");
  const auto r = run({"intervene", "--model", model(), "--edges", "X->Y", "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string written = slurp(out);
  const DiscreteNet reread = io::net_from_json(Json::parse(written));
  EXPECT_EQ(io::canonical_json(io::net_to_json(reread)), written);
  const DiscreteNet direct = intervene(io::net_from_json(io::read_json_file(path("model.json"))),
                                       io::parse_edges("X->Y", io::net_from_json(io::read_json_file(path("model.json")))));
  EXPECT_EQ(io::canonical_json(io::net_to_json(direct)), written);
}

TEST_F(CliTest, InfluenceReport) {
  const auto r = run({"influence", "--model", model(), "--edges", "X->Y", "--family", "kl", "--report", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_NEAR(j["total"].get<double>(), std::log(2.0), 1e-11);
  EXPECT_NEAR(j["per_target"]["Y"].get<double>(), std::log(2.0), 1e-11);
  const auto p = run({"influence", "--model", model(), "--edges", "X->Y", "--partition", partition()});
  ASSERT_EQ(p.code, 0) << p.err;
}

TEST_F(CliTest, SemInfluenceChain) {
  const auto m = file("sem.json", R"({"n":2,"order":[1,2],"A":[[0,0],[1,0]],"noise_vars":[1,1]})");
  const auto r = run({"sem-influence", "--model", m, "--edges", "1->2", "--family", "kl"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(Json::parse(r.out)["divergence"].get<double>(), 0.5 * std::log(2.0), 1e-11);
}

TEST_F(CliTest, TestInfluenceDetectsXor) {
  const auto r = run({"test-influence", "--model", model(), "--partition", partition(), "--edges", "X->Y", "--eps",
                      "0.3", "--seed", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(Json::parse(r.out)["reject_null"].get<bool>());
}

TEST_F(CliTest, ShortSampleFileExitsTwo) {
  const auto obs = file("obs.csv", "X,Z,Y\n0,0,0\n1,0,1\n");
  const auto r = run({"test-influence", "--model", model(), "--partition", partition(), "--edges", "X->Y", "--obs",
                      obs, "--int", obs});
  EXPECT_EQ(r.code, cli::kExitInsufficientSamples);
  EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, ValidationFailuresExitOne) {
  EXPECT_EQ(run({"no-such-command"}).code, cli::kExitInvalid);
  EXPECT_EQ(run({"optimize-design", "--d", "0.7"}).code, cli::kExitInvalid);
  EXPECT_EQ(run({"intervene", "--model", path("missing.json"), "--edges", "X->Y"}).code, cli::kExitInvalid);
  EXPECT_EQ(run({"intervene", "--model", model(), "--edges", "Y->X"}).code, cli::kExitInvalid);
  const auto bad = file("bad.json", R"({"nodes":[{"name":"A","card":2,"parents":[],"cpt":[[0.5,0.6]]}]})");
  const auto r = run({"influence", "--model", bad, "--edges", "A->A"});
  EXPECT_EQ(r.code, cli::kExitInvalid);
  EXPECT_NE(r.err.find("bad.json"), std::string::npos) << r.err;
}

TEST_F(CliTest, HelpExitsZero) { EXPECT_EQ(run({"--help"}).code, 0); }

TEST_F(CliTest, GofPearson) {
  const auto r = run({"gof", "--counts", "30,70", "--lambda", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(Json::parse(r.out)["statistic"].get<double>(), 16.0, 1e-12);
}

TEST_F(CliTest, EntropyCurveColumnsAgree) {
  const auto out = path("curve.csv");
  ASSERT_EQ(run({"entropy-curve", "--dmin", "0.01", "--dmax", "0.1875", "--steps", "12", "--out", out}).code, 0);
  const io::Csv csv = io::read_csv_file(out);
  const auto closed = io::numeric_column(csv, "c_closed_form_if_any", out);
  const auto numeric = io::numeric_column(csv, "c_numeric", out);
  ASSERT_EQ(closed.size(), 12u);
  for (std::size_t i = 0; i < closed.size(); ++i) EXPECT_NEAR(closed[i], numeric[i], 1e-3) << i;
}

TEST_F(CliTest, EnumerateTotals) {
  const auto r = run({"enumerate", "--n", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(Json::parse(r.out)["total"].get<int>(), 219);
}

TEST_F(CliTest, OrderReport) {
  const auto r = run({"order", "--edges", "1->2,1->3,2->4,3->4"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["relation_count"].get<int>(), 5);
  EXPECT_EQ(j["height"].get<int>(), 3);
}

TEST_F(CliTest, DivergenceFamilies) {
  const auto p = file("p.json", "[0.5,0.5]");
  const auto q = file("q.json", R"({"probs":[0.25,0.75]})");
  const auto r = run({"divergence", "--family", "kl", "--p", p, "--q", q});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(Json::parse(r.out)["value"].get<double>(), 0.5 * std::log(0.5 / 0.25) + 0.5 * std::log(0.5 / 0.75),
              1e-11);
}

TEST_F(CliTest, SimulateIsDeterministicGivenSeed) {
  const auto once = [&](const std::string& tag, const std::string& seed) {
    const auto r = run({"simulate", "--layers", "3,2", "--p", "0.6", "--card", "2", "--samples", "200", "--seed", seed,
                        "--out-model", path("m" + tag + ".json"), "--out-samples", path("s" + tag + ".csv"),
                        "--out-partition", path("p" + tag + ".json")});
    EXPECT_EQ(r.code, 0) << r.err;
    return slurp(path("m" + tag + ".json")) + slurp(path("s" + tag + ".csv"));
  };
  const auto a = once("a", "11"), b = once("b", "11"), c = once("c", "12");
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  const DiscreteNet net = io::net_from_json(io::read_json_file(path("ma.json")));
  EXPECT_NO_THROW(io::net_partition_from_json(io::read_json_file(path("pa.json")), net));
  const auto samples = io::samples_from_csv(io::read_csv_file(path("sa.csv")), net, "sa.csv");
  EXPECT_EQ(samples.rows, 200u);
}

TEST_F(CliTest, SeededTestInfluenceIsDeterministic) {
  const std::vector<std::string> args{"test-influence", "--model",  model(), "--partition", partition(),
                                      "--edges",        "X->Y",     "--seed", "5"};
  EXPECT_EQ(run(args).out, run(args).out);
}

}  // namespace
}  // namespace causent
