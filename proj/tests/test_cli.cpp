#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "mprisk/cli.hpp"
#include "mprisk/errors.hpp"

using namespace mprisk;
namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "mprisk_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string write_file(const std::string& name, const std::string& body) {
  const auto path = scratch(name);
  std::ofstream(path, std::ios::binary) << body;
  return path.string();
}

// Unsets MP_SOLVER_TOL for the duration of a test unless a value is given.
struct TolEnv {
  explicit TolEnv(const char* value = nullptr) {
    if (value) setenv("MP_SOLVER_TOL", value, 1); else unsetenv("MP_SOLVER_TOL");
  }
  ~TolEnv() { unsetenv("MP_SOLVER_TOL"); }
};

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("solve prints the pair") {
  TolEnv env;
  const auto r = run_cli({"solve", "--dist", "uniform", "--a", "1"});
  CHECK(r.code == 0);
  CHECK(r.out.find("m           0.666666") != std::string::npos);
  CHECK(r.out.find("p           0.666666") != std::string::npos);
}

TEST_CASE("solve json contract") {
  TolEnv env;
  const auto r = run_cli({"solve", "--dist", "exponential", "--rate", "1", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = Json::parse(r.out);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"m", "p", "a", "distortion", "w2", "residual", "method"});
  CHECK(j["m"].get<double>() == doctest::Approx(2.0));
  CHECK(j["p"].get<double>() == doctest::Approx(std::exp(-1.0)));
  CHECK(j["method"] == "fixed_point");
}

TEST_CASE("solve csv format and output file") {
  TolEnv env;
  const auto path = scratch("solve.csv").string();
  const auto r = run_cli({"solve", "--dist", "pareto", "--theta", "3", "--format", "csv", "-o", path});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == "m,p,a,distortion,w2,residual,method");
  const auto comma = row.find(',');
  CHECK(std::stod(row.substr(0, comma)) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(std::stod(row.substr(comma + 1)) == doctest::Approx(0.125).epsilon(1e-9));
  CHECK(row.substr(row.rfind(',') + 1) == "fixed_point");
}

TEST_CASE("input errors exit with 1") {
  TolEnv env;
  const auto r = run_cli({"solve", "--dist", "pareto", "--theta", "1.5"});
  CHECK(r.code == 1);
  CHECK(r.err.find("theta must exceed 2") != std::string::npos);
  CHECK(run_cli({"solve"}).code == 1);
  CHECK(run_cli({"solve", "--dist", "uniform", "--a", "1", "--data", "x.csv"}).code == 1);
  CHECK(run_cli({"solve", "--dist", "cauchy"}).code == 1);
  CHECK(run_cli({"solve", "--dist", "uniform", "--a", "abc"}).code == 1);
  CHECK(run_cli({"solve", "--dist", "uniform", "--a", "1", "--format", "xml"}).code == 1);
  CHECK(run_cli({"solve", "--dist", "uniform", "--a", "1", "--tol", "-1"}).code == 1);
  CHECK(run_cli({"frobnicate"}).code == 1);
  CHECK(run_cli({}).code == 1);
  CHECK(run_cli({"solve", "--data", scratch("absent.csv").string()}).code == 1);
}

TEST_CASE("help exits cleanly") {
  const auto r = run_cli({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("solve") != std::string::npos);
  CHECK(run_cli({"sweep", "--help"}).code == 0);
}

TEST_CASE("solver failure exits with 2") {
  TolEnv env;
  const auto path = write_file("flat.csv", "3\n3\n3\n");
  const auto r = run_cli({"solve", "--data", path});
  CHECK(r.code == 2);
  CHECK(r.err.find("solver failure") != std::string::npos);
}

TEST_CASE("data input with scaling") {
  TolEnv env;
  const auto path = write_file("losses.csv", "name,loss\na,1000000\nb,2000000\nc,3000000\nd,10000000\n");
  const auto r = run_cli({"solve", "--data", path, "--column", "loss", "--scale", "1e6", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = Json::parse(r.out);
  CHECK(j["m"].get<double>() == doctest::Approx(10.0));
  CHECK(j["p"].get<double>() == doctest::Approx(0.25));
  CHECK(j["method"] == "lloyd");
  const auto by_index = run_cli({"solve", "--data", path, "--column", "1", "--scale", "1e6", "--format", "json"});
  CHECK(by_index.out == r.out);
}

TEST_CASE("tolerance from the environment, flag wins") {
  {
    TolEnv env("0");  // read, and rejected as nonpositive
    const auto r = run_cli({"solve", "--dist", "uniform", "--a", "1"});
    CHECK(r.code == 1);
    CHECK(r.err.find("fp_tol") != std::string::npos);
    CHECK(run_cli({"solve", "--dist", "uniform", "--a", "1", "--tol", "1e-10"}).code == 0);
  }
  {
    TolEnv env("1e-3");
    const auto j = Json::parse(run_cli({"solve", "--dist", "gamma", "--alpha", "2", "--beta", "1", "--format", "json"}).out);
    CHECK(j["residual"].get<double>() <= 1e-3);
  }
  {
    TolEnv env("fast");
    CHECK(run_cli({"solve", "--dist", "uniform", "--a", "1"}).code == 1);
  }
}

TEST_CASE("sweep writes csv and svg") {
  TolEnv env;
  const auto csv = scratch("pareto.csv").string();
  const auto svg = scratch("pareto.svg").string();
  const auto r = run_cli({"sweep", "--dist", "pareto", "--param", "theta", "--from", "2.1", "--to", "10",
                          "--steps", "50", "--csv", csv, "--svg", svg, "--format", "csv"});
  CHECK(r.code == 0);
  CHECK(fs::file_size(svg) > 1000);
  std::ifstream in(csv);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == r.out);
}

TEST_CASE("sweep with a fixed second parameter") {
  TolEnv env;
  const auto r = run_cli({"sweep", "--dist", "gamma", "--param", "alpha", "--from", "0.1", "--to", "2.9",
                          "--steps", "15", "--beta", "2", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = Json::parse(r.out);
  CHECK(j["rows"].size() == 15);
}

TEST_CASE("sweep exit codes") {
  TolEnv env;
  CHECK(run_cli({"sweep", "--dist", "uniform", "--param", "a", "--from", "1", "--to", "2", "--steps", "0"}).code == 1);
  const auto partial = run_cli({"sweep", "--dist", "pareto", "--param", "theta", "--from", "1.5", "--to", "3", "--steps", "4"});
  CHECK(partial.code == 0);
  CHECK(partial.err.find("failed") != std::string::npos);
  CHECK(run_cli({"sweep", "--dist", "pareto", "--param", "theta", "--from", "1.1", "--to", "1.9", "--steps", "3"}).code == 2);
}

TEST_CASE("diagnose a law with a density") {
  TolEnv env;
  const auto r = run_cli({"diagnose", "--dist", "exponential", "--rate", "1", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = Json::parse(r.out);
  CHECK(j["sufficiency"]["holds"] == true);
  CHECK(j["sufficiency"]["value"].get<double>() == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(j["uniqueness"]["zeta_decreasing"] == true);
  const auto w = run_cli({"diagnose", "--dist", "weibull", "--alpha", "0.5", "--beta", "2"});
  CHECK(w.code == 0);
  CHECK(w.out.find("zeta=") != std::string::npos);
}

TEST_CASE("diagnose a sample") {
  TolEnv env;
  const auto path = write_file("diag.csv", "loss\n1\n2\n3\n10\n");
  const auto r = run_cli({"diagnose", "--data", path, "--column", "loss"});
  CHECK(r.code == 0);
  CHECK(r.out.find("sufficiency holds: not applicable") != std::string::npos);
  CHECK(r.out.find("m           10") != std::string::npos);
}

TEST_CASE("compare the two-risk example") {
  TolEnv env;
  const auto r = run_cli({"compare", "--risk", "discrete:0@0.9,1000@0.1", "--risk", "discrete:0@0.5,200@0.5",
                          "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = Json::parse(r.out);
  REQUIRE(j.size() == 2);
  CHECK(j[0]["mean"].get<double>() == doctest::Approx(100.0));
  CHECK(j[1]["mean"].get<double>() == doctest::Approx(100.0));
  CHECK(j[0]["m"].get<double>() == doctest::Approx(1000.0));
  CHECK(j[0]["p"].get<double>() == doctest::Approx(0.1));
  CHECK(j[1]["m"].get<double>() == doctest::Approx(200.0));
  CHECK(j[1]["p"].get<double>() == doctest::Approx(0.5));
  CHECK(j[0].contains("var_0.95"));
  CHECK(j[0].contains("es_0.99"));
}

TEST_CASE("compare uniform with exponential of the same mean") {
  TolEnv env;
  const auto svg = scratch("compare.svg").string();
  const auto r = run_cli({"compare", "--risk", "uniform:a=2", "--risk", "exponential:rate=1", "--format", "json",
                          "--svg", svg, "--levels", "0.5,0.9"});
  REQUIRE(r.code == 0);
  const auto j = Json::parse(r.out);
  CHECK(j[0]["p"].get<double>() > j[1]["p"].get<double>());
  CHECK(j[0]["m"].get<double>() < j[1]["m"].get<double>());
  CHECK(j[0]["var_0.5"].get<double>() == doctest::Approx(1.0));
  CHECK(j[1]["var_gap"].get<double>() <= 1e-8);
  CHECK(fs::exists(svg));
}

TEST_CASE("compare input errors") {
  TolEnv env;
  CHECK(run_cli({"compare", "--risk", "uniform:a=1"}).code == 1);
  CHECK(run_cli({"compare", "--risk", "uniform:a=1", "--risk", "uniform"}).code == 1);
  CHECK(run_cli({"compare", "--risk", "uniform:a=1", "--risk", "discrete:0@0.5,1@0.4"}).code == 1);
  CHECK(run_cli({"compare", "--risk", "uniform:a=1", "--risk", "pareto:theta=x"}).code == 1);
}

TEST_CASE("risk spec parsing") {
  const auto u = cli::parse_risk_spec("uniform:a=3");
  CHECK(u.dist->mean() == doctest::Approx(1.5));
  CHECK_FALSE(u.empirical);
  const auto g = cli::parse_risk_spec("gamma:alpha=2,beta=3");
  CHECK(g.dist->mean() == doctest::Approx(6.0));
  const auto d = cli::parse_risk_spec("discrete:0@0.25,4@0.75");
  CHECK(d.empirical);
  CHECK(d.dist->mean() == doctest::Approx(3.0));
  const auto path = write_file("spec.csv", "x,y\n1,10\n3,30\n");
  CHECK(cli::parse_risk_spec("csv:" + path + "#y", 10.0).dist->mean() == doctest::Approx(2.0));
  CHECK(cli::parse_risk_spec("csv:" + path).dist->mean() == doctest::Approx(2.0));
  CHECK_THROWS_AS(cli::parse_risk_spec("uniform"), InvalidArgument);
  CHECK_THROWS_AS(cli::parse_risk_spec("discrete:1,2"), InvalidArgument);
}

TEST_CASE("identical invocations give identical bytes") {
  TolEnv env;
  for (const char* fmt : {"json", "csv"}) {
    const std::vector<std::string> args{"compare", "--risk", "weibull:alpha=0.5,beta=2", "--risk",
                                        "gamma:alpha=0.3,beta=2", "--format", fmt};
    CHECK(run_cli(args).out == run_cli(args).out);
    const std::vector<std::string> sweep_args{"sweep", "--dist", "weibull", "--param", "alpha", "--from", "0.5",
                                              "--to", "4", "--steps", "8", "--beta", "1", "--format", fmt};
    CHECK(run_cli(sweep_args).out == run_cli(sweep_args).out);
  }
}

TEST_CASE("the installed binary maps errors to exit codes") {
  const std::string bin = MPRISK_CLI_PATH;
  auto status = [&](const std::string& args) {
    const int raw = std::system((bin + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  CHECK(status("solve --dist uniform --a 1") == 0);
  CHECK(status("solve --dist pareto --theta 1.5") == 1);
  CHECK(status("solve --data " + write_file("flat2.csv", "2\n2\n")) == 2);
  CHECK(status("--help") == 0);
}

}
