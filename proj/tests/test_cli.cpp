#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code = -1;
  std::string stdout_text;
};

RunResult run_cli(const std::string& args) {
  const fs::path out = fs::temp_directory_path() / "msturm_cli_out.txt";
  const std::string cmd =
      std::string(MSTURM_CLI_PATH) + " " + args + " > " + out.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  RunResult res;
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  res.stdout_text = ss.str();
  return res;
}

fs::path temp_file(const std::string& name) { return fs::temp_directory_path() / name; }

}  // namespace

TEST_CASE("example emission and verification round trip") {
  const fs::path problem = temp_file("msturm_sphere.json");
  // k = (3 pi / 2)^2 = 22.2066...
  const RunResult emit = run_cli("example static-sphere --k 22.206609902451056 --emit " +
                                 problem.string());
  REQUIRE(emit.exit_code == 0);
  REQUIRE(fs::exists(problem));

  const RunResult verify =
      run_cli("verify --problem " + problem.string() + " --grid 50 --mesh 128");
  CHECK(verify.exit_code == 0);
  const auto j = nlohmann::json::parse(verify.stdout_text);
  CHECK(j["index_theorem"]["lhs"] == 1);
  CHECK(j["index_theorem"]["rhs"] == 1);
  CHECK(j["index_theorem"]["pass"] == true);
  CHECK(j["all_pass"] == true);
}

TEST_CASE("index subcommand on a flat problem") {
  const fs::path problem = temp_file("msturm_flat.json");
  REQUIRE(run_cli("example flat --emit " + problem.string()).exit_code == 0);
  const RunResult res = run_cli("index --problem " + problem.string() +
                                " --sigma 1.0 --mesh 64 --space h0");
  REQUIRE(res.exit_code == 0);
  const auto j = nlohmann::json::parse(res.stdout_text);
  CHECK(j["n_minus"] == 0);
  CHECK(j["nullity"] == 0);
}

TEST_CASE("scan writes the CSV with the normative columns") {
  const fs::path problem = temp_file("msturm_flat2.json");
  const fs::path csv = temp_file("msturm_scan.csv");
  REQUIRE(run_cli("example flat --emit " + problem.string()).exit_code == 0);
  const RunResult res = run_cli("scan --problem " + problem.string() +
                                " --grid 10 --mesh 32 --out " + csv.string());
  REQUIRE(res.exit_code == 0);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "sigma,mu,mu0,nullity0");
  int rows = 0;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == 10);
}

TEST_CASE("validate prints a report and exits 0") {
  const fs::path problem = temp_file("msturm_adm.json");
  REQUIRE(run_cli("example flat-admissible --emit " + problem.string()).exit_code == 0);
  const RunResult res = run_cli("validate --problem " + problem.string());
  CHECK(res.exit_code == 0);
  const auto j = nlohmann::json::parse(res.stdout_text);
  CHECK(j["ok"] == true);
  CHECK(j["regime"] == "admissible");
}

TEST_CASE("focal and pseudo-focal reports agree for the static example") {
  const fs::path problem = temp_file("msturm_sphere2.json");
  REQUIRE(run_cli("example static-sphere --k 22.206609902451056 --emit " + problem.string())
              .exit_code == 0);
  const RunResult focal = run_cli("focal --problem " + problem.string());
  const RunResult pseudo = run_cli("pseudo-focal --problem " + problem.string());
  REQUIRE(focal.exit_code == 0);
  REQUIRE(pseudo.exit_code == 0);
  const auto jf = nlohmann::json::parse(focal.stdout_text);
  const auto jp = nlohmann::json::parse(pseudo.stdout_text);
  REQUIRE(jf["instants"].size() == 1);
  REQUIRE(jp["instants"].size() == 1);
  CHECK(std::abs(jf["instants"][0]["t"].get<double>() - 2.0 / 3.0) <= 1e-6);
}

TEST_CASE("deterministic output bytes") {
  const fs::path problem = temp_file("msturm_rand.json");
  REQUIRE(run_cli("example random --seed 5 --emit " + problem.string()).exit_code == 0);
  const RunResult a = run_cli("focal --problem " + problem.string());
  const RunResult b = run_cli("focal --problem " + problem.string());
  CHECK(a.stdout_text == b.stdout_text);
}

TEST_CASE("exit codes") {
  SUBCASE("usage error: unknown flag") {
    CHECK(run_cli("index --bogus 1").exit_code == 1);
  }
  SUBCASE("usage error: unknown subcommand") {
    CHECK(run_cli("frobnicate").exit_code == 1);
  }
  SUBCASE("schema error: unreadable file") {
    CHECK(run_cli("focal --problem /nonexistent/x.json").exit_code == 2);
  }
  SUBCASE("schema error: malformed json") {
    const fs::path bad = temp_file("msturm_bad.json");
    std::ofstream(bad) << "{ not json";
    CHECK(run_cli("focal --problem " + bad.string()).exit_code == 2);
  }
  SUBCASE("regime error: generic Y") {
    // A generic-Y problem: Y integrated from dependent initial data.
    const fs::path gen = temp_file("msturm_generic.json");
    nlohmann::json j;
    j["n"] = 2;
    j["g"] = {{-1.0, 0.0}, {0.0, 1.0}};
    j["R"] = {{"kind", "constant"}, {"value", {{0.2, 0.5}, {-0.5, 0.1}}}};
    // Samples of Y'' = R Y from Y(0) = e0, Y'(0) = 0 (trapezoid-refined RK4
    // equivalent baked offline would drift; a dense sampled polynomial fit
    // is enough to stay within the residual budget at 513 nodes).
    const int M = 513;
    nlohmann::json samples = nlohmann::json::array();
    // Power series of the solution up to t^8 (converges fast for |R| ~ 0.5).
    // Y = sum A_k t^k with A_0 = e0, A_1 = 0, A_{k+2} = R A_k / ((k+1)(k+2)).
    Eigen::Matrix2d R;
    R << 0.2, 0.5, -0.5, 0.1;
    std::vector<Eigen::Vector2d> A(11, Eigen::Vector2d::Zero());
    A[0] = Eigen::Vector2d(1.0, 0.0);
    for (int k = 0; k + 2 < static_cast<int>(A.size()); ++k) {
      A[k + 2] = R * A[k] / ((k + 1.0) * (k + 2.0));
    }
    for (int i = 0; i < M; ++i) {
      const double t = static_cast<double>(i) / (M - 1);
      Eigen::Vector2d y = Eigen::Vector2d::Zero();
      double tk = 1.0;
      for (const auto& a : A) {
        y += a * tk;
        tk *= t;
      }
      samples.push_back({y(0), y(1)});
    }
    j["Y"] = {{"kind", "sampled"}, {"samples", samples}};
    j["P"] = nlohmann::json::array();
    j["S_P"] = nlohmann::json::array();
    std::ofstream(gen) << j.dump();
    CHECK(run_cli("verify --problem " + gen.string() + " --grid 10 --mesh 32").exit_code == 3);
  }
}
