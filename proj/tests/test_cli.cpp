#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "reference/baseline_values.hpp"
#include "spdcfc/cli.hpp"

namespace {

using spdcfc::cli::kExitDomain;
using spdcfc::cli::kExitOk;
using spdcfc::cli::kExitUsage;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = spdcfc::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> with_baseline(std::vector<std::string> head) {
  for (const char* s : {"--rp-um", "53", "--mfd-um", "4.2", "--Mp", "0.07631", "--M", "0.07243", "--QK", "0.036215"}) {
    head.emplace_back(s);
  }
  return head;
}

double value_of(const std::string& text, const std::string& key) {
  std::istringstream is(text);
  std::string line;
  const std::string prefix = key + " = ";
  while (std::getline(is, line)) {
    if (line.rfind(prefix, 0) == 0) return std::stod(line.substr(prefix.size()));
  }
  FAIL("key not found: " << key);
  return 0.0;
}

std::string bbo_path() { return std::string(SPDCFC_DATA_DIR) + "/bbo_sellmeier.json"; }

std::string temp_file(const std::string& name, const std::string& content) {
  const auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream(p) << content;
  return p.string();
}

}  // namespace

TEST_CASE("eval at the baseline configurations") {
  Run r = run(with_baseline({"eval", "--L-mm", "3", "--mu", "49"}));
  CHECK(r.code == kExitOk);
  CHECK(value_of(r.out, "eta") == doctest::Approx(0.43).epsilon(0.02));
  CHECK(value_of(r.out, "xi") == doctest::Approx(1.37).epsilon(0.01));
  r = run(with_baseline({"eval", "--L-mm", "1", "--mu", "49"}));
  CHECK(r.code == kExitOk);
  CHECK(value_of(r.out, "eta") == doctest::Approx(0.62).epsilon(0.01));
}

TEST_CASE("eval prints nine significant digits") {
  const Run r = run({"eval", "--L-mm", "3", "--rp-um", "53", "--w-um", "1.48", "--mu", "49", "--Mp", "0.07631", "--M",
                     "0.07243", "--QK", "0.036215"});
  CHECK(r.out.find("eta = 0.435079926\n") != std::string::npos);
}

TEST_CASE("eval accepts lens geometry and beam diameter") {
  const Run r = run({"eval", "--L-mm", "3", "--rp-diam-um", "150", "--mfd-um", "4.2", "--f-mm", "15.4", "--dbl-mm",
                     "780", "--Mp", "0.07631", "--M", "0.07243", "--QK", "0.036215"});
  CHECK(r.code == kExitOk);
  CHECK(value_of(r.out, "eta") == doctest::Approx(0.433).epsilon(0.01));
}

TEST_CASE("eval json round-trips through --config bit for bit") {
  const Run first = run(with_baseline({"eval", "--L-mm", "3", "--mu", "49", "--format", "json"}));
  REQUIRE(first.code == kExitOk);
  const auto doc = nlohmann::json::parse(first.out);
  const std::string path = temp_file("spdcfc_roundtrip.json", first.out);
  const Run second = run({"eval", "--config", path, "--format", "json"});
  REQUIRE(second.code == kExitOk);
  const auto doc2 = nlohmann::json::parse(second.out);
  CHECK(doc2["result"]["eta"].get<double>() == doc["result"]["eta"].get<double>());
  CHECK(doc2 == doc);
  std::remove(path.c_str());
}

TEST_CASE("flags override config values") {
  const Run first = run(with_baseline({"eval", "--L-mm", "3", "--mu", "49", "--format", "json"}));
  const std::string path = temp_file("spdcfc_override.json", first.out);
  const Run r = run({"eval", "--config", path, "--L-mm", "1"});
  CHECK(r.code == kExitOk);
  CHECK(value_of(r.out, "eta") == doctest::Approx(0.623294688).epsilon(1e-8));
  std::remove(path.c_str());
}

TEST_CASE("eval with walk-offs derived from Sellmeier data") {
  const Run r = run({"eval", "--L-mm", "3", "--rp-um", "53", "--mfd-um", "4.2", "--mu", "49", "--sellmeier", bbo_path()});
  CHECK(r.code == kExitOk);
  CHECK(value_of(r.out, "eta") == doctest::Approx(0.43).epsilon(0.05));
}

TEST_CASE("sweep emits the CSV schema") {
  Run r = run(with_baseline({"sweep", "--L-range", "0.1:5:0.1", "--mu", "49"}));
  REQUIRE(r.code == kExitOk);
  std::istringstream is(r.out);
  std::string line;
  std::getline(is, line);
  CHECK(line == "L_mm,mu,xi,eta");
  int rows = 0;
  double eta_at_1mm = 0.0;
  while (std::getline(is, line)) {
    ++rows;
    if (line.rfind("1,", 0) == 0) eta_at_1mm = std::stod(line.substr(line.rfind(',') + 1));
  }
  CHECK(rows == 50);
  CHECK(eta_at_1mm == doctest::Approx(0.62).epsilon(0.01));

  r = run(with_baseline({"sweep", "--L-range", "1:1:1", "--mu", "49"}));
  CHECK(r.code == kExitOk);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 2);
}

TEST_CASE("sweep CSV matches the golden file") {
  const Run r = run({"sweep", "--L-range", "0.5:5:0.5", "--mu", "25,49,80", "--rp-um", "53", "--w-um", "1.48", "--Mp",
                     "0.07631", "--M", "0.07243", "--QK", "0.036215"});
  REQUIRE(r.code == kExitOk);
  std::ifstream golden(std::string(SPDCFC_GOLDEN_DIR) + "/sweep_baseline.csv");
  REQUIRE(golden);
  std::stringstream expected;
  expected << golden.rdbuf();
  CHECK(r.out == expected.str());
}

TEST_CASE("sweep defaults to the illustrative mu list and supports json") {
  const Run r = run(with_baseline({"sweep", "--L-range", "1:2:1", "--format", "json"}));
  REQUIRE(r.code == kExitOk);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["rows"].size() == 10);
  CHECK(doc["columns"][3] == "eta");
}

TEST_CASE("optimize over xi and mu agree") {
  Run by_xi = run(with_baseline({"optimize", "--var", "xi", "--bounds", "0.1:10", "--L-mm", "2"}));
  REQUIRE(by_xi.code == kExitOk);
  CHECK(value_of(by_xi.out, "eta_max") == doctest::Approx(0.49).epsilon(0.01));
  CHECK(by_xi.out.find("at_boundary = false") != std::string::npos);

  // xi in [0.1, 10] <-> mu in [0.1, 10] * r_p / w with w = 4.2/(2 sqrt 2).
  const double k = 53.0 / (4.2 / (2.0 * std::sqrt(2.0)));
  const std::string bounds = std::to_string(0.1 * k) + ":" + std::to_string(10.0 * k);
  const Run json_xi = run(with_baseline({"optimize", "--var", "xi", "--bounds", bounds, "--L-mm", "2", "--format", "json"}));
  const Run by_mu = run(with_baseline({"optimize", "--var", "mu", "--bounds", bounds, "--L-mm", "2", "--format", "json"}));
  REQUIRE(by_mu.code == kExitOk);
  const auto mu_doc = nlohmann::json::parse(by_mu.out);
  CHECK(std::abs(mu_doc["eta_max"].get<double>() - value_of(by_xi.out, "eta_max")) <= 1e-6);
  CHECK(mu_doc["variable"] == "mu");
  CHECK(json_xi.code == kExitOk);
}

TEST_CASE("oracle subcommand") {
  Run r = run(with_baseline({"oracle", "--L-mm", "3", "--mu", "49"}));
  CHECK(r.code == kExitOk);
  CHECK(value_of(r.out, "rel_deviation") <= 1e-4);
  CHECK(value_of(r.out, "eta_numeric") == doctest::Approx(value_of(r.out, "eta_closed")).epsilon(1e-4));

  r = run(with_baseline({"oracle", "--L-mm", "0.000001", "--mu", "49"}));
  CHECK(r.code == kExitOk);

  // Coarse grid with an unreachable target: documented failure path.
  r = run({"oracle", "--L-mm", "5", "--rp-um", "53", "--w-um", "1.48", "--mu", "7.16", "--Mp", "0.07631", "--M",
           "0.07243", "--QK", "0.036215", "--n-tau", "8", "--n-trans", "16", "--extent", "4", "--target", "1e-14"});
  CHECK(r.code == kExitDomain);
  CHECK(r.out.find("eta_numeric_coarse") != std::string::npos);
  CHECK(r.out.find("eta_closed") != std::string::npos);
}

TEST_CASE("params subcommand") {
  Run r = run({"params", "--Mp", "0.07631", "--M", "0.07243", "--QK", "0.036215"});
  CHECK(r.code == kExitOk);
  CHECK(value_of(r.out, "alpha1") == doctest::Approx(7.1348e-3).epsilon(1e-4));
  CHECK(value_of(r.out, "alpha2") == doctest::Approx(1.3266e-3).epsilon(1e-4));
  CHECK(value_of(r.out, "beta") == doctest::Approx(1.04922e-2).epsilon(1e-5));
  CHECK(r.out.find("D_fs_per_um") == std::string::npos);

  r = run({"params", "--Mp", "0", "--M", "0", "--QK", "0"});
  CHECK(r.code == kExitOk);
  CHECK(value_of(r.out, "alpha1") == 0.0);
  CHECK(value_of(r.out, "beta") == 0.0);

  r = run({"params", "--sellmeier", bbo_path()});
  CHECK(r.code == kExitOk);
  CHECK(value_of(r.out, "m_p") == doctest::Approx(0.07631).epsilon(0.10));
  CHECK(value_of(r.out, "m") == doctest::Approx(0.07243).epsilon(0.10));
  CHECK(value_of(r.out, "q_over_k") == doctest::Approx(0.036215).epsilon(0.10));
  CHECK(value_of(r.out, "D_fs_per_um") > 0.0);

  r = run({"params", "--sellmeier", bbo_path(), "--solve-cut", "--format", "json"});
  CHECK(r.code == kExitOk);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["cut_angle_deg"].get<double>() == doctest::Approx(40.37).epsilon(1e-3));
}

TEST_CASE("params falls back to the environment data path") {
  setenv(spdcfc::cli::kSellmeierEnv, bbo_path().c_str(), 1);
  const Run r = run({"params"});
  unsetenv(spdcfc::cli::kSellmeierEnv);
  CHECK(r.code == kExitOk);
  CHECK(value_of(r.out, "m_p") == doctest::Approx(0.07631).epsilon(0.10));
}

TEST_CASE("exit code 2 on usage errors") {
  const std::vector<std::vector<std::string>> cases = {
      {},
      {"frobnicate"},
      {"eval", "--bogus"},
      {"eval", "--L-mm", "3", "--mfd-um", "4.2", "--mu", "49", "--Mp", "0.07631", "--M", "0.07243", "--QK", "0.036215"},
      with_baseline({"eval", "--mu", "49"}),
      {"eval", "--L-mm", "3", "--rp-um", "53", "--mfd-um", "4.2", "--mu", "49", "--Mp", "0.07631"},
      with_baseline({"eval", "--L-mm", "3", "--f-mm", "15.4"}),
      with_baseline({"eval", "--L-mm", "3", "--mu", "49", "--format", "xml"}),
      with_baseline({"eval", "--L-mm", "3", "--mu", "49", "--w-um", "1.4"}),
      with_baseline({"sweep", "--L-range", "5:1:1", "--mu", "49"}),
      with_baseline({"sweep", "--L-range", "1:5", "--mu", "49"}),
      with_baseline({"sweep", "--L-range", "1:5:1", "--mu", "49,25"}),
      with_baseline({"sweep", "--mu", "49"}),
      with_baseline({"optimize", "--var", "mu", "--bounds", "0:10", "--L-mm", "2"}),
      with_baseline({"optimize", "--var", "w", "--bounds", "1:10", "--L-mm", "2"}),
      with_baseline({"optimize", "--var", "xi", "--bounds", "10:1", "--L-mm", "2"}),
      with_baseline({"optimize", "--var", "xi", "--L-mm", "2"}),
      {"params"},
      {"eval", "--config", "/nonexistent/cfg.json"},
  };
  unsetenv(spdcfc::cli::kSellmeierEnv);
  for (const auto& args : cases) {
    const Run r = run(args);
    INFO("args: " << (args.empty() ? std::string("<none>") : args.front()) << " ... (" << args.size() << ")");
    CHECK(r.code == kExitUsage);
    CHECK_FALSE(r.err.empty());
  }
}

TEST_CASE("exit code 2 on config documents with unknown keys") {
  const std::string path = temp_file("spdcfc_unknown.json", R"({"schema_version": 1, "experimnt": {}})");
  CHECK(run(with_baseline({"eval", "--config", path, "--L-mm", "3", "--mu", "49"})).code == kExitUsage);
  std::remove(path.c_str());
}

TEST_CASE("exit code 1 on domain errors") {
  const std::vector<std::vector<std::string>> cases = {
      with_baseline({"eval", "--L-mm", "-3", "--mu", "49"}),
      with_baseline({"eval", "--L-mm", "3", "--mu", "0"}),
      {"eval", "--L-mm", "3", "--rp-um", "53", "--mfd-um", "4.2", "--f-mm", "15.4", "--dbl-mm", "10", "--Mp", "0.07631",
       "--M", "0.07243", "--QK", "0.036215"},
      {"eval", "--L-mm", "3", "--rp-um", "53", "--mfd-um", "4.2", "--mu", "49", "--Mp", "-0.1", "--M", "0", "--QK", "0"},
      {"eval", "--L-mm", "3", "--rp-um", "-53", "--mfd-um", "4.2", "--mu", "49", "--Mp", "0.07", "--M", "0", "--QK", "0"},
      {"params", "--sellmeier", "/nonexistent/bbo.json"},
      {"params", "--sellmeier", bbo_path(), "--pump-um", "0.2"},
      with_baseline({"oracle", "--L-mm", "3", "--mu", "49", "--n-trans", "4"}),
  };
  for (const auto& args : cases) {
    const Run r = run(args);
    INFO("args size " << args.size() << ", stderr: " << r.err);
    CHECK(r.code == kExitDomain);
  }
}

TEST_CASE("help exits 0") {
  CHECK(run({"--help"}).code == kExitOk);
  CHECK(run({"eval", "--help"}).code == kExitOk);
}
