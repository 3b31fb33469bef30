#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef MOYALSPIN_CLI_PATH
#error "MOYALSPIN_CLI_PATH must name the CLI executable"
#endif

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int status = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Sandbox {
 public:
  Sandbox() {
    dir_ = fs::temp_directory_path() /
           ("moyalspin_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++));
    fs::create_directories(dir_);
  }
  ~Sandbox() {
    std::error_code ec;
    fs::remove_all(dir_, ec);
  }
  fs::path path(const std::string& name) const { return dir_ / name; }

  RunResult run(const std::string& args) const {
    const fs::path out = path("stdout.txt"), err = path("stderr.txt");
    const std::string cmd = std::string("\"") + MOYALSPIN_CLI_PATH + "\" " + args + " >\"" +
                            out.string() + "\" 2>\"" + err.string() + "\"";
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

  void write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name), std::ios::binary) << text;
  }

 private:
  fs::path dir_;
  static inline int counter_ = 0;
};

}  // namespace

TEST_CASE("cli scenarios succeed with defaults") {
  Sandbox box;
  for (const char* scenario : {"quantizer-check", "star-check", "wigner", "landau", "resonance"}) {
    CAPTURE(scenario);
    const std::string prefix = box.path(scenario).string();
    const RunResult r = box.run("--n-points 64 --pairs 20 --output \"" + prefix + "\" " + scenario);
    CHECK(r.status == 0);
    CHECK(fs::exists(prefix + ".csv"));
    REQUIRE(fs::exists(prefix + ".json"));
    const auto header = nlohmann::json::parse(slurp(prefix + ".json"));
    CHECK(header["all_passed"] == true);
    CHECK(header["checks"].size() > 0);
  }
}

TEST_CASE("cli exit codes") {
  Sandbox box;
  const std::string out = " --output \"" + box.path("x").string() + "\" ";

  const RunResult zero = box.run("--kernel cosine --epsilon 1.5707963267948966" + out +
                                 "quantizer-check");
  CHECK(zero.status == 2);
  CHECK(zero.err.find("(k,l)=(0,0)") != std::string::npos);

  CHECK(box.run("--spin-dim 2 --kernel parity" + out + "quantizer-check").status == 0);
  CHECK(box.run("--spin-dim 0" + out + "quantizer-check").status == 2);
  CHECK(box.run("--config \"" + box.path("missing.json").string() + "\" emit-config").status == 3);
  CHECK(box.run("--output \"" + box.path("no/such/dir/x").string() + "\" quantizer-check").status ==
        3);
  CHECK(box.run("--n-points 100" + out + "wigner").status == 2);
  CHECK(box.run("--B3 -1" + out + "landau").status == 2);
  CHECK(box.run("--a 0.5" + out + "resonance").status == 2);
  CHECK(box.run("--dt 10" + out + "resonance").status == 2);
  CHECK(box.run("--format xml" + out + "landau").status == 2);
}

TEST_CASE("cli configuration files") {
  Sandbox box;

  SUBCASE("emit-config round trip is byte-identical") {
    const RunResult first = box.run("--N 2 --epsilon 0.25 emit-config --scenario landau");
    REQUIRE(first.status == 0);
    box.write("cfg.json", first.out);
    const RunResult second = box.run("--config \"" + box.path("cfg.json").string() + "\" emit-config");
    REQUIRE(second.status == 0);
    CHECK(first.out == second.out);
    const auto j = nlohmann::json::parse(first.out);
    CHECK(j["scenario"] == "landau");
    CHECK(j["landau"]["N"] == 2);
    CHECK(j["kernel"]["epsilon"] == 0.25);
  }

  SUBCASE("flags override file values") {
    box.write("cfg.json", R"({"spin_dim": 3, "grid": {"n_points": 32}})");
    const RunResult r =
        box.run("--config \"" + box.path("cfg.json").string() + "\" --spin-dim 5 emit-config");
    REQUIRE(r.status == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["spin_dim"] == 5);
    CHECK(j["grid"]["n_points"] == 32);
  }

  SUBCASE("unknown keys are rejected by name") {
    box.write("cfg.json", R"({"grid": {"n_points": 32, "spacing": 0.1}})");
    const RunResult r = box.run("--config \"" + box.path("cfg.json").string() + "\" emit-config");
    CHECK(r.status == 2);
    CHECK(r.err.find("spacing") != std::string::npos);
  }

  SUBCASE("malformed json") {
    box.write("cfg.json", "{\"spin_dim\": ");
    CHECK(box.run("--config \"" + box.path("cfg.json").string() + "\" emit-config").status == 2);
  }

  SUBCASE("run uses the configured scenario") {
    box.write("cfg.json", R"({"scenario": "landau", "landau": {"N": 3}, "physics": {"B3": 2.0, "e0": -1.0}})");
    const std::string prefix = box.path("run").string();
    const RunResult r = box.run("--config \"" + box.path("cfg.json").string() + "\" --output \"" +
                                prefix + "\" run");
    CHECK(r.status == 0);
    CHECK(r.out.find("E_N = 8.5") != std::string::npos);
    const auto header = nlohmann::json::parse(slurp(prefix + ".json"));
    CHECK(header["energy"] == 8.5);
  }
}

TEST_CASE("cli outputs") {
  Sandbox box;

  SUBCASE("resonance probability peaks at one") {
    const std::string prefix = box.path("res").string();
    REQUIRE(box.run("--output \"" + prefix + "\" resonance").status == 0);
    std::istringstream csv(slurp(prefix + ".csv"));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "t,gamma0,gamma1,gamma2,p_plus");
    double peak = 0.0;
    int rows = 0;
    while (std::getline(csv, line)) {
      peak = std::max(peak, std::stod(line.substr(line.rfind(',') + 1)));
      ++rows;
    }
    CHECK(rows == 10001);
    CHECK(peak == doctest::Approx(1.0).epsilon(1e-6));
  }

  SUBCASE("json format embeds the data") {
    const std::string prefix = box.path("lan").string();
    REQUIRE(box.run("--n-points 16 --format json --output \"" + prefix + "\" landau").status == 0);
    CHECK_FALSE(fs::exists(prefix + ".csv"));
    const auto j = nlohmann::json::parse(slurp(prefix + ".json"));
    CHECK(j["data"].size() == 256);
  }

  SUBCASE("repeated runs are byte-identical") {
    for (const char* scenario : {"wigner", "resonance"}) {
      const std::string a = box.path(std::string(scenario) + "_a").string();
      const std::string b = box.path(std::string(scenario) + "_b").string();
      REQUIRE(box.run("--n-points 32 --output \"" + a + "\" " + scenario).status == 0);
      REQUIRE(box.run("--n-points 32 --output \"" + b + "\" " + scenario).status == 0);
      CHECK(slurp(a + ".csv") == slurp(b + ".csv"));
    }
  }
}
