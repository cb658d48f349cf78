#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const fs::path root = fs::temp_directory_path() / "creutz_cli_tests";

int sim(const std::string& args, const std::string& env = "") {
  const std::string cmd =
      env + " " + std::string(CREUTZ_SIM_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path write(const std::string& name, const std::string& text) {
  fs::create_directories(root);
  const fs::path p = root / name;
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

std::string read(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Every file except run.log, which carries wall-clock times.
std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file() && e.path().filename() != "run.log")
      out[fs::relative(e.path(), dir).string()] = read(e.path());
  return out;
}

fs::path fresh(const std::string& name) {
  const fs::path p = root / name;
  fs::remove_all(p);
  return p;
}

const char* kSweep = R"({"lattice": {"n_cells": 101},
  "probe": {"detuning_grid": {"points": 61}},
  "sweep": {"phi_points": 16, "eta_list": [3.8], "lissajous_eta_list": [6.8],
            "profiles": [{"eta": 20.55, "phi_over_pi": 0.64}], "profile_radius": 4}})";

}  // namespace

TEST_CASE("version and usage") {
  CHECK(sim("--version") == 0);
  CHECK(sim("--help") == 0);
  CHECK(sim("") == 1);
  CHECK(sim("frobnicate") == 1);
  CHECK(sim("bands --threads 0") == 1);
  CHECK(sim("fit") == 1);
  CHECK(sim("fit --input x.csv --convention sideways") == 1);
}

TEST_CASE("config errors exit 2") {
  const fs::path bad = write("bad.json", R"({"physical": {"omega1_mhz": "fifteen"}})");
  CHECK(sim("bands --config " + bad.string() + " --out " + fresh("bad").string()) == 2);
  const fs::path unknown = write("unknown.json", R"({"lattice": {"cells": 3}})");
  CHECK(sim("bands --config " + unknown.string() + " --out " + fresh("bad").string()) == 2);
  const fs::path malformed = write("malformed.json", "{\"physical\": ");
  CHECK(sim("bands --config " + malformed.string() + " --out " + fresh("bad").string()) == 2);
  CHECK(sim("bands --out " + fresh("bad").string(), "CREUTZ_SIM_THREADS=zero") == 2);
  const fs::path ragged = write("ragged.csv", "x,y\n1,2\n3\n");
  CHECK(sim("fit --input " + ragged.string() + " --out " + fresh("bad").string()) == 2);
}

TEST_CASE("numerical failures exit 3") {
  const fs::path flat = write("flat.csv", "x,y\n0,1\n1,1\n2,1\n3,1\n4,1\n5,1\n");
  CHECK(sim("fit --input " + flat.string() + " --out " + fresh("num").string()) == 3);
}

TEST_CASE("io failures exit 4") {
  CHECK(sim("bands --config /nonexistent/config.json") == 4);
  CHECK(sim("fit --input /nonexistent/data.csv --out " + fresh("io").string()) == 4);
  const fs::path blocker = write("blocker", "not a directory");
  CHECK(sim("bands --out " + (blocker / "sub").string()) == 4);
}

TEST_CASE("bundle layout") {
  const fs::path out = fresh("layout");
  REQUIRE(sim("bands --svg --out " + out.string()) == 0);
  for (const char* f : {"bands.csv", "bands.svg", "metadata.json", "config.resolved.json", "run.log"})
    CHECK(fs::exists(out / f));
  const auto meta = nlohmann::json::parse(read(out / "metadata.json"));
  CHECK(meta["tool"] == "creutz-sim");
  CHECK(meta["command"] == "bands");
  CHECK(meta["config"] == nlohmann::json::parse(read(out / "config.resolved.json")));
}

TEST_CASE("repeated runs and thread counts give identical bytes") {
  const fs::path cfg = write("sweep.json", kSweep);
  const fs::path a = fresh("sweep_a"), b = fresh("sweep_b"), c = fresh("sweep_c");
  REQUIRE(sim("sweep --svg --config " + cfg.string() + " --out " + a.string() + " --threads 1") == 0);
  REQUIRE(sim("sweep --svg --config " + cfg.string() + " --out " + b.string() + " --threads 1") == 0);
  REQUIRE(sim("sweep --svg --config " + cfg.string() + " --out " + c.string(), "CREUTZ_SIM_THREADS=3") == 0);
  const auto sa = snapshot(a);
  CHECK(sa.size() > 8);
  CHECK(sa == snapshot(b));
  CHECK(sa == snapshot(c));
}

TEST_CASE("resolved config reproduces the run") {
  const fs::path cfg = write("spectrum.json", R"({"physical": {"phi_over_pi": 0.64, "eta": 10.6},
      "lattice": {"n_cells": 201}, "probe": {"detuning_grid": {"points": 81}},
      "doppler": {"model": "gaussian", "sigma_mhz": 2, "classes": 5}})");
  const fs::path first = fresh("rt_first"), second = fresh("rt_second");
  REQUIRE(sim("spectrum --config " + cfg.string() + " --out " + first.string()) == 0);
  REQUIRE(sim("spectrum --config " + (first / "config.resolved.json").string() + " --out " +
              second.string()) == 0);
  CHECK(snapshot(first) == snapshot(second));
}

TEST_CASE("fit command from a file") {
  std::string text = "u,x,y\n";
  const double pi = std::acos(-1.0);
  for (int i = 0; i < 24; ++i) {
    const double u = 2.0 * pi * i / 24;
    text += std::to_string(u) + "," + std::to_string(std::sin(u)) + "," +
            std::to_string(std::sin(-u + 0.4 * pi)) + "\n";
  }
  const fs::path in = write("lissajous.csv", text);
  const fs::path out = fresh("fit");
  REQUIRE(sim("fit --input " + in.string() + " --out " + out.string()) == 0);
  const auto fit = nlohmann::json::parse(read(out / "fit.json"));
  CHECK(fit["phase_difference_rad"].get<double>() == doctest::Approx(0.4 * pi).epsilon(1e-5));
  REQUIRE(sim("fit --input " + in.string() + " --x-column y --y-column x --out " + out.string()) == 0);
  REQUIRE(sim("fit --input " + in.string() + " --x-column nope --out " + out.string()) == 2);
}
