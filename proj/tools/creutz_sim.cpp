// creutz-sim: command-line front end over the C API.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "creutz/creutz.h"

namespace {

enum Exit { kOk = 0, kUsage = 1, kConfig = 2, kNumerical = 3, kIo = 4, kInternal = 5 };

int exit_code(creutz_status s) {
  switch (s) {
    case CREUTZ_OK: return kOk;
    case CREUTZ_ERR_INVALID_ARGUMENT:
    case CREUTZ_ERR_CONFIG: return kConfig;
    case CREUTZ_ERR_NUMERICAL: return kNumerical;
    case CREUTZ_ERR_IO: return kIo;
    default: return kInternal;
  }
}

struct Args {
  std::string config_path;
  std::string out_dir;
  int threads = 0;
  bool svg = false;
  std::string input;
  std::string x_column;
  std::string y_column;
  std::string convention = "minus";
};

int resolve_threads(int flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("CREUTZ_SIM_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1 || v > 1024) {
      std::cerr << "error: CREUTZ_SIM_THREADS must be an integer in [1, 1024]\n";
      return -1;
    }
    return static_cast<int>(v);
  }
  return 1;
}

int run(const std::string& command, const Args& a) {
  std::string config;
  if (!a.config_path.empty()) {
    std::ifstream in(a.config_path, std::ios::binary);
    if (!in) {
      std::cerr << "error: cannot read config " << a.config_path << "\n";
      return kIo;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    config = ss.str();
  }
  const int threads = resolve_threads(a.threads);
  if (threads < 0) return kConfig;

  creutz_run_options opts{};
  opts.write_files = 1;
  opts.out_dir = a.out_dir.empty() ? nullptr : a.out_dir.c_str();
  opts.threads = threads;
  opts.svg = a.svg ? 1 : 0;
  opts.input_path = a.input.empty() ? nullptr : a.input.c_str();
  opts.x_column = a.x_column.empty() ? nullptr : a.x_column.c_str();
  opts.y_column = a.y_column.empty() ? nullptr : a.y_column.c_str();
  opts.plus_convention = a.convention == "plus" ? 1 : 0;

  creutz_result* result = nullptr;
  const creutz_status s = creutz_run(command.c_str(), config.c_str(), &opts, &result);
  if (s != CREUTZ_OK) {
    std::cerr << "error: " << creutz_last_error() << "\n";
    return exit_code(s);
  }
  const auto meta = nlohmann::json::parse(creutz_result_metadata(result));
  for (const auto& w : meta.at("warnings")) std::cerr << "warning: " << w.get<std::string>() << "\n";
  for (const auto& f : meta.at("files"))
    std::cout << f.at("sha256").get<std::string>() << "  " << f.at("name").get<std::string>() << "\n";
  creutz_result_destroy(result);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Creutz-ladder superradiance lattice simulator"};
  app.set_version_flag("--version", std::string(creutz_version()));
  app.require_subcommand(1);
  app.fallthrough();

  Args a;
  app.add_option("--config", a.config_path, "JSON run configuration");
  app.add_option("--out", a.out_dir, "output directory (default: output.directory)");
  app.add_option("--threads", a.threads, "worker threads (default: CREUTZ_SIM_THREADS or 1)")
      ->check(CLI::Range(1, 1024));
  app.add_flag("--svg", a.svg, "also write SVG plots");

  app.add_subcommand("bands", "band structure E(k) and <sigma_z>");
  app.add_subcommand("spectrum", "reflection spectrum and R-bar");
  app.add_subcommand("sweep", "flux sweeps, mean R-bar vs eta, Lissajous fits, profiles");
  app.add_subcommand("cls", "compact localized state and its residual");
  auto* fit = app.add_subcommand("fit", "ellipse fit of two CSV columns");
  fit->add_option("--input", a.input, "CSV file with a header row")->required();
  fit->add_option("--x-column", a.x_column, "x column (default: second-to-last)");
  fit->add_option("--y-column", a.y_column, "y column (default: last)");
  fit->add_option("--convention", a.convention, "phase model: minus (y = sin(-u + p)) or plus")
      ->check(CLI::IsMember({"minus", "plus"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  return run(app.get_subcommands().front()->get_name(), a);
}
