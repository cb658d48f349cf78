#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "creutz/bands.hpp"
#include "creutz/response.hpp"

namespace creutz::io {

// Explicit bounds, or lattice-dependent defaults when min/max are absent.
struct DetuningGridSpec {
  std::optional<double> min_mhz;
  std::optional<double> max_mhz;
  int points = 601;

  std::vector<double> resolve(const LatticeParams& params) const;
};

struct ProfileRequest {
  double eta;
  double phi_over_pi;
};

struct SweepConfig {
  int phi_points = 100;
  std::vector<double> eta_list{3.8, 10.6, 20.55};
  std::vector<double> lissajous_eta_list{6.8, 15.2};
  bool fixed_t3 = true;
  std::vector<ProfileRequest> profiles{
      {20.55, 0.64}, {20.55, 1.62}, {1.0 / 20.55, 0.9}, {1.0 / 20.55, 1.86}};
  int profile_radius = 20;
};

struct ClsConfig {
  int cell = 0;
  int n_cells = 41;
  ClsCoefficient coefficient = ClsCoefficient::EigenCondition;
};

struct RunConfig {
  LatticeParams lattice{15.0, 68.0, 233.5, 3.14159265358979323846};
  ProbeConfig probe;
  DetuningGridSpec grid;
  std::optional<std::pair<double, double>> window;  // band window when empty
  int n_cells = kDefaultCells;
  int n_k = 512;
  int gap_n_k = 2048;
  SweepConfig sweep;
  VelocityModel doppler;
  ClsConfig cls;
  std::string output_directory = "out";
  bool svg = false;

  // Lattice for a sweep eta: fixed t3 keeps omega1*omega2, otherwise omega1
  // is held and omega2 = omega1 * sqrt(eta).
  LatticeParams lattice_for_eta(double eta) const;
};

/// Parse and validate. Unknown keys are rejected; errors carry the JSON path.
RunConfig parse_config(const nlohmann::json& j);
RunConfig parse_config_text(const std::string& text);

/// Snapshot with every default spelled out. Re-parsing it yields the same
/// RunConfig. The output directory is an invocation detail and is left out.
nlohmann::json resolved_json(const RunConfig& cfg);

}  // namespace creutz::io
