#pragma once

#include <string>

#include <json.hpp>

#include "creutz/fitting.hpp"
#include "creutz/io/bundle.hpp"
#include "creutz/io/config.hpp"

namespace creutz::io {

// Fixed CSV schemas.
inline constexpr const char* kBandsColumns = "k,E_flat,E_disp,sigma_z_flat,sigma_z_disp";
inline constexpr const char* kSpectrumColumns = "detuning_mhz,R";
inline constexpr const char* kSweepColumns = "phi_rad,rbar_eta,rbar_inv_eta";
inline constexpr const char* kRatioColumns = "phi_rad,ratio_eta,ratio_inv_eta";
inline constexpr const char* kProfileColumns = "cell_j,prob_b";
inline constexpr const char* kMeanColumns = "eta,mean_rbar";
inline constexpr const char* kClsColumns = "leg,cell,amp_re,amp_im,residual_mhz";

enum class PhaseConvention {
  MinusU,  // x = sin(u), y = sin(-u + p)
  PlusU,   // x = sin(u), y = sin(u + p); reported as pi - p
};

struct CommandOptions {
  int threads = 1;
  std::string input_path;  // fit
  std::string x_column;    // fit; default: second-to-last column
  std::string y_column;    // fit; default: last column
  PhaseConvention convention = PhaseConvention::MinusU;
};

ResultBundle cmd_bands(const RunConfig& cfg, const CommandOptions& opts = {});
ResultBundle cmd_spectrum(const RunConfig& cfg, const CommandOptions& opts = {});
ResultBundle cmd_sweep(const RunConfig& cfg, const CommandOptions& opts = {});
ResultBundle cmd_cls(const RunConfig& cfg, const CommandOptions& opts = {});
/// Reads opts.input_path.
ResultBundle cmd_fit(const RunConfig& cfg, const CommandOptions& opts);
/// Same as cmd_fit with the CSV text supplied directly.
ResultBundle cmd_fit_text(const RunConfig& cfg, const std::string& csv_text,
                          const std::string& source, const CommandOptions& opts);

/// Dispatch by name: bands | spectrum | sweep | cls | fit.
ResultBundle run_command(const std::string& name, const RunConfig& cfg, const CommandOptions& opts);

/// Fit summary as emitted in fit JSON files.
nlohmann::json ellipse_json(const EllipseFit& fit, PhaseConvention convention = PhaseConvention::MinusU);

/// Compact label for file names, "%.6g".
std::string value_tag(double v);

}  // namespace creutz::io
