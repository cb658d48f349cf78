#include "creutz/io/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "creutz/bands.hpp"
#include "creutz/error.hpp"
#include "creutz/io/csv.hpp"
#include "creutz/io/svg.hpp"
#include "creutz/sweeps.hpp"

namespace creutz::io {

using nlohmann::json;

namespace {

constexpr double pi = std::numbers::pi;

std::vector<std::string> columns_of(const char* schema) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(schema);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  return out;
}

json hoppings_json(const LatticeParams& p) {
  const Hoppings t = derive_hoppings(p);
  json j = {{"t1_mhz", t.t1}, {"t2_mhz", t.t2}, {"t3_mhz", t.t3}};
  j["eta"] = t.eta ? json(*t.eta) : json(nullptr);
  return j;
}

json lattice_json(const LatticeParams& p) {
  return {{"omega1_mhz", p.omega1_mhz},
          {"omega2_mhz", p.omega2_mhz},
          {"delta_c_mhz", p.delta_c_mhz},
          {"phi_rad", p.phi},
          {"hoppings", hoppings_json(p)}};
}

json extremum_json(const Extremum& e) {
  return {{"phi_rad", e.phi}, {"phi_over_pi", e.phi / pi}, {"value", e.value}};
}

json extrema_json(const CurveExtrema& c) {
  return {{"max", extremum_json(c.max)}, {"min", extremum_json(c.min)}};
}

json sinusoid_json(const SinusoidFit& f) {
  return {{"offset", f.offset},
          {"amplitude", f.amplitude},
          {"phase_rad", f.phase},
          {"rms_residual", f.rms_residual},
          {"model", "offset + amplitude * sin(phi + phase)"}};
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Closed outline of the fitted conic (segment across the data for lines).
SvgSeries conic_outline(const EllipseFit& fit, const std::vector<Point2>& pts) {
  SvgSeries s;
  s.color = "#2ca02c";
  s.label = "fit";
  const auto& q = fit.conic;
  if (fit.degenerate) {
    // Line direction is perpendicular to the normal (A, B/2) up to scale.
    double lo = pts.front().x, hi = lo;
    for (const auto& p : pts) lo = std::min(lo, p.x), hi = std::max(hi, p.x);
    const double nx = std::sqrt(std::abs(q[0]));
    const double ny = std::copysign(std::sqrt(std::abs(q[2])), q[1]);
    if (ny == 0.0) return s;
    for (double x : {lo, hi}) {
      s.x.push_back(x);
      s.y.push_back(fit.center.y - nx / ny * (x - fit.center.x));
    }
    return s;
  }
  const double level = -fit.evaluate(fit.center.x, fit.center.y);
  for (int i = 0; i <= 360; ++i) {
    const double t = 2.0 * pi * i / 360;
    const double dx = std::cos(t), dy = std::sin(t);
    const double quad = q[0] * dx * dx + q[1] * dx * dy + q[2] * dy * dy;
    if (!(quad > 0.0) || !(level / quad >= 0.0)) continue;
    const double r = std::sqrt(level / quad);
    s.x.push_back(fit.center.x + r * dx);
    s.y.push_back(fit.center.y + r * dy);
  }
  return s;
}

std::string fit_svg(const EllipseFit& fit, const std::vector<Point2>& pts, const std::string& title,
                    const std::string& x_label, const std::string& y_label) {
  SvgPlot plot;
  plot.title = title;
  plot.x_label = x_label;
  plot.y_label = y_label;
  SvgSeries data;
  data.markers = true;
  data.color = "#1f77b4";
  data.label = "data";
  for (const auto& p : pts) {
    data.x.push_back(p.x);
    data.y.push_back(p.y);
  }
  plot.series.push_back(std::move(data));
  plot.series.push_back(conic_outline(fit, pts));
  return plot.render();
}

}  // namespace

std::string value_tag(double v) { return fmt("%.6g", v); }

json ellipse_json(const EllipseFit& fit, PhaseConvention convention) {
  double phase = fit.phase_difference;
  double full = fit.phase_difference_full;
  std::string model = "x = sin(u), y = sin(-u + phi_tilde); cos(phi_tilde) = B / (2 sqrt(A C))";
  if (convention == PhaseConvention::PlusU) {
    phase = pi - phase;
    full = reduce_angle(pi - full);
    model = "x = sin(u), y = sin(u + phi_tilde); cos(phi_tilde) = -B / (2 sqrt(A C))";
  }
  const auto& q = fit.conic;
  return {
      {"conic", {{"A", q[0]}, {"B", q[1]}, {"C", q[2]}, {"D", q[3]}, {"E", q[4]}, {"F", q[5]}}},
      {"conic_normalization", "unit coefficient norm, A + C > 0"},
      {"center", {{"x", fit.center.x}, {"y", fit.center.y}}},
      {"amplitude_x", fit.amplitude_x},
      {"amplitude_y", fit.amplitude_y},
      {"phase_difference_rad", phase},
      {"phase_difference_over_pi", phase / pi},
      {"phase_difference_full_rad", full},
      {"orientation", fit.orientation},
      {"rms_residual", fit.rms_residual},
      {"degenerate", fit.degenerate},
      {"n_points", fit.n_points},
      {"phase_model", model},
  };
}

ResultBundle cmd_bands(const RunConfig& cfg, const CommandOptions& opts) {
  ResultBundle b;
  b.command = "bands";
  b.config = resolved_json(cfg);
  const BandStructure bs = compute_bands(cfg.lattice, cfg.n_k, opts.threads);
  const auto cols = columns_of(kBandsColumns);
  CsvWriter w(cols);
  for (std::size_t i = 0; i < bs.size(); ++i)
    w.row(std::vector<double>{bs.k_grid[i], bs.e_flat(i), bs.e_disp(i), bs.polarization[i][0],
                              bs.polarization[i][1]});
  b.add_csv("bands.csv", w.str(), cols);

  const double gap = band_gap(cfg.lattice, cfg.gap_n_k);
  b.results = {{"lattice", lattice_json(cfg.lattice)},
               {"n_k", cfg.n_k},
               {"flat_bandwidth_mhz", bs.flat_bandwidth()},
               {"dispersive_min_mhz", bs.dispersive_min()},
               {"dispersive_max_mhz", bs.dispersive_max()},
               {"band_gap_mhz", gap}};

  if (cfg.svg) {
    SvgPlot plot;
    plot.title = "Bands, colour = <sigma_z>";
    plot.x_label = "k";
    plot.y_label = "E (MHz)";
    for (int branch : {0, 1}) {
      SvgSeries s;
      s.markers = true;
      s.color = branch == 0 ? "#555555" : "#1f77b4";
      for (std::size_t i = 0; i < bs.size(); ++i) {
        s.x.push_back(bs.k_grid[i]);
        s.y.push_back(bs.energies[i][static_cast<std::size_t>(branch)]);
        s.point_colors.push_back(diverging_color(bs.polarization[i][static_cast<std::size_t>(branch)]));
      }
      plot.series.push_back(std::move(s));
    }
    b.add_file("bands.svg", plot.render());
  }
  return b;
}

ResultBundle cmd_spectrum(const RunConfig& cfg, const CommandOptions& opts) {
  ResultBundle b;
  b.command = "spectrum";
  b.config = resolved_json(cfg);
  const std::vector<double> grid = cfg.grid.resolve(cfg.lattice);
  SpectrumOptions so;
  so.n_cells = cfg.n_cells;
  so.threads = opts.threads;
  so.window = cfg.window;
  const Spectrum s = cfg.doppler.kind == VelocityModel::Kind::None
                         ? spectrum(cfg.lattice, cfg.probe, grid, so)
                         : doppler_average(cfg.lattice, cfg.probe, grid, cfg.doppler, so);
  const auto cols = columns_of(kSpectrumColumns);
  b.add_csv("spectrum.csv", write_columns(cols, {&s.detunings, &s.values}), cols);

  const PeakSummary peak = summarize_peak(s.detunings, s.values);
  b.results = {{"lattice", lattice_json(cfg.lattice)},
               {"probed_leg", cfg.probe.probed_leg == Leg::A ? "a" : "b"},
               {"window_mhz", {s.window.first, s.window.second}},
               {"r_bar", std::isnan(s.r_bar) ? json(nullptr) : json(s.r_bar)},
               {"peak_r", peak.value},
               {"peak_detuning_mhz", peak.detuning_mhz},
               {"fwhm_mhz", peak.fwhm_mhz},
               {"fwhm_truncated", peak.width_truncated},
               {"unconverged_points", s.unconverged_points},
               {"worst_boundary_ratio", s.worst_boundary_ratio}};
  if (std::isnan(s.r_bar)) b.warnings.push_back("averaging window does not overlap the grid");
  if (s.unconverged_points > 0)
    b.warnings.push_back(std::to_string(s.unconverged_points) +
                         " detunings exceed the boundary tolerance; increase lattice.n_cells");

  if (cfg.svg) {
    SvgPlot plot;
    plot.title = "Reflectivity proxy |x1/x0|^2";
    plot.x_label = "probe detuning (MHz)";
    plot.y_label = "R";
    SvgSeries line;
    line.x = s.detunings;
    line.y = s.values;
    plot.series.push_back(std::move(line));
    b.add_file("spectrum.svg", plot.render());
  }
  return b;
}

ResultBundle cmd_sweep(const RunConfig& cfg, const CommandOptions& opts) {
  ResultBundle b;
  b.command = "sweep";
  b.config = resolved_json(cfg);
  const std::vector<double> phi = uniform_phi_grid(cfg.sweep.phi_points);
  const bool low_res = cfg.sweep.phi_points < kLowResolutionPoints;
  if (low_res)
    b.warnings.push_back("phi grid has fewer than " + std::to_string(kLowResolutionPoints) +
                         " points; extrema are low-resolution");

  std::vector<double> etas = cfg.sweep.eta_list;
  for (double e : cfg.sweep.lissajous_eta_list)
    if (std::find(etas.begin(), etas.end(), e) == etas.end()) etas.push_back(e);

  const auto sweep_cols = columns_of(kSweepColumns);
  const auto ratio_cols = columns_of(kRatioColumns);
  json sweeps = json::array();
  std::vector<SweepDataset> data;
  for (double eta : etas) {
    const LatticeParams lattice = cfg.lattice_for_eta(eta);
    SweepOptions so;
    so.n_cells = cfg.n_cells;
    so.threads = opts.threads;
    so.detunings = cfg.grid.resolve(lattice);
    so.window = cfg.window;
    so.doppler = cfg.doppler;
    SweepDataset ds = phi_sweep(lattice, cfg.probe, phi, so);
    const std::string tag = value_tag(eta);
    b.add_csv("sweep_eta_" + tag + ".csv",
              write_columns(sweep_cols, {&ds.phi_grid, &ds.r_bar_eta, &ds.r_bar_inv_eta}),
              sweep_cols);
    b.add_csv("ratio_eta_" + tag + ".csv",
              write_columns(ratio_cols, {&ds.phi_grid, &ds.ratio_eta, &ds.ratio_inv_eta}),
              ratio_cols);
    double mean = 0.0;
    for (double v : ds.r_bar_eta) mean += v;
    mean /= static_cast<double>(ds.r_bar_eta.size());
    json entry = {{"eta", eta},
                  {"lattice", lattice_json(lattice)},
                  {"mean_rbar_eta", mean},
                  {"low_resolution", ds.low_resolution},
                  {"unconverged_points", ds.unconverged_points},
                  {"worst_boundary_ratio", ds.worst_boundary_ratio},
                  {"extrema",
                   {{"rbar_eta", extrema_json(ds.r_bar_eta_extrema)},
                    {"rbar_inv_eta", extrema_json(ds.r_bar_inv_eta_extrema)},
                    {"ratio_eta", extrema_json(ds.ratio_eta_extrema)},
                    {"ratio_inv_eta", extrema_json(ds.ratio_inv_eta_extrema)}}}};
    if (phi.size() >= 4) {
      entry["sinusoid_rbar_eta"] = sinusoid_json(fit_sinusoid(phi, ds.r_bar_eta));
      entry["sinusoid_rbar_inv_eta"] = sinusoid_json(fit_sinusoid(phi, ds.r_bar_inv_eta));
    }
    if (ds.unconverged_points > 0)
      b.warnings.push_back("eta " + tag + ": " + std::to_string(ds.unconverged_points) +
                           " phi points exceed the boundary tolerance");
    sweeps.push_back(entry);

    if (cfg.svg) {
      SvgPlot plot;
      plot.title = "R-bar vs phi, eta = " + tag;
      plot.x_label = "phi (rad)";
      plot.y_label = "R-bar";
      SvgSeries s1, s2;
      s1.x = s2.x = ds.phi_grid;
      s1.y = ds.r_bar_eta;
      s1.label = "eta";
      s2.y = ds.r_bar_inv_eta;
      s2.color = "#d62728";
      s2.label = "1/eta, -phi";
      plot.series = {s1, s2};
      b.add_file("sweep_eta_" + tag + ".svg", plot.render());
    }
    data.push_back(std::move(ds));
  }

  // Mean over phi for the eta list.
  json means = json::array();
  std::vector<double> mean_eta, mean_val;
  for (std::size_t i = 0; i < cfg.sweep.eta_list.size(); ++i) {
    double m = 0.0;
    for (double v : data[i].r_bar_eta) m += v;
    m /= static_cast<double>(data[i].r_bar_eta.size());
    mean_eta.push_back(cfg.sweep.eta_list[i]);
    mean_val.push_back(m);
    means.push_back({{"eta", cfg.sweep.eta_list[i]}, {"mean_rbar", m}});
  }
  bool increasing = mean_val.size() >= 2;
  for (std::size_t i = 1; i < mean_val.size(); ++i)
    increasing = increasing && mean_eta[i] > mean_eta[i - 1] && mean_val[i] > mean_val[i - 1];
  const auto mean_cols = columns_of(kMeanColumns);
  b.add_csv("mean_reflectivity.csv", write_columns(mean_cols, {&mean_eta, &mean_val}), mean_cols);

  // Lissajous fits.
  json lissajous = json::array();
  for (double eta : cfg.sweep.lissajous_eta_list) {
    const auto it = std::find(etas.begin(), etas.end(), eta);
    const SweepDataset& ds = data[static_cast<std::size_t>(it - etas.begin())];
    const std::string tag = value_tag(eta);
    json entry = {{"eta", eta}};
    try {
      const EllipseFit fit = lissajous_fit(ds);
      json fj = ellipse_json(fit);
      if (phi.size() >= 4) {
        const SinusoidFit fx = fit_sinusoid(phi, ds.r_bar_eta);
        const SinusoidFit fy = fit_sinusoid(phi, ds.r_bar_inv_eta);
        fj["phase_difference_from_sinusoids_rad"] = fold_phase(pi - (fy.phase - fx.phase));
      }
      fj["eta"] = eta;
      fj["x"] = "rbar_eta(phi)";
      fj["y"] = "rbar_inv_eta(phi) = R-bar_{1/eta}(-phi)";
      b.add_file("lissajous_eta_" + tag + ".json", dump_json(fj));
      entry["phase_difference_rad"] = fj["phase_difference_rad"];
      entry["phase_difference_over_pi"] = fj["phase_difference_over_pi"];
      entry["degenerate"] = fit.degenerate;
      if (cfg.svg) {
        std::vector<Point2> pts;
        for (std::size_t i = 0; i < ds.r_bar_eta.size(); ++i)
          pts.push_back({ds.r_bar_eta[i], ds.r_bar_inv_eta[i]});
        b.add_file("lissajous_eta_" + tag + ".svg",
                   fit_svg(fit, pts, "Lissajous, eta = " + tag, "R-bar_eta(phi)",
                           "R-bar_1/eta(-phi)"));
      }
    } catch (const Error& e) {
      entry["error"] = e.what();
      b.warnings.push_back("Lissajous fit for eta " + tag + " failed: " + e.what());
    }
    lissajous.push_back(entry);
  }

  // b-leg profiles.
  const auto profile_cols = columns_of(kProfileColumns);
  json profiles = json::array();
  for (const ProfileRequest& r : cfg.sweep.profiles) {
    LatticeParams p = cfg.lattice_for_eta(r.eta);
    p.phi = r.phi_over_pi * pi;
    const ProfileDataset pd = profile(p, cfg.probe, cfg.n_cells, cfg.sweep.profile_radius);
    CsvWriter w(profile_cols);
    for (std::size_t i = 0; i < pd.cells.size(); ++i)
      w.row(std::vector<std::string>{std::to_string(pd.cells[i]), format_double(pd.prob_b[i])});
    const std::string name =
        "profile_eta_" + value_tag(r.eta) + "_phi_" + value_tag(r.phi_over_pi) + "pi.csv";
    b.add_csv(name, w.str(), profile_cols);
    profiles.push_back({{"eta", r.eta},
                        {"phi_over_pi", r.phi_over_pi},
                        {"file", name},
                        {"chiral_asymmetry", chiral_asymmetry(pd)}});
  }

  b.results = {{"phi_points", cfg.sweep.phi_points},
               {"low_resolution", low_res},
               {"fixed_t3", cfg.sweep.fixed_t3},
               {"sweeps", sweeps},
               {"mean_reflectivity", means},
               {"mean_reflectivity_strictly_increasing", increasing},
               {"lissajous", lissajous},
               {"profiles", profiles}};
  return b;
}

ResultBundle cmd_cls(const RunConfig& cfg, const CommandOptions&) {
  ResultBundle b;
  b.command = "cls";
  b.config = resolved_json(cfg);
  const CompactLocalizedState state = build_cls(cfg.lattice, cfg.cls.cell, cfg.cls.coefficient);
  const RealSpaceHamiltonian h = build_real_space(cfg.lattice, cfg.cls.n_cells);
  const double residual = verify_cls(state, h);
  const double t3 = std::abs(derive_hoppings(cfg.lattice).t3);
  const auto cols = columns_of(kClsColumns);
  CsvWriter w(cols);
  for (const ClsSite& s : state.sites)
    w.row(std::vector<std::string>{s.leg == Leg::A ? "a" : "b", std::to_string(s.cell),
                                   format_double(s.amplitude.real()),
                                   format_double(s.amplitude.imag()), format_double(residual)});
  b.add_csv("cls.csv", w.str(), cols);
  const double tolerance = 1e-10 * t3;
  b.results = {{"lattice", lattice_json(cfg.lattice)},
               {"coefficient",
                cfg.cls.coefficient == ClsCoefficient::LiteralEta ? "literal_eta" : "eigen"},
               {"support_sites", state.sites.size()},
               {"support_cells", state.cell_span()},
               {"energy_mhz", state.energy},
               {"residual_mhz", residual},
               {"residual_tolerance_mhz", tolerance},
               {"is_eigenstate", residual < tolerance}};
  if (!(residual < tolerance))
    b.warnings.push_back("CLS residual exceeds 1e-10 |t3|; the state is not a flat-band eigenstate");
  return b;
}

ResultBundle cmd_fit_text(const RunConfig& cfg, const std::string& text, const std::string& source,
                          const CommandOptions& opts) {
  ResultBundle b;
  b.command = "fit";
  b.config = resolved_json(cfg);
  const CsvData data = parse_csv(text, source);
  if (data.header.size() < 2) throw ConfigError(source + ":1", "need at least two columns");
  const std::size_t xc = opts.x_column.empty() ? data.header.size() - 2 : data.column(opts.x_column);
  const std::size_t yc = opts.y_column.empty() ? data.header.size() - 1 : data.column(opts.y_column);
  std::vector<Point2> pts;
  for (const auto& r : data.rows) pts.push_back({r[xc], r[yc]});
  const EllipseFit fit = fit_ellipse(pts);
  json fj = ellipse_json(fit, opts.convention);
  fj["x_column"] = data.header[xc];
  fj["y_column"] = data.header[yc];
  fj["input_sha256"] = sha256_hex(text);
  b.add_file("fit.json", dump_json(fj));
  b.add_file("fit.svg", fit_svg(fit, pts, "Ellipse fit", data.header[xc], data.header[yc]));
  b.results = fj;
  if (fit.degenerate) b.warnings.push_back("points are collinear; line fit reported");
  return b;
}

ResultBundle cmd_fit(const RunConfig& cfg, const CommandOptions& opts) {
  if (opts.input_path.empty()) throw ConfigError("input", "fit needs an input CSV path");
  std::ifstream in(opts.input_path, std::ios::binary);
  if (!in) throw IoError("cannot read " + opts.input_path);
  std::ostringstream text;
  text << in.rdbuf();
  const std::string name = std::filesystem::path(opts.input_path).filename().string();
  return cmd_fit_text(cfg, text.str(), name, opts);
}

ResultBundle run_command(const std::string& name, const RunConfig& cfg, const CommandOptions& opts) {
  if (name == "bands") return cmd_bands(cfg, opts);
  if (name == "spectrum") return cmd_spectrum(cfg, opts);
  if (name == "sweep") return cmd_sweep(cfg, opts);
  if (name == "cls") return cmd_cls(cfg, opts);
  if (name == "fit") return cmd_fit(cfg, opts);
  throw InvalidParameter("unknown command '" + name + "'");
}

}  // namespace creutz::io
