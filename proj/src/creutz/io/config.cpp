#include "creutz/io/config.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include "creutz/error.hpp"
#include "creutz/sweeps.hpp"

namespace creutz::io {

using nlohmann::json;

namespace {

constexpr double pi = std::numbers::pi;

std::string child(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string element(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

// Object reader that records which keys were consumed so leftovers can be
// reported as unknown.
class Block {
public:
  Block(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }

  const json* get(const std::string& key) {
    seen_.insert(key);
    if (!has(key)) return nullptr;
    return &j_.at(key);
  }

  std::string path(const std::string& key) const { return child(path_, key); }

  double number(const std::string& key, double fallback) {
    const json* v = get(key);
    if (!v) return fallback;
    if (!v->is_number()) throw ConfigError(path(key), "expected a number");
    const double d = v->get<double>();
    if (!std::isfinite(d)) throw ConfigError(path(key), "must be finite");
    return d;
  }

  std::optional<double> optional_number(const std::string& key) {
    if (!has(key)) {
      seen_.insert(key);
      return std::nullopt;
    }
    return number(key, 0.0);
  }

  int integer(const std::string& key, int fallback) {
    const json* v = get(key);
    if (!v) return fallback;
    if (!v->is_number_integer()) throw ConfigError(path(key), "expected an integer");
    const auto i = v->get<long long>();
    if (i < -1000000000LL || i > 1000000000LL) throw ConfigError(path(key), "out of range");
    return static_cast<int>(i);
  }

  bool boolean(const std::string& key, bool fallback) {
    const json* v = get(key);
    if (!v) return fallback;
    if (!v->is_boolean()) throw ConfigError(path(key), "expected true or false");
    return v->get<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    const json* v = get(key);
    if (!v) return fallback;
    if (!v->is_string()) throw ConfigError(path(key), "expected a string");
    return v->get<std::string>();
  }

  std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback) {
    const json* v = get(key);
    if (!v) return fallback;
    if (!v->is_array()) throw ConfigError(path(key), "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v->size(); ++i) {
      const json& e = v->at(i);
      if (!e.is_number() || !std::isfinite(e.get<double>()))
        throw ConfigError(element(path(key), i), "expected a finite number");
      out.push_back(e.get<double>());
    }
    return out;
  }

  std::optional<Block> block(const std::string& key) {
    const json* v = get(key);
    if (!v) return std::nullopt;
    return Block(*v, path(key));
  }

  void finish() const {
    for (const auto& [key, value] : j_.items())
      if (!seen_.count(key)) throw ConfigError(path(key), "unknown key");
  }

private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string& path, const std::string& what) {
  if (!ok) throw ConfigError(path, what);
}

void parse_physical(Block b, RunConfig& cfg) {
  LatticeParams& p = cfg.lattice;
  p.omega1_mhz = b.number("omega1_mhz", p.omega1_mhz);
  p.omega2_mhz = b.number("omega2_mhz", p.omega2_mhz);
  p.delta_c_mhz = b.number("delta_c_mhz", p.delta_c_mhz);
  const auto phi_rad = b.optional_number("phi_rad");
  const auto phi_over_pi = b.optional_number("phi_over_pi");
  if (phi_rad && phi_over_pi)
    throw ConfigError(b.path("phi_over_pi"), "give either phi_rad or phi_over_pi, not both");
  if (phi_rad) p.phi = *phi_rad;
  if (phi_over_pi) p.phi = *phi_over_pi * pi;
  require(p.omega1_mhz >= 0.0, b.path("omega1_mhz"), "must be >= 0");
  require(p.omega2_mhz >= 0.0, b.path("omega2_mhz"), "must be >= 0");
  require(p.delta_c_mhz != 0.0, b.path("delta_c_mhz"), "must be nonzero");
  if (const auto eta = b.optional_number("eta")) {
    require(*eta > 0.0, b.path("eta"), "must be > 0");
    require(p.omega1_mhz > 0.0 && p.omega2_mhz > 0.0, b.path("eta"),
            "needs positive omega1_mhz and omega2_mhz to fix t3");
    p = params_for_eta(p, *eta);
  }
  b.finish();
}

Leg parse_leg(Block& b, const std::string& key, Leg fallback) {
  const std::string s = b.string(key, fallback == Leg::A ? "a" : "b");
  if (s == "a") return Leg::A;
  if (s == "b") return Leg::B;
  throw ConfigError(b.path(key), "expected \"a\" or \"b\"");
}

void parse_probe(Block b, RunConfig& cfg) {
  ProbeConfig& pr = cfg.probe;
  pr.probed_leg = parse_leg(b, "leg", pr.probed_leg);
  pr.detuning_mhz = b.number("detuning_mhz", pr.detuning_mhz);
  pr.omega_p = b.number("omega_p_mhz", pr.omega_p);
  pr.gamma_a_mhz = b.number("gamma_a_mhz", pr.gamma_a_mhz);
  pr.gamma_b_mhz = b.number("gamma_b_mhz", pr.gamma_b_mhz);
  require(pr.omega_p > 0.0, b.path("omega_p_mhz"), "must be > 0");
  require(pr.gamma_a_mhz > 0.0, b.path("gamma_a_mhz"), "must be > 0");
  require(pr.gamma_b_mhz > 0.0, b.path("gamma_b_mhz"), "must be > 0");

  if (auto g = b.block("detuning_grid")) {
    cfg.grid.min_mhz = g->optional_number("min_mhz");
    cfg.grid.max_mhz = g->optional_number("max_mhz");
    cfg.grid.points = g->integer("points", cfg.grid.points);
    require(cfg.grid.min_mhz.has_value() == cfg.grid.max_mhz.has_value(), g->path("max_mhz"),
            "min_mhz and max_mhz must be given together");
    if (cfg.grid.min_mhz)
      require(*cfg.grid.max_mhz > *cfg.grid.min_mhz, g->path("max_mhz"), "must exceed min_mhz");
    require(cfg.grid.points >= 2, g->path("points"), "must be >= 2");
    g->finish();
  }
  if (const json* w = b.get("window_mhz")) {
    if (w->is_string()) {
      require(w->get<std::string>() == "band", b.path("window_mhz"),
              "expected \"band\" or [lo, hi]");
      cfg.window.reset();
    } else {
      const auto v = b.numbers("window_mhz", {});
      require(v.size() == 2 && v[1] > v[0], b.path("window_mhz"), "expected [lo, hi] with lo < hi");
      cfg.window = std::make_pair(v[0], v[1]);
    }
  }
  b.finish();
}

void parse_lattice(Block b, RunConfig& cfg) {
  cfg.n_cells = b.integer("n_cells", cfg.n_cells);
  cfg.n_k = b.integer("n_k", cfg.n_k);
  cfg.gap_n_k = b.integer("gap_n_k", cfg.gap_n_k);
  require(cfg.n_cells >= 3 && cfg.n_cells % 2 == 1, b.path("n_cells"), "must be odd and >= 3");
  require(cfg.n_k >= 2, b.path("n_k"), "must be >= 2");
  require(cfg.gap_n_k >= 4, b.path("gap_n_k"), "must be >= 4");
  b.finish();
}

void parse_sweep(Block b, RunConfig& cfg) {
  SweepConfig& s = cfg.sweep;
  s.phi_points = b.integer("phi_points", s.phi_points);
  require(s.phi_points >= 3, b.path("phi_points"), "must be >= 3");
  s.eta_list = b.numbers("eta_list", s.eta_list);
  s.lissajous_eta_list = b.numbers("lissajous_eta_list", s.lissajous_eta_list);
  for (std::size_t i = 0; i < s.eta_list.size(); ++i)
    require(s.eta_list[i] > 0.0, element(b.path("eta_list"), i), "must be > 0");
  for (std::size_t i = 0; i < s.lissajous_eta_list.size(); ++i)
    require(s.lissajous_eta_list[i] > 0.0, element(b.path("lissajous_eta_list"), i),
            "must be > 0");
  s.fixed_t3 = b.boolean("fixed_t3", s.fixed_t3);
  if (const json* v = b.get("profiles")) {
    require(v->is_array(), b.path("profiles"), "expected an array");
    s.profiles.clear();
    for (std::size_t i = 0; i < v->size(); ++i) {
      Block e(v->at(i), element(b.path("profiles"), i));
      ProfileRequest r{e.number("eta", 1.0), e.number("phi_over_pi", 0.0)};
      require(r.eta > 0.0, e.path("eta"), "must be > 0");
      e.finish();
      s.profiles.push_back(r);
    }
  }
  s.profile_radius = b.integer("profile_radius", s.profile_radius);
  require(s.profile_radius >= 1, b.path("profile_radius"), "must be >= 1");
  b.finish();
}

void parse_doppler(Block b, RunConfig& cfg) {
  VelocityModel& m = cfg.doppler;
  const std::string model = b.string("model", "none");
  if (model == "none") m.kind = VelocityModel::Kind::None;
  else if (model == "gaussian") m.kind = VelocityModel::Kind::Gaussian;
  else throw ConfigError(b.path("model"), "expected \"none\" or \"gaussian\"");
  m.sigma_mhz = b.number("sigma_mhz", m.sigma_mhz);
  m.n_classes = b.integer("classes", m.n_classes);
  m.cutoff_sigmas = b.number("cutoff_sigmas", m.cutoff_sigmas);
  m.tilt_ratio = b.number("tilt_ratio", m.tilt_ratio);
  require(m.sigma_mhz >= 0.0, b.path("sigma_mhz"), "must be >= 0");
  require(m.n_classes >= 1, b.path("classes"), "must be >= 1");
  require(m.cutoff_sigmas > 0.0, b.path("cutoff_sigmas"), "must be > 0");
  b.finish();
}

void parse_cls(Block b, RunConfig& cfg) {
  cfg.cls.cell = b.integer("cell", cfg.cls.cell);
  cfg.cls.n_cells = b.integer("n_cells", cfg.cls.n_cells);
  require(cfg.cls.n_cells >= 7 && cfg.cls.n_cells % 2 == 1, b.path("n_cells"),
          "must be odd and >= 7");
  const int half = (cfg.cls.n_cells - 1) / 2;
  require(cfg.cls.cell - 2 >= -half && cfg.cls.cell + 3 <= half, b.path("cell"),
          "support must stay two cells inside the lattice");
  const std::string c = b.string("coefficient", "eigen");
  if (c == "eigen") cfg.cls.coefficient = ClsCoefficient::EigenCondition;
  else if (c == "literal_eta") cfg.cls.coefficient = ClsCoefficient::LiteralEta;
  else throw ConfigError(b.path("coefficient"), "expected \"eigen\" or \"literal_eta\"");
  b.finish();
}

void parse_output(Block b, RunConfig& cfg) {
  cfg.output_directory = b.string("directory", cfg.output_directory);
  require(!cfg.output_directory.empty(), b.path("directory"), "must not be empty");
  cfg.svg = b.boolean("svg", cfg.svg);
  b.finish();
}

}  // namespace

std::vector<double> DetuningGridSpec::resolve(const LatticeParams& params) const {
  if (!min_mhz) return default_detuning_grid(params, points);
  std::vector<double> g(static_cast<std::size_t>(points));
  const double span = *max_mhz - *min_mhz;
  for (int i = 0; i < points; ++i)
    g[static_cast<std::size_t>(i)] = *min_mhz + span * i / (points - 1);
  return g;
}

LatticeParams RunConfig::lattice_for_eta(double eta) const {
  if (sweep.fixed_t3) return params_for_eta(lattice, eta);
  if (!(eta > 0.0)) throw InvalidParameter("eta must be positive");
  LatticeParams p = lattice;
  p.omega2_mhz = p.omega1_mhz * std::sqrt(eta);
  return p;
}

RunConfig parse_config(const json& j) {
  RunConfig cfg;
  Block root(j, "");
  if (auto b = root.block("physical")) parse_physical(*b, cfg);
  if (auto b = root.block("probe")) parse_probe(*b, cfg);
  if (auto b = root.block("lattice")) parse_lattice(*b, cfg);
  if (auto b = root.block("sweep")) parse_sweep(*b, cfg);
  if (auto b = root.block("doppler")) parse_doppler(*b, cfg);
  if (auto b = root.block("cls")) parse_cls(*b, cfg);
  if (auto b = root.block("output")) parse_output(*b, cfg);
  root.finish();
  return cfg;
}

RunConfig parse_config_text(const std::string& text) {
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) return RunConfig{};
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(j);
}

json resolved_json(const RunConfig& cfg) {
  json grid = {{"points", cfg.grid.points}};
  if (cfg.grid.min_mhz) {
    grid["min_mhz"] = *cfg.grid.min_mhz;
    grid["max_mhz"] = *cfg.grid.max_mhz;
  } else {
    grid["min_mhz"] = nullptr;
    grid["max_mhz"] = nullptr;
  }
  json window = "band";
  if (cfg.window) window = {cfg.window->first, cfg.window->second};
  json profiles = json::array();
  for (const auto& p : cfg.sweep.profiles)
    profiles.push_back({{"eta", p.eta}, {"phi_over_pi", p.phi_over_pi}});

  return {
      {"physical",
       {{"omega1_mhz", cfg.lattice.omega1_mhz},
        {"omega2_mhz", cfg.lattice.omega2_mhz},
        {"delta_c_mhz", cfg.lattice.delta_c_mhz},
        {"phi_rad", cfg.lattice.phi}}},
      {"probe",
       {{"leg", cfg.probe.probed_leg == Leg::A ? "a" : "b"},
        {"detuning_mhz", cfg.probe.detuning_mhz},
        {"omega_p_mhz", cfg.probe.omega_p},
        {"gamma_a_mhz", cfg.probe.gamma_a_mhz},
        {"gamma_b_mhz", cfg.probe.gamma_b_mhz},
        {"detuning_grid", grid},
        {"window_mhz", window}}},
      {"lattice", {{"n_cells", cfg.n_cells}, {"n_k", cfg.n_k}, {"gap_n_k", cfg.gap_n_k}}},
      {"sweep",
       {{"phi_points", cfg.sweep.phi_points},
        {"eta_list", cfg.sweep.eta_list},
        {"lissajous_eta_list", cfg.sweep.lissajous_eta_list},
        {"fixed_t3", cfg.sweep.fixed_t3},
        {"profiles", profiles},
        {"profile_radius", cfg.sweep.profile_radius}}},
      {"doppler",
       {{"model", cfg.doppler.kind == VelocityModel::Kind::Gaussian ? "gaussian" : "none"},
        {"sigma_mhz", cfg.doppler.sigma_mhz},
        {"classes", cfg.doppler.n_classes},
        {"cutoff_sigmas", cfg.doppler.cutoff_sigmas},
        {"tilt_ratio", cfg.doppler.tilt_ratio}}},
      {"cls",
       {{"cell", cfg.cls.cell},
        {"n_cells", cfg.cls.n_cells},
        {"coefficient",
         cfg.cls.coefficient == ClsCoefficient::LiteralEta ? "literal_eta" : "eigen"}}},
      {"output", {{"svg", cfg.svg}}},
  };
}

}  // namespace creutz::io
