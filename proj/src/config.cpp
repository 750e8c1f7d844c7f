#include "gmqdt/config.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "gmqdt/error.hpp"
#include "json.hpp"

namespace gmqdt::config {

namespace {

using nlohmann::json;

// Object wrapper that records which keys were read so leftovers can be
// reported as unknown.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  ~Section() = default;

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number()) throw ConfigError(where(key) + ": expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(where(key) + ": must be finite");
    return d;
  }

  int integer(const std::string& key, int fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number_integer()) throw ConfigError(where(key) + ": expected an integer");
    return v.get<int>();
  }

  std::string text(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_string()) throw ConfigError(where(key) + ": expected a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_array()) throw ConfigError(where(key) + ": expected an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number() || !std::isfinite(x.get<double>())) {
        throw ConfigError(where(key) + ": expected finite numbers");
      }
      out.push_back(x.get<double>());
    }
    return out;
  }

  Section child(const std::string& key) {
    static const json kEmpty = json::object();
    if (!has(key)) return Section(kEmpty, where(key));
    return Section(j_.at(key), where(key));
  }

  const json* raw(const std::string& key) {
    if (!has(key)) return nullptr;
    return &j_.at(key);
  }

  std::string where(const std::string& key) const { return path_ + "." + key; }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError(where(it.key()) + ": unknown key");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

bodyframe::DefectSurface parse_surface(const json& v, const std::string& where) {
  if (!v.is_array()) throw ConfigError(where + ": expected a list of [i, j, k, coef] terms");
  bodyframe::DefectSurface s;
  for (const auto& term : v) {
    if (!term.is_array() || term.size() != 4 || !term[0].is_number_integer() ||
        !term[1].is_number_integer() || !term[2].is_number_integer() || !term[3].is_number()) {
      throw ConfigError(where + ": each term is [pow_dRco, pow_dRgh, pow_theta2, coef]");
    }
    bodyframe::PolyTerm t{term[0].get<int>(), term[1].get<int>(), term[2].get<int>(),
                          term[3].get<double>()};
    if (t.pow_rco < 0 || t.pow_rgh < 0 || t.pow_theta2 < 0 || !std::isfinite(t.coef)) {
      throw ConfigError(where + ": powers must be >= 0 and coefficients finite");
    }
    s.terms.push_back(t);
  }
  return s;
}

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

}  // namespace

RunConfig RunConfig::without_dipole() const {
  RunConfig c = *this;
  c.dipole_debye = 0.0;
  c.body.dipole = longrange::DipoleStrength::from_debye(0.0);
  return c;
}

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  RunConfig cfg;
  Section top(root, "config");
  cfg.dipole_debye = top.number("dipole_debye", cfg.dipole_debye);
  require(cfg.dipole_debye >= 0.0, "config.dipole_debye: must be >= 0");
  cfg.body.dipole = longrange::DipoleStrength::from_debye(cfg.dipole_debye);

  {
    Section s = top.child("surfaces");
    cfg.body.surfaces.r_co_ref = s.number("r_co_ref", 2.00);
    cfg.body.surfaces.r_gh_ref = s.number("r_gh_ref", 3.27);
    for (int i = 0; i < kNumChannels; ++i) {
      const std::string name(channel_name(static_cast<Channel>(i)));
      if (const json* v = s.raw(name)) cfg.body.surfaces.surfaces[i] = parse_surface(*v, s.where(name));
    }
    s.finish();
  }
  {
    Section s = top.child("electronic");
    const double pi = s.number("ppi", 0.0);
    cfg.body.electronic = {s.number("s_sigma", 0.0), pi, s.number("p_sigma", 0.0), pi,
                           s.number("d_sigma", 0.0)};
    s.finish();
  }
  {
    Section s = top.child("renner_teller");
    cfg.body.rt.gamma0 = s.number("gamma0", 0.0);
    cfg.body.rt.delta0 = s.number("delta0", 0.0);
    s.finish();
  }
  {
    Section s = top.child("extraction");
    cfg.body.n_s = s.integer("n_s", 4);
    cfg.body.n_p = s.integer("n_p", 3);
    require(cfg.body.n_s >= 1 && cfg.body.n_p >= 1, "config.extraction: principal numbers must be >= 1");
    s.finish();
  }
  {
    Section s = top.child("vibration");
    auto& v = cfg.vibration;
    v.r_gh_ref = s.number("r_gh_ref", v.r_gh_ref);
    v.omega_bend = s.number("omega_bend", v.omega_bend);
    v.omega_bend_slope = s.number("omega_bend_slope", v.omega_bend_slope);
    v.theta_scale = s.number("theta_scale", v.theta_scale);
    v.quartic = s.number("quartic", v.quartic);
    v.omega_stretch = s.number("omega_stretch", v.omega_stretch);
    v.r_co_eq = s.number("r_co_eq", v.r_co_eq);
    v.stretch_scale = s.number("stretch_scale", v.stretch_scale);
    v.v0_curvature = s.number("v0_curvature", v.v0_curvature);
    v.stretch_quanta = s.integer("stretch_quanta", v.stretch_quanta);
    cfg.basis_size = s.integer("basis_size", cfg.basis_size);
    s.finish();
    try {
      v.validate();
    } catch (const DomainError& e) {
      throw ConfigError(std::string("config.vibration: ") + e.what());
    }
    require(cfg.basis_size >= 4, "config.vibration.basis_size: must be >= 4");
  }
  {
    Section s = top.child("channels");
    // one count for every electronic channel, or an object keyed by
    // s_sigma, ppi, p_sigma, d_sigma
    auto& n = cfg.vibrational_channels;
    if (const json* v = s.raw("vibrational_per_electronic")) {
      if (v->is_number_integer()) {
        n.fill(v->get<int>());
      } else {
        Section per(*v, s.where("vibrational_per_electronic"));
        const int pi = per.integer("ppi", n[1]);
        n = {per.integer("s_sigma", n[0]), pi, per.integer("p_sigma", n[2]), pi,
             per.integer("d_sigma", n[4])};
        per.finish();
      }
    }
    cfg.total_m = s.integer("total_m", cfg.total_m);
    for (int c : n) require(c >= 1, "config.channels.vibrational_per_electronic: counts must be >= 1");
    s.finish();
  }
  {
    Section s = top.child("quadrature");
    auto& q = cfg.quadrature;
    q.q_order = s.integer("q_order", q.q_order);
    q.x_order = s.integer("x_order", q.x_order);
    q.phi_points = s.integer("phi_points", q.phi_points);
    q.tolerance = s.number("tolerance", q.tolerance);
    require(q.q_order >= 2 && q.x_order >= 2 && q.phi_points >= 1 && q.tolerance > 0.0,
            "config.quadrature: orders must be >= 2 and tolerance > 0");
    s.finish();
  }
  {
    Section s = top.child("grids");
    auto& g = cfg.grids;
    g.r_gh = s.number("r_gh", g.r_gh);
    g.energy_min_ev = s.number("energy_min_ev", g.energy_min_ev);
    g.energy_max_ev = s.number("energy_max_ev", g.energy_max_ev);
    g.bin_ev = s.number("bin_ev", g.bin_ev);
    g.nu_cut = s.number("nu_cut", g.nu_cut);
    g.theta = s.numbers("theta", g.theta);
    g.beta_energies = s.numbers("beta_energies_hartree", g.beta_energies);
    g.bound_states = s.integer("bound_states", g.bound_states);
    g.wall_radius = s.number("wall_radius", g.wall_radius);
    s.finish();
    require(g.r_gh > 0.0, "config.grids.r_gh: must be > 0");
    require(g.energy_min_ev > 0.0 && g.energy_max_ev > g.energy_min_ev,
            "config.grids: need 0 < energy_min_ev < energy_max_ev");
    require(g.bin_ev > 0.0, "config.grids.bin_ev: must be > 0");
    require(g.nu_cut > 1.0, "config.grids.nu_cut: must be > 1");
    require(g.bound_states >= 1, "config.grids.bound_states: must be >= 1");
    require(g.wall_radius > 0.0, "config.grids.wall_radius: must be > 0");
    for (double t : g.theta) require(t >= 0.0 && t <= 3.141592653589793, "config.grids.theta: values in [0, pi]");
    for (double e : g.beta_energies) require(e < 0.0, "config.grids.beta_energies_hartree: values must be < 0");
  }
  {
    Section s = top.child("kernel");
    const std::string type = s.text("type", "gaussian");
    if (type == "gaussian") {
      cfg.kernel.type = xsec::Kernel::Type::Gaussian;
    } else if (type == "maxwell") {
      cfg.kernel.type = xsec::Kernel::Type::Maxwell;
    } else {
      throw ConfigError("config.kernel.type: expected \"gaussian\" or \"maxwell\"");
    }
    cfg.kernel.sigma_ev = s.number("sigma_ev", cfg.kernel.sigma_ev);
    cfg.kernel.kt_par_ev = s.number("kt_par_ev", cfg.kernel.kt_par_ev);
    cfg.kernel.kt_perp_ev = s.number("kt_perp_ev", cfg.kernel.kt_perp_ev);
    require(cfg.kernel.sigma_ev > 0.0 && cfg.kernel.kt_par_ev > 0.0 && cfg.kernel.kt_perp_ev > 0.0,
            "config.kernel: widths and temperatures must be > 0");
    s.finish();
  }
  {
    Section s = top.child("output");
    cfg.output_dir = s.text("directory", cfg.output_dir);
    s.finish();
  }
  top.finish();
  cfg.hash = fnv1a_hex(root.dump());
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace gmqdt::config
