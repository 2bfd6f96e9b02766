#include "edgewall/io.hpp"

#include "edgewall/errors.hpp"

#include <json.hpp>

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace edgewall {

using nlohmann::json;

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool parse_full(const std::string& s, double& out) {
  if (s.empty()) return false;
  errno = 0;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return errno == 0 && end == s.c_str() + s.size() && std::isfinite(out);
}

}  // namespace

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_profile_csv(const Profile& p, const std::filesystem::path& path) {
  std::string s = "x,theta\n";
  for (Index i = 0; i < p.grid.size(); ++i) s += fmt17(p.grid[i]) + "," + fmt17(p.theta(i)) + "\n";
  write_text_file(path, s);
}

Profile read_profile_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string(), 0);
  std::string line;
  long n = 0;
  if (!std::getline(in, line)) throw ParseError("empty profile file", 1);
  ++n;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "x,theta") throw ParseError("expected header 'x,theta'", n);
  std::vector<double> xs, ts;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    double x = 0, t = 0;
    if (comma == std::string::npos || !parse_full(line.substr(0, comma), x) || !parse_full(line.substr(comma + 1), t))
      throw ParseError("malformed row '" + line + "'", n);
    if (xs.empty() && x != 0) throw ParseError("first x must be 0", n);
    if (!xs.empty() && !(x > xs.back())) throw ParseError("x column must be strictly increasing", n);
    xs.push_back(x);
    ts.push_back(t);
  }
  if (xs.size() < 2) throw ParseError("profile needs at least two rows", n);
  Grid g(Eigen::Map<Eigen::VectorXd>(xs.data(), static_cast<Index>(xs.size())));
  return Profile(g, Eigen::Map<Eigen::VectorXd>(ts.data(), static_cast<Index>(ts.size())), ts.front());
}

void write_grid_csv(const Grid& g, const std::filesystem::path& path) {
  std::string s = "index,x\n";
  for (Index i = 0; i < g.size(); ++i) s += std::to_string(i) + "," + fmt17(g[i]) + "\n";
  write_text_file(path, s);
}

Grid GridSpec::build() const {
  if (kind == "uniform") return make_uniform_grid(dx0, x_max);
  if (kind == "stretched") return make_stretched_grid(dx0, stretch_b, x_max, h_max);
  throw DomainError("unknown grid kind '" + kind + "'");
}

namespace {

// JSON has no infinity; store it as a string.
json num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}
double get_num(const json& j) {
  if (j.is_string()) return j.get<std::string>() == "-inf" ? -INFINITY : INFINITY;
  return j.get<double>();
}

json energy_json(const EnergyBreakdown& e) {
  return {{"exchange", e.exchange},
          {"anisotropy", e.anisotropy},
          {"edge_charge_term", e.edge_charge_term},
          {"gagliardo_J_theta", e.gagliardo_J_theta},
          {"gagliardo_J_eta", e.gagliardo_J_eta},
          {"total_renormalized", e.total_renormalized}};
}
EnergyBreakdown energy_from(const json& j) {
  EnergyBreakdown e;
  e.exchange = j.at("exchange");
  e.anisotropy = j.at("anisotropy");
  e.edge_charge_term = j.at("edge_charge_term");
  e.gagliardo_J_theta = j.at("gagliardo_J_theta");
  e.gagliardo_J_eta = j.at("gagliardo_J_eta");
  e.total_renormalized = j.at("total_renormalized");
  return e;
}

json fit_json(const DecayFit& f) {
  return {{"model", to_string(f.model)},     {"exponent_or_rate", f.exponent_or_rate},
          {"prefactor", f.prefactor},        {"window", {f.x_lo, f.x_hi}},
          {"r_squared", f.r_squared},        {"nodes", f.nodes}};
}
DecayFit fit_from(const json& j) {
  DecayFit f;
  f.model = j.at("model") == "power" ? DecayModel::power : DecayModel::exponential;
  f.exponent_or_rate = j.at("exponent_or_rate");
  f.prefactor = j.at("prefactor");
  f.x_lo = j.at("window").at(0);
  f.x_hi = j.at("window").at(1);
  f.r_squared = j.at("r_squared");
  f.nodes = j.at("nodes");
  return f;
}
json fits_json(const DecayFits& f) {
  return {{"power", fit_json(f.power)}, {"exponential", fit_json(f.exponential)}, {"best", to_string(f.best().model)}};
}

json diag_json(const ProfileDiagnostics& d) {
  return {{"theta_infinity", d.theta_infinity}, {"total_variation", d.total_variation},
          {"max_abs_theta", d.max_abs_theta},   {"winding_flag", d.winding_flag},
          {"monotone_flag", d.monotone_flag},   {"overshoot_flag", d.overshoot_flag},
          {"boundary_slope", d.boundary_slope}};
}
ProfileDiagnostics diag_from(const json& j) {
  ProfileDiagnostics d;
  d.theta_infinity = j.at("theta_infinity");
  d.total_variation = j.at("total_variation");
  d.max_abs_theta = j.at("max_abs_theta");
  d.winding_flag = j.at("winding_flag");
  d.monotone_flag = j.at("monotone_flag");
  d.overshoot_flag = j.at("overshoot_flag");
  d.boundary_slope = j.at("boundary_slope");
  return d;
}

json record_json(const RunRecord& r) {
  json hist = json::array();
  for (const auto& s : r.result.energy_history) hist.push_back({s.step, s.energy});
  json j = {
      {"params", {{"beta", r.params.beta}, {"beta_label", format_angle(r.params.beta)}, {"nu", r.params.nu}}},
      {"grid",
       {{"kind", r.grid.kind},
        {"dx0", r.grid.dx0},
        {"stretch_b", num(r.grid.stretch_b)},
        {"x_max", r.grid.x_max},
        {"h_max", num(r.grid.h_max)},
        {"nodes", r.grid.nodes}}},
      {"config",
       {{"dt", r.config.dt},
        {"tol", r.config.tol},
        {"max_steps", r.config.max_steps},
        {"report_every", r.config.report_every}}},
      {"result",
       {{"converged", r.result.converged},
        {"steps_taken", r.result.steps_taken},
        {"final_residual", r.result.final_residual},
        {"dt", r.result.dt},
        {"energy_history", hist}}},
      {"diagnostics", diag_json(r.diagnostics)},
      {"energy", energy_json(r.energy)},
      {"decay", r.decay ? fits_json(*r.decay) : json(nullptr)},
      {"error", r.error},
      {"files", r.files},
  };
  return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string to_json_string(const RunRecord& r) { return dump(record_json(r)); }

RunRecord run_record_from_json_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), 0);
  }
  try {
    RunRecord r;
    r.params.beta = j.at("params").at("beta");
    r.params.nu = j.at("params").at("nu");
    const auto& g = j.at("grid");
    r.grid.kind = g.at("kind");
    r.grid.dx0 = g.at("dx0");
    r.grid.stretch_b = get_num(g.at("stretch_b"));
    r.grid.x_max = g.at("x_max");
    r.grid.h_max = get_num(g.at("h_max"));
    r.grid.nodes = g.at("nodes");
    const auto& c = j.at("config");
    r.config.dt = c.at("dt");
    r.config.tol = c.at("tol");
    r.config.max_steps = c.at("max_steps");
    r.config.report_every = c.at("report_every");
    const auto& s = j.at("result");
    r.result.converged = s.at("converged");
    r.result.steps_taken = s.at("steps_taken");
    r.result.final_residual = s.at("final_residual");
    r.result.dt = s.at("dt");
    for (const auto& h : s.at("energy_history")) r.result.energy_history.push_back({h.at(0), h.at(1)});
    r.diagnostics = diag_from(j.at("diagnostics"));
    r.energy = energy_from(j.at("energy"));
    if (!j.at("decay").is_null()) {
      DecayFits f;
      f.power = fit_from(j.at("decay").at("power"));
      f.exponential = fit_from(j.at("decay").at("exponential"));
      r.decay = f;
    }
    r.error = j.at("error");
    r.files = j.at("files").get<std::vector<std::string>>();
    return r;
  } catch (const json::exception& e) {
    throw ParseError(std::string("run record: ") + e.what(), 0);
  }
}

std::string to_json_string(const EnergyBreakdown& e) { return dump(energy_json(e)); }
std::string to_json_string(const DecayFits& f) { return dump(fits_json(f)); }
std::string to_json_string(const ProfileDiagnostics& d) { return dump(diag_json(d)); }
std::string to_json_string(const DimensionlessScales& s) {
  return dump({{"exchange_length_ell_m", s.exchange_length_ell},
               {"bloch_width_L_m", s.bloch_width_L},
               {"nu", s.nu},
               {"delta", s.delta}});
}

void write_run_json(const RunRecord& r, const std::filesystem::path& path) { write_text_file(path, to_json_string(r)); }

void write_sweep_json(const std::vector<RunRecord>& runs, const std::filesystem::path& path) {
  json arr = json::array();
  for (const auto& r : runs) arr.push_back(record_json(r));
  write_text_file(path, dump({{"results", arr}}));
}

}  // namespace edgewall
