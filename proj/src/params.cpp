#include "edgewall/params.hpp"

#include "edgewall/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace edgewall {

void ModelParams::validate() const {
  if (!std::isfinite(beta)) throw DomainError("beta must be finite");
  if (!(nu >= 0) || !std::isfinite(nu)) throw DomainError("nu must be finite and non-negative");
}

DimensionlessScales derive_scales(const MaterialParams& m) {
  const double ms = m.saturation_magnetization, a = m.exchange_constant, k = m.anisotropy_constant,
               d = m.thickness;
  if (!(ms > 0 && a > 0 && k > 0 && d > 0)) throw DomainError("material parameters must be strictly positive");
  DimensionlessScales s;
  s.exchange_length_ell = std::sqrt(2 * a / (kMu0 * ms * ms));
  s.bloch_width_L = std::sqrt(a / k);
  s.nu = kMu0 * ms * ms * d / (2 * std::sqrt(a * k));
  s.delta = d / s.bloch_width_L;
  return s;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

}  // namespace

double parse_angle(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s.empty()) throw DomainError("empty angle");
  double value = 0;
  if (parse_double(s, value)) return value;

  const auto p = s.find("pi");
  if (p == std::string::npos || s.find("pi", p + 2) != std::string::npos)
    throw DomainError("cannot parse angle '" + text + "'");
  std::string num = s.substr(0, p);
  std::string rest = s.substr(p + 2);
  if (!num.empty() && num.back() == '*') num.pop_back();
  double coef = 1;
  if (num.empty() || num == "+") {
    coef = 1;
  } else if (num == "-") {
    coef = -1;
  } else if (!parse_double(num, coef)) {
    throw DomainError("cannot parse angle '" + text + "'");
  }
  double den = 1;
  if (!rest.empty()) {
    if (rest[0] != '/' || !parse_double(rest.substr(1), den) || den == 0)
      throw DomainError("cannot parse angle '" + text + "'");
  }
  return coef * std::numbers::pi / den;
}

std::string format_angle(double beta) {
  for (int q = 1; q <= 16; ++q) {
    const double p = beta / std::numbers::pi * q;
    const double r = std::round(p);
    if (std::abs(p - r) < 1e-12 * std::max(1.0, std::abs(p))) {
      const long pi_num = static_cast<long>(r);
      if (pi_num == 0) return "0";
      std::string s = pi_num == 1 ? "pi" : pi_num == -1 ? "-pi" : std::to_string(pi_num) + "*pi";
      if (q != 1) s += "/" + std::to_string(q);
      return s;
    }
  }
  std::ostringstream os;
  os.precision(17);
  os << beta;
  return os.str();
}

bool apply_config_value(RunConfig& cfg, const std::string& key, const std::string& value) {
  const auto number = [&](double& out) {
    if (!parse_double(value, out)) throw DomainError("bad numeric value '" + value + "' for " + key);
  };
  if (key == "beta") {
    cfg.beta = parse_angle(value);
  } else if (key == "nu") {
    number(cfg.nu);
  } else if (key == "dx0") {
    number(cfg.dx0);
  } else if (key == "stretch_b") {
    if (value == "inf") cfg.stretch_b = INFINITY;
    else number(cfg.stretch_b);
  } else if (key == "x_max") {
    number(cfg.x_max);
  } else if (key == "h_max") {
    if (value == "inf") cfg.h_max = INFINITY;
    else number(cfg.h_max);
  } else if (key == "dt") {
    number(cfg.dt);
  } else if (key == "tol") {
    number(cfg.tol);
  } else if (key == "max_steps") {
    double v = 0;
    number(v);
    if (v < 1 || v != std::floor(v)) throw DomainError("max_steps must be a positive integer");
    cfg.max_steps = static_cast<long>(v);
  } else if (key == "out_prefix") {
    cfg.out_prefix = value;
  } else {
    return false;
  }
  return true;
}

void load_config_file(const std::filesystem::path& path, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file " + path.string(), 0);
  std::string line;
  long n = 0;
  while (std::getline(in, line)) {
    ++n;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected key=value", n);
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    try {
      if (!apply_config_value(cfg, key, value)) throw ParseError("unknown key '" + key + "'", n);
    } catch (const DomainError& e) {
      throw ParseError(e.what(), n);
    }
  }
}

}  // namespace edgewall
