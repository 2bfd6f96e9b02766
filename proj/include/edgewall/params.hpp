#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

namespace edgewall {

/// Vacuum permeability (SI, exact pre-2019 value).
inline constexpr double kMu0 = 4e-7 * 3.14159265358979323846;

/// Material constants in SI units.
struct MaterialParams {
  double saturation_magnetization = 0;  ///< Ms [A/m]
  double exchange_constant = 0;         ///< A [J/m]
  double anisotropy_constant = 0;       ///< K [J/m^3]
  double thickness = 0;                 ///< d [m]
};

/// Wall angle at the edge and thin-film parameter.
struct ModelParams {
  double beta = 0;
  double nu = 0;

  void validate() const;
};

struct DimensionlessScales {
  double exchange_length_ell = 0;  ///< sqrt(2A / (mu0 Ms^2)) [m]
  double bloch_width_L = 0;        ///< sqrt(A / K) [m]
  double nu = 0;                   ///< mu0 Ms^2 d / (2 sqrt(A K))
  double delta = 0;                ///< d / L
};

DimensionlessScales derive_scales(const MaterialParams& m);

/// Parses an angle: a decimal radian value or a rational multiple of pi
/// ("pi", "-pi/2", "3*pi/2", "3pi/4", "0.5*pi").
double parse_angle(const std::string& text);

/// Formats an angle as "p*pi/q" when it is a small rational multiple of pi.
std::string format_angle(double beta);

/// Flat run configuration shared by the config file and the command line.
struct RunConfig {
  double beta = 0;
  double nu = 1;
  double dx0 = 0.125;
  double stretch_b = 20;
  double x_max = 6000;
  double h_max = 16;
  double dt = 0;  ///< 0 selects the default step
  double tol = 1e-7;
  long max_steps = 2000000;
  std::string out_prefix = "edgewall";

  ModelParams model() const { return {beta, nu}; }
};

/// Reads key=value lines ('#' comments, blank lines allowed) into `cfg`.
/// Known keys: beta, nu, dx0, stretch_b, x_max, h_max, dt, tol, max_steps, out_prefix.
/// Throws ParseError with the line number on unknown keys or bad values.
void load_config_file(const std::filesystem::path& path, RunConfig& cfg);

/// Applies one key/value pair; returns false for an unknown key.
bool apply_config_value(RunConfig& cfg, const std::string& key, const std::string& value);

}  // namespace edgewall
