// edgewall: relax, analyze and validate edge domain walls.
//
// Exit codes: 0 ok, 1 usage error, 2 numerical failure (non-convergence, divergence,
// failed validation).

#include "edgewall/analysis.hpp"
#include "edgewall/dynamics.hpp"
#include "edgewall/energy.hpp"
#include "edgewall/errors.hpp"
#include "edgewall/io.hpp"
#include "edgewall/params.hpp"
#include "edgewall/validation.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using namespace edgewall;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kNumerical = 2;

/// Grid and solver flags shared by relax and sweep. Values stay unset unless given,
/// so that config-file entries are only overridden by explicit flags.
struct RunFlags {
  std::string config;
  std::optional<std::string> beta;
  std::optional<double> nu, dx0, stretch, xmax, hmax, dt, tol;
  std::optional<long> max_steps;
  std::optional<std::string> out;
  bool uniform = false;
  long report_every = 1000;
  bool quiet = false;

  void add_grid_and_solver(CLI::App* app) {
    app->add_option("--config", config, "key=value run configuration file");
    app->add_option("--dx0", dx0, "edge spacing (default 0.125)");
    app->add_option("--stretch", stretch, "stretch factor b (default 20; 'inf' for uniform)");
    app->add_option("--xmax", xmax, "domain end (default 6000)");
    app->add_option("--hmax", hmax, "spacing cap (default 16)");
    app->add_flag("--uniform", uniform, "uniform grid with spacing dx0");
    app->add_option("--dt", dt, "time step (default min(0.05, h_min/(1+nu)))");
    app->add_option("--tol", tol, "residual sup-norm threshold (default 1e-7)");
    app->add_option("--max-steps", max_steps, "step limit");
    app->add_option("--report-every", report_every, "progress/energy sampling interval")->check(CLI::PositiveNumber);
    app->add_flag("--quiet", quiet, "no progress lines");
  }

  RunConfig resolve() const {
    RunConfig c;
    if (!config.empty()) load_config_file(config, c);
    if (beta) c.beta = parse_angle(*beta);
    if (nu) c.nu = *nu;
    if (dx0) c.dx0 = *dx0;
    if (stretch) c.stretch_b = *stretch;
    if (xmax) c.x_max = *xmax;
    if (hmax) c.h_max = *hmax;
    if (dt) c.dt = *dt;
    if (tol) c.tol = *tol;
    if (max_steps) c.max_steps = *max_steps;
    if (out) c.out_prefix = *out;
    return c;
  }

  GridSpec grid_spec(const RunConfig& c) const {
    GridSpec g;
    g.kind = uniform ? "uniform" : "stretched";
    g.dx0 = c.dx0;
    g.stretch_b = c.stretch_b;
    g.x_max = c.x_max;
    g.h_max = c.h_max;
    return g;
  }
};

/// Relaxes from the standard initial data, analyzes, and writes <prefix>.csv/.json.
RunRecord run_one(const RunConfig& c, const GridSpec& spec_in, long report_every, const ProgressCallback& progress,
                  const std::string& prefix) {
  RunRecord rec;
  rec.params = c.model();
  rec.grid = spec_in;
  rec.config.dt = c.dt;
  rec.config.tol = c.tol;
  rec.config.max_steps = c.max_steps;
  rec.config.report_every = report_every;
  rec.params.validate();
  rec.config.validate();
  const Grid g = rec.grid.build();
  rec.grid.nodes = g.size();
  const EnergyModel model(g, c.beta, c.nu);
  Profile profile = initial_profile(c.beta, g);
  try {
    const auto res = relax(model, profile, rec.config, progress);
    profile = res.profile;
    rec.result = {res.converged, res.steps_taken, res.final_residual, res.dt, res.energy_history};
  } catch (const DivergenceError& e) {
    rec.error = e.what();
    rec.result.steps_taken = e.step();
  } catch (const StabilityError& e) {
    rec.error = e.what();
    rec.result.steps_taken = e.step();
  }
  if (rec.error.empty()) {
    rec.energy = model.evaluate(profile);
    rec.diagnostics = diagnostics(profile);
    if (g.x_end() >= 500) {
      try {
        rec.decay = fit_decay(profile, 50, 500, rec.diagnostics.theta_infinity);
      } catch (const WindowError&) {
        rec.decay.reset();
      }
    }
    const std::string csv = prefix + ".csv";
    write_profile_csv(profile, csv);
    rec.files.push_back(csv);
  }
  rec.files.push_back(prefix + ".json");
  write_run_json(rec, prefix + ".json");
  return rec;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    out.push_back(item.substr(b, item.find_last_not_of(" \t") - b + 1));
  }
  return out;
}

std::string file_safe(const std::string& label) {
  std::string s;
  for (char ch : label) s += (std::isalnum(static_cast<unsigned char>(ch)) || ch == '.' || ch == '-') ? ch : '_';
  return s;
}

unsigned worker_count() {
  if (const char* env = std::getenv("EDGEWALL_WORKERS")) {
    const int n = std::atoi(env);
    if (n >= 1) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Edge domain walls with a half-Laplacian stray-field term"};
  app.require_subcommand(1);

  // relax
  RunFlags relax_flags;
  bool write_grid = false;
  auto* relax_cmd = app.add_subcommand("relax", "relax one wall from the standard initial profile");
  relax_cmd->add_option("--beta", relax_flags.beta, "edge angle (radians or p*pi/q)");
  relax_cmd->add_option("--nu", relax_flags.nu, "thin-film parameter (default 1)");
  relax_flags.add_grid_and_solver(relax_cmd);
  relax_cmd->add_option("--out", relax_flags.out, "output prefix (default 'edgewall')");
  relax_cmd->add_flag("--write-grid", write_grid, "also write <out>_grid.csv");

  // energy
  std::string energy_profile;
  double energy_nu = 0;
  std::string energy_cutoff = "quintic";
  auto* energy_cmd = app.add_subcommand("energy", "renormalized energy of a profile CSV");
  energy_cmd->add_option("--profile", energy_profile, "profile CSV (x,theta)")->required();
  energy_cmd->add_option("--nu", energy_nu, "thin-film parameter")->required();
  energy_cmd->add_option("--cutoff", energy_cutoff, "cutoff shape")->check(CLI::IsMember({"quintic", "cosine"}));

  // sweep
  RunFlags sweep_flags;
  std::string beta_list, nu_list, out_dir = "sweep";
  auto* sweep_cmd = app.add_subcommand("sweep", "relax every (beta, nu) pair; workers from EDGEWALL_WORKERS");
  sweep_cmd->add_option("--beta-list", beta_list, "comma-separated angles")->required();
  sweep_cmd->add_option("--nu-list", nu_list, "comma-separated nu values")->required();
  sweep_cmd->add_option("--out-dir", out_dir, "output directory (default 'sweep')");
  sweep_flags.add_grid_and_solver(sweep_cmd);

  // decay
  std::string decay_profile;
  double decay_lo = 50, decay_hi = 500, decay_inf = 0;
  auto* decay_cmd = app.add_subcommand("decay", "fit power and exponential tails of a profile CSV");
  decay_cmd->add_option("--profile", decay_profile, "profile CSV (x,theta)")->required();
  decay_cmd->add_option("--lo", decay_lo, "window start (default 50)");
  decay_cmd->add_option("--hi", decay_hi, "window end (default 500)");
  decay_cmd->add_option("--theta-inf", decay_inf, "tail limit subtracted before fitting (default 0)");

  // validate
  ValidationOptions vopts;
  auto* validate_cmd = app.add_subcommand("validate", "run the acceptance suite");
  validate_cmd->add_option("--only", vopts.only, "restrict to one module")->check(CLI::IsMember(validation_modules()));
  validate_cmd->add_flag("--quick", vopts.quick, "shorter domains where the criterion allows (tolerances unchanged)");

  // scales
  MaterialParams mat{8e5, 1.3e-11, 5e2, 4e-9};
  auto* scales_cmd = app.add_subcommand("scales", "dimensionless scales from material constants (SI)");
  scales_cmd->add_option("--Ms", mat.saturation_magnetization, "saturation magnetization [A/m]");
  scales_cmd->add_option("--A", mat.exchange_constant, "exchange constant [J/m]");
  scales_cmd->add_option("--K", mat.anisotropy_constant, "anisotropy constant [J/m^3]");
  scales_cmd->add_option("--d", mat.thickness, "film thickness [m]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*relax_cmd) {
      const RunConfig c = relax_flags.resolve();
      const GridSpec spec = relax_flags.grid_spec(c);
      ProgressCallback progress;
      if (!relax_flags.quiet)
        progress = [](const RelaxationProgress& p) {
          std::printf("step %ld residual %.6e energy %.12f\n", p.step, p.residual, p.energy);
        };
      if (write_grid) write_grid_csv(spec.build(), c.out_prefix + "_grid.csv");
      const RunRecord rec = run_one(c, spec, relax_flags.report_every, progress, c.out_prefix);
      if (!rec.error.empty()) {
        std::fprintf(stderr, "relaxation failed: %s\n", rec.error.c_str());
        return kNumerical;
      }
      std::printf("%s after %ld steps, residual %.3e, energy %.12f, slope %.6f\n",
                  rec.result.converged ? "converged" : "NOT converged", rec.result.steps_taken,
                  rec.result.final_residual, rec.energy.total_renormalized, rec.diagnostics.boundary_slope);
      return rec.result.converged ? kOk : kNumerical;
    }

    if (*energy_cmd) {
      const Profile p = read_profile_csv(energy_profile);
      if (!(energy_nu >= 0)) throw DomainError("nu must be non-negative");
      const Cutoff cut{p.beta, energy_cutoff == "cosine" ? CutoffShape::cosine : CutoffShape::quintic};
      std::cout << to_json_string(renormalized_energy(p, energy_nu, cut));
      return kOk;
    }

    if (*sweep_cmd) {
      const RunConfig base = sweep_flags.resolve();
      const auto betas = split_list(beta_list);
      const auto nus = split_list(nu_list);
      if (betas.empty() || nus.empty()) {
        std::fprintf(stderr, "sweep needs non-empty --beta-list and --nu-list\n");
        return kUsage;
      }
      std::vector<RunConfig> jobs;
      std::vector<std::string> prefixes;
      for (const auto& b : betas) {
        for (const auto& n : nus) {
          RunConfig c = base;
          c.beta = parse_angle(b);
          if (!apply_config_value(c, "nu", n)) throw DomainError("bad nu '" + n + "'");
          c.model().validate();
          jobs.push_back(c);
          prefixes.push_back((fs::path(out_dir) / ("beta_" + file_safe(b) + "_nu_" + file_safe(n))).string());
        }
      }
      fs::create_directories(out_dir);
      const GridSpec spec = sweep_flags.grid_spec(base);
      std::vector<RunRecord> records(jobs.size());
      std::atomic<std::size_t> next{0};
      std::mutex print_mutex;
      const auto worker = [&] {
        for (std::size_t k = next++; k < jobs.size(); k = next++) {
          try {
            records[k] = run_one(jobs[k], spec, sweep_flags.report_every, {}, prefixes[k]);
          } catch (const std::exception& e) {
            records[k].params = jobs[k].model();
            records[k].grid = spec;
            records[k].error = e.what();
          }
          if (!sweep_flags.quiet) {
            std::lock_guard lock(print_mutex);
            const auto& r = records[k];
            std::printf("beta=%s nu=%g: %s\n", format_angle(r.params.beta).c_str(), r.params.nu,
                        !r.error.empty() ? ("failed: " + r.error).c_str()
                                         : (r.result.converged ? "converged" : "not converged"));
          }
        }
      };
      const unsigned n_workers = std::min<unsigned>(worker_count(), static_cast<unsigned>(jobs.size()));
      std::vector<std::thread> pool;
      for (unsigned w = 1; w < n_workers; ++w) pool.emplace_back(worker);
      worker();
      for (auto& t : pool) t.join();
      write_sweep_json(records, fs::path(out_dir) / "sweep.json");
      bool failed = false;
      for (const auto& r : records) failed = failed || !r.error.empty() || !r.result.converged;
      return failed ? kNumerical : kOk;
    }

    if (*decay_cmd) {
      const Profile p = read_profile_csv(decay_profile);
      std::cout << to_json_string(fit_decay(p, decay_lo, decay_hi, decay_inf));
      return kOk;
    }

    if (*validate_cmd) {
      if (vopts.quick) std::printf("quick mode: x_max=1000 where the criterion does not fix the domain; tolerances unchanged\n");
      const auto results = run_acceptance(vopts, [](const CriterionResult& r) {
        std::printf("%s\n", format_result(r).c_str());
        std::fflush(stdout);
      });
      bool ok = true;
      for (const auto& r : results) ok = ok && r.passed;
      std::printf("%zu criteria, %s\n", results.size(), ok ? "all passed" : "FAILURES");
      return ok ? kOk : kNumerical;
    }

    if (*scales_cmd) {
      std::cout << to_json_string(derive_scales(mat));
      return kOk;
    }
  } catch (const ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kNumerical;
  }
  return kUsage;
}
