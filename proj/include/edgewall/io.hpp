#pragma once

#include "edgewall/analysis.hpp"
#include "edgewall/dynamics.hpp"
#include "edgewall/energy.hpp"
#include "edgewall/params.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace edgewall {

/// "x,theta" with 17 significant digits; reads back bit-identically.
void write_profile_csv(const Profile& p, const std::filesystem::path& path);

/// Inverse of write_profile_csv; beta is taken from the first row.
/// Throws ParseError (with line number) on malformed rows or non-increasing x.
Profile read_profile_csv(const std::filesystem::path& path);

/// "index,x".
void write_grid_csv(const Grid& g, const std::filesystem::path& path);

struct GridSpec {
  std::string kind = "stretched";  ///< "stretched" or "uniform"
  double dx0 = 0.125;
  double stretch_b = 20;
  double x_max = 6000;
  double h_max = 16;
  long nodes = 0;

  Grid build() const;
};

struct ResultSummary {
  bool converged = false;
  long steps_taken = 0;
  double final_residual = 0;
  double dt = 0;
  std::vector<EnergySample> energy_history;
};

/// Everything needed to reproduce and inspect one relaxation.
struct RunRecord {
  ModelParams params;
  GridSpec grid;
  RelaxationConfig config;
  ResultSummary result;
  ProfileDiagnostics diagnostics;
  EnergyBreakdown energy;
  std::optional<DecayFits> decay;
  std::string error;  ///< non-empty when the run failed
  std::vector<std::string> files;
};

std::string to_json_string(const RunRecord& r);
RunRecord run_record_from_json_string(const std::string& text);

std::string to_json_string(const EnergyBreakdown& e);
std::string to_json_string(const DecayFits& f);
std::string to_json_string(const ProfileDiagnostics& d);
std::string to_json_string(const DimensionlessScales& s);

/// Single run: the record as one JSON object.
void write_run_json(const RunRecord& r, const std::filesystem::path& path);

/// Sweep table: {"results": [record, ...]} in the given order.
void write_sweep_json(const std::vector<RunRecord>& runs, const std::filesystem::path& path);

/// Writes `text` atomically enough for our purposes (temp file + rename).
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace edgewall
