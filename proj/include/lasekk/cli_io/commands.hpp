#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lasekk/cli_io/config.hpp"

namespace lasekk::cli {

/// Where a command writes. `csv` is the main table; side files (SVG, kink
/// report) are derived from it by swapping the extension.
struct OutputPaths {
  std::string csv;

  std::string with_suffix(const std::string& suffix) const;  // "x.csv" -> "x" + suffix
};

/// Each returns the process exit code and writes a one-line summary to `log`.
int run_laser_profile(const EffectiveConfig& cfg, const OutputPaths& out, std::ostream& log);
int run_probe_spectrum(const EffectiveConfig& cfg, const OutputPaths& out, std::ostream& log);
int run_kk_check(const EffectiveConfig& cfg, const OutputPaths& out, std::ostream& log);
int run_oracle_compare(const EffectiveConfig& cfg, const OutputPaths& out, std::ostream& log);

int run(const EffectiveConfig& cfg, const OutputPaths& out, std::ostream& log);

/// Agreement bounds enforced by oracle-compare.
inline constexpr double kBoundClosedSolve = 1e-10;
inline constexpr double kBoundSolveTimeDomain = 1e-3;
inline constexpr double kBoundLinearLimit = 1e-6;

/// Seeded random pump-probe parameter sets: Gamma, gamma_ba and r_op
/// log-uniform over the configured decade range, Omega1 uniform in [0, 10 eta],
/// Delta uniform in [-5 eta, 5 eta], G = 1.
std::vector<PumpProbeParamsd> random_probe_draws(int count, std::uint64_t seed);

/// Default probe window half-width: 5 max(Omega', eta).
double probe_window(const PumpProbeParamsd& p);

/// `k` indices spread evenly over n samples, skipping a zero detuning.
std::vector<Eigen::Index> spread_indices(const UniformGrid<double>& grid, int k);

/// Default output file name per command, e.g. "laser_profile.csv".
std::string default_output_name(Command c);

/// Relative paths are placed under $LASE_KK_OUT_DIR when it is set.
std::string resolve_output_path(const std::string& path);

}  // namespace lasekk::cli
