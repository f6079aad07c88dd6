#pragma once

#include <span>
#include <string>
#include <vector>

#include "oisac/config.hpp"

namespace oisac {

/// One result row; columns match the published CSV schema. Entries that
/// were not computed (or whose point failed) hold NaN.
struct SweepPoint {
    double sweep_value = 0.0;
    double analytic_mse = 0.0;
    double mc_mse = 0.0;
    double mc_mse_stderr = 0.0;
    double analytic_rate = 0.0;
    double mc_rate = 0.0;
    double mc_rate_stderr = 0.0;
    double failure_rate = 0.0;
};

struct SweepResult {
    std::string variable;
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string timestamp;  // ISO 8601 UTC; excluded from CSV output
    std::string tool_version;
    std::vector<SweepPoint> points;

    bool operator==(const SweepResult&) const = default;
};

struct SweepOptions {
    bool montecarlo = true;  // false: analytic columns only
};

/// Grid of downlink transmit powers, watts.
SweepResult sweep_power(const SystemConfig& cfg, std::span<const double> grid,
                        const SweepOptions& opts = {});
/// Grid of camera spacings, meters (applied to both axes).
SweepResult sweep_spacing(const SystemConfig& cfg, std::span<const double> grid,
                          const SweepOptions& opts = {});
/// Grid of harvest-use fractions in (0, 1).
SweepResult sweep_alpha(const SystemConfig& cfg, std::span<const double> grid,
                        const SweepOptions& opts = {});

std::vector<double> default_power_grid();
std::vector<double> default_spacing_grid();
std::vector<double> default_alpha_grid();

/// CSV: '#' metadata line (hash, seed, tool version), header row, one row
/// per point. Byte-identical across reruns with the same config and seed.
void write_csv(const SweepResult& r, const std::string& path);

/// JSON: full metadata including the timestamp.
void write_json(const SweepResult& r, const std::string& path);
SweepResult read_json(const std::string& path);

}  // namespace oisac
