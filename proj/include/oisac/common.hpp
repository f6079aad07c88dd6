#pragma once

#include <numbers>

namespace oisac {

inline constexpr const char* kVersion = "0.1.0";

/// Execution policy for the Monte Carlo kernels. Results are bitwise
/// identical between the two (per-trial substreams, ordered reduction);
/// `serial` is the reference path kept for testing and benchmarking.
enum class Exec { serial, parallel };

constexpr double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }
constexpr double rad2deg(double rad) { return rad * 180.0 / std::numbers::pi; }

}  // namespace oisac
