#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "oisac/channel.hpp"
#include "oisac/energy_rate.hpp"
#include "oisac/geometry.hpp"
#include "oisac/sensing.hpp"

namespace oisac {

/// Which attitude the localization pipeline uses for the camera-to-world
/// mapping. `per_trial` models an attitude-instrumented ship (exact at
/// zero noise); `mean` models an uninstrumented one and produces a
/// power-independent error floor under attitude variation.
enum class EstimatorAttitude { per_trial, mean };

/// Full scenario. Defaults reproduce the shipped reference setup; see
/// docs/file_formats.md for the file schema (degrees at the interface).
struct SystemConfig {
    Vec3 ap_position{0.0, 0.0, 10.0};
    Vec3 target_position{2.0, 2.0, 0.0};
    Vec3 eh_position{-2.0, -2.0, 0.0};

    AttitudeModel attitude;  // set to 10 deg sigmas in make_default()

    ChannelParams chan_ap_target;
    ChannelParams chan_target_camera;
    ChannelParams chan_ap_eh;
    ChannelParams chan_eh_ap;

    TurbulenceParams turbulence;
    CameraArray camera;
    EhParams eh;

    double target_reflectivity = 0.5;

    std::uint64_t seed = 0;
    long trials_mse = 100000;
    long trials_rate = 10000;
    std::array<int, 3> quadrature_orders{30, 40, 40};

    EstimatorAttitude estimator_attitude = EstimatorAttitude::per_trial;
    bool independent_rate_attitude = false;  // separate draws for the two rate links

    static SystemConfig make_default();
    void validate() const;
};

/// Loads a JSON config file; absent keys fall back to defaults, unknown
/// keys are rejected, degree-valued fields are converted to radians.
SystemConfig load_config(const std::string& path);

SystemConfig config_from_json_text(const std::string& text);

/// Canonical JSON text of a config (sorted keys); basis of config_hash.
std::string config_to_json_text(const SystemConfig& cfg);

/// FNV-1a 64-bit hash of the canonical JSON, as fixed-width hex.
std::string config_hash(const SystemConfig& cfg);

}  // namespace oisac
