#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "oisac/common.hpp"
#include "oisac/geometry.hpp"
#include "oisac/rng.hpp"

namespace oisac {

struct SystemConfig;

/**
 * Planar camera array rigidly mounted on the ship, rows x cols grid
 * centered on the AP origin with the given spacings. Camera 1 is the grid
 * point nearest the origin (row-major tie-break); projection offsets are
 * taken relative to it, so offsets()[0] == {0, 0}.
 */
struct CameraArray {
    int rows = 2, cols = 2;
    double spacing_x = 1.0, spacing_y = 1.0;  // m
    double focal_x = 0.05, focal_y = 0.05;    // m
    double cam_area = 1e-3;                   // m^2
    double eta = 2e-5;                        // pixel-noise scaling
    double pixel_noise_base = 1e-6;           // intensity-noise variance

    int count() const { return rows * cols; }
    /// Ship-frame mount positions (z = 0), camera 1 first.
    std::vector<Vec3> mounts() const;
    /// Film-plane offsets (dx_m, dy_m) entering the projection relations,
    /// camera 1 first with {0, 0}.
    std::vector<std::array<double, 2>> offsets() const;
    void validate() const;
};

/// One noisy film-plane measurement.
struct PixelObservation {
    int cam_index = 0;
    double x = 0.0, y = 0.0;                       // m, film plane
    double noise_var_x = 0.0, noise_var_y = 0.0;   // m^2
};

struct LocalizationResult {
    Vec3 p_c1;      // camera-1 frame
    Vec3 p_world;   // global frame
    bool condition_ok = true;
};

/// p_c = Q^T (p_world - t).
Vec3 world_to_camera(const RotMat& q, const Vec3& t, const Vec3& p_world);
/// Inverse of world_to_camera.
Vec3 camera_to_world(const RotMat& q, const Vec3& t, const Vec3& p_c);

/// Pinhole projection of the camera-1-frame point onto camera m's film:
/// x_m = f_x (x_c1 + dx_m) / z_c1, likewise y. Throws std::domain_error
/// when z_c1 == 0.
std::array<double, 2> project(const CameraArray& cam, int m, const Vec3& p_c1);

/// eta * sigma_I^2 / (alpha * I_ref). Throws std::domain_error on a
/// non-positive reflected intensity (blocked link).
double pixel_noise_variance(const CameraArray& cam, double alpha, double i_ref);

/**
 * Least-squares target position from >= 2 observations with distinct
 * offsets, solved by Householder QR on the stacked projection system.
 * `q`/`t` map the camera-1 estimate back to the world. condition_ok is
 * cleared when cond(Sigma^T Sigma) exceeds `cond_threshold`.
 */
LocalizationResult localize(const CameraArray& cam, std::span<const PixelObservation> obs,
                            const RotMat& q, const Vec3& t, double cond_threshold = 1e12);

struct MseEstimate {
    double mse = 0.0;           // m^2, mean over successful trials
    double std_error = 0.0;     // m^2
    double failure_rate = 0.0;  // blocked geometry or ill-conditioned
    long trials = 0;
};

/// Monte Carlo average localization MSE over attitude, turbulence and
/// pixel noise. Trial t draws from substream (seed, stream_domain, t), so
/// the result is independent of thread count.
MseEstimate monte_carlo_mse(const SystemConfig& cfg, long trials, std::uint64_t stream_domain = 0,
                            Exec exec = Exec::parallel);

/// Closed-form average MSE: first-order noise propagation at mean-attitude
/// geometry, attitude/turbulence averaging through the reciprocal-moment
/// chain, noise-inflated expected determinant. Throws std::domain_error
/// when the mean boresight points away from the target.
double analytic_mse(const SystemConfig& cfg);

/// Expected determinant of Sigma^T Sigma: M fx^2 fy^2 [(M-1) sum(a_i^2 +
/// b_i^2 + 2 var_i) - 2 sum_{i<j}(a_i a_j + b_i b_j)]. `noise_vars` holds
/// one per-camera variance (x and y share it); pass {} for noise-free.
double delta1_expected(const CameraArray& cam, const Vec3& p_c1, std::span<const double> noise_vars);

}  // namespace oisac
