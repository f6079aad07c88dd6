#pragma once

#include "oisac/rng.hpp"

namespace oisac {

/// 3-D position or direction in the global frame, meters (unitless as a direction).
struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const;
};

/// Unit vector pointing from `from` to `to`. Throws std::domain_error on
/// coincident points.
Vec3 unit_between(const Vec3& from, const Vec3& to);

/// Gaussian hyper-parameters of the ship roll/pitch/yaw angles, radians.
/// The scenario keeps mean roll/pitch at zero; mean yaw is the heading.
struct AttitudeModel {
    double mean_roll = 0.0, mean_pitch = 0.0, mean_yaw = 0.0;
    double var_roll = 0.0, var_pitch = 0.0, var_yaw = 0.0;

    /// Throws std::invalid_argument on a negative variance.
    void validate() const;
};

/// One sampled roll/pitch/yaw triple, radians.
struct Attitude {
    double roll = 0.0, pitch = 0.0, yaw = 0.0;
};

/// 3x3 rotation matrix, row-major.
struct RotMat {
    double m[3][3];

    static RotMat identity();
    Vec3 apply(const Vec3& v) const;            // R v
    Vec3 apply_transpose(const Vec3& v) const;  // R^T v
};

/// Draws each angle independently from its configured Gaussian.
Attitude sample_attitude(const AttitudeModel& model, Rng& rng);

/// Q = Rz(yaw) Ry(pitch) Rx(roll), expanded in closed form.
RotMat rotation_matrix(const Attitude& a);

/**
 * Cosine of the angle between the ship device's boresight and the line to
 * the remote node. The boresight is the ship-frame -z axis rotated by `q`,
 * so zero attitude with the remote node straight below gives +1.
 * `ship_end` and `remote_end` are world positions; throws std::domain_error
 * if they coincide.
 */
double direction_cosine(const RotMat& q, const Vec3& ship_end, const Vec3& remote_end);

/// First-order coefficients of the direction cosine in the roll/pitch
/// angles: c ~= alpha_roll*roll + alpha_pitch*pitch + mean (yaw drops out
/// at first order). `unit_disp` is the unit vector from the remote node to
/// the ship device.
struct LinearCosine {
    double alpha_roll = 0.0;
    double alpha_pitch = 0.0;
    double mean = 0.0;

    double variance(const AttitudeModel& model) const {
        return alpha_roll * alpha_roll * model.var_roll + alpha_pitch * alpha_pitch * model.var_pitch;
    }
};

LinearCosine linearize_cosine(const Vec3& unit_disp, double yaw_mean);

/// Evaluates the linearized cosine at a sampled attitude.
double linearized_cosine(const Attitude& a, const Vec3& unit_disp, double yaw_mean);

}  // namespace oisac
