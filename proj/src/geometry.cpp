#include "oisac/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace oisac {

double Vec3::norm() const { return std::sqrt(x * x + y * y + z * z); }

Vec3 unit_between(const Vec3& from, const Vec3& to) {
    const Vec3 d = to - from;
    const double n = d.norm();
    if (n == 0.0) throw std::domain_error("unit_between: coincident points");
    return d * (1.0 / n);
}

void AttitudeModel::validate() const {
    if (var_roll < 0.0 || var_pitch < 0.0 || var_yaw < 0.0)
        throw std::invalid_argument("AttitudeModel: negative variance");
}

RotMat RotMat::identity() {
    RotMat r{};
    r.m[0][0] = r.m[1][1] = r.m[2][2] = 1.0;
    return r;
}

Vec3 RotMat::apply(const Vec3& v) const {
    return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
}

Vec3 RotMat::apply_transpose(const Vec3& v) const {
    return {m[0][0] * v.x + m[1][0] * v.y + m[2][0] * v.z,
            m[0][1] * v.x + m[1][1] * v.y + m[2][1] * v.z,
            m[0][2] * v.x + m[1][2] * v.y + m[2][2] * v.z};
}

Attitude sample_attitude(const AttitudeModel& model, Rng& rng) {
    model.validate();
    return {rng.next_normal(model.mean_roll, std::sqrt(model.var_roll)),
            rng.next_normal(model.mean_pitch, std::sqrt(model.var_pitch)),
            rng.next_normal(model.mean_yaw, std::sqrt(model.var_yaw))};
}

RotMat rotation_matrix(const Attitude& a) {
    const double cr = std::cos(a.roll), sr = std::sin(a.roll);
    const double cp = std::cos(a.pitch), sp = std::sin(a.pitch);
    const double cy = std::cos(a.yaw), sy = std::sin(a.yaw);
    RotMat q{};
    q.m[0][0] = cy * cp;
    q.m[0][1] = cy * sp * sr - sy * cr;
    q.m[0][2] = cy * sp * cr + sy * sr;
    q.m[1][0] = sy * cp;
    q.m[1][1] = sy * sp * sr + cy * cr;
    q.m[1][2] = sy * sp * cr - cy * sr;
    q.m[2][0] = -sp;
    q.m[2][1] = cp * sr;
    q.m[2][2] = cp * cr;
    return q;
}

double direction_cosine(const RotMat& q, const Vec3& ship_end, const Vec3& remote_end) {
    const Vec3 u = unit_between(ship_end, remote_end);
    // boresight = q * (-e_z); dot with u = -(third column of q) . u
    return -(q.m[0][2] * u.x + q.m[1][2] * u.y + q.m[2][2] * u.z);
}

LinearCosine linearize_cosine(const Vec3& unit_disp, double yaw_mean) {
    const double cy = std::cos(yaw_mean), sy = std::sin(yaw_mean);
    return {sy * unit_disp.x - cy * unit_disp.y,
            cy * unit_disp.x + sy * unit_disp.y,
            unit_disp.z};
}

double linearized_cosine(const Attitude& a, const Vec3& unit_disp, double yaw_mean) {
    const LinearCosine lc = linearize_cosine(unit_disp, yaw_mean);
    return lc.alpha_roll * a.roll + lc.alpha_pitch * a.pitch + lc.mean;
}

}  // namespace oisac
