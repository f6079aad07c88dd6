#pragma once

#include <cmath>
#include <numbers>

#include "oisac/channel.hpp"
#include "oisac/geometry.hpp"

namespace oisac::detail {

/// Mean-attitude statistics of one ship<->node link used by the closed
/// forms: distances, the mean direction cosine, and the linearized-cosine
/// variance in both cosine and angle space.
struct LinkStats {
    double dist = 0.0;
    Vec3 unit_to_ship;       // (ship - node)/d
    double mean_cos = 0.0;   // = unit_to_ship.z at mean attitude
    double theta_bar = 0.0;  // acos(mean_cos)
    double sigma_c2 = 0.0;   // cosine-space variance
    double sigma_angle2 = 0.0;
};

inline LinkStats link_stats(const Vec3& ship_pt, const Vec3& node_pt, const AttitudeModel& att) {
    LinkStats ls;
    ls.dist = (ship_pt - node_pt).norm();
    ls.unit_to_ship = unit_between(node_pt, ship_pt);
    ls.mean_cos = ls.unit_to_ship.z;
    ls.theta_bar = std::acos(std::clamp(ls.mean_cos, -1.0, 1.0));
    const LinearCosine lc = linearize_cosine(ls.unit_to_ship, att.mean_yaw);
    ls.sigma_c2 = lc.variance(att);
    const double s2 = 1.0 - ls.mean_cos * ls.mean_cos;
    ls.sigma_angle2 = s2 > 1e-12 ? ls.sigma_c2 / s2 : 0.0;
    return ls;
}

/// Deterministic part of the ship->node gain excluding the random
/// cos^m1 irradiance: the node faces up, so its incidence cosine equals
/// the mean direction cosine.
inline double downlink_gain_scale(const ChannelParams& p, const LinkStats& ls) {
    const double m1 = p.lambertian_order();
    const double conc = concentrator_gain(p, ls.mean_cos);
    return (m1 + 1.0) * p.aperture_area / (2.0 * std::numbers::pi * ls.dist * ls.dist) *
           ls.mean_cos * p.tia_gain * conc * path_loss(p.attenuation_coeff, ls.dist);
}

/// Deterministic part of the node->ship gain excluding the random
/// incidence cosine. `fixed_irr` is the node-side irradiance cosine
/// (1 for the tracking uplink LED, the mean cosine for the reflector).
inline double uplink_gain_scale(const ChannelParams& p, const LinkStats& ls, double fixed_irr) {
    const double m1 = p.lambertian_order();
    const double s = std::sin(p.fov);
    const double conc = p.refractive_index * p.refractive_index / (s * s);
    return (m1 + 1.0) * p.aperture_area / (2.0 * std::numbers::pi * ls.dist * ls.dist) *
           std::pow(fixed_irr, m1) * p.tia_gain * conc * path_loss(p.attenuation_coeff, ls.dist);
}

}  // namespace oisac::detail
