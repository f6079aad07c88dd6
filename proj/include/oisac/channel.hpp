#pragma once

#include "oisac/geometry.hpp"
#include "oisac/rng.hpp"

namespace oisac {

/// Constants of one optical LoS link (Lambertian source, concentrator,
/// seawater attenuation). Angles in radians.
struct ChannelParams {
    double half_power_angle = 0.436332312998582394;  // 25 deg
    double aperture_area = 1e-3;                     // m^2
    double tia_gain = 1.0;
    double refractive_index = 1.33;
    double fov = 1.5707963267948966;                 // rad
    double attenuation_coeff = 0.1;                  // 1/m

    /// m1 = -ln 2 / ln cos(half_power_angle), > 0.
    double lambertian_order() const;
    void validate() const;
};

/// Log-normal fading h_t = exp(2X), X ~ N(mu_x, sigma_x2).
struct TurbulenceParams {
    double mu_x = -0.1;
    double sigma_x2 = 0.1;

    /// exp(4 sigma_x2) - 1; weak-turbulence models expect < 1.
    double scintillation_index() const;
    void validate() const;
};

/// rho^2 / sin^2(FoV) for incidence inside the field of view (boundary
/// inclusive), 0 otherwise.
double concentrator_gain(const ChannelParams& p, double cos_inc);

/// LoS geometric loss: (m1+1) A_p / (2 pi d^2) * cos_irr^m1 * cos_inc *
/// T * concentrator. Zero when the receiver sits behind the source
/// half-space or outside the FoV.
double geometric_loss(const ChannelParams& p, double cos_irr, double cos_inc, double d);

/// Beer's-law attenuation exp(-c_lambda d).
double path_loss(double c_lambda, double d);

/// Which end of the link rides on the ship, and how the seabed end points:
///   downlink   - ship transmits; seabed receiver faces straight up.
///   uplink     - seabed LED tracks the ship (irradiance cosine 1); the
///                ship photodiode's incidence follows the attitude.
///   reflection - seabed end re-radiates about its up normal with the
///                Lambertian order; ship-mounted camera receives.
enum class LinkRole { downlink, uplink, reflection };

/// Deterministic gain G_d = h_g * h_p for the link geometry under
/// attitude `q`. `tx`/`rx` are world positions.
double deterministic_gain(const ChannelParams& p, const RotMat& q, const Vec3& tx, const Vec3& rx,
                          LinkRole role);

double sample_turbulence(const TurbulenceParams& t, Rng& rng);

/// E{1/h_t} = exp(-2 mu_x + 2 sigma_x2).
double reciprocal_turbulence_moment(const TurbulenceParams& t);

/// Sine-weighted Gaussian density of the direction cosine: the cosine of
/// an angle that is Gaussian about theta_bar with variance sigma_eff2.
/// Zero outside (-1, 1); the 1/sqrt(1-x^2) factor diverges at the
/// endpoints, so integration must stay strictly inside.
double pdf_cos_theta(double x, double theta_bar, double sigma_eff2);

/// Density of the downlink gain G = K * cos(theta)^m1 under the model
/// above. Zero outside (0, K).
double pdf_g_downlink(double g, double K, double m1, double theta_bar, double sigma_eff2);

/// Density of the uplink gain G = K1 * cos(theta); the m1 = 1 special case.
double pdf_g_uplink(double g, double K1, double theta_bar, double sigma_eff2);

}  // namespace oisac
