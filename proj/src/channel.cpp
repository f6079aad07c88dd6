#include "oisac/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace oisac {

namespace {
constexpr double kPi = std::numbers::pi;
}

double ChannelParams::lambertian_order() const {
    return -std::numbers::ln2 / std::log(std::cos(half_power_angle));
}

void ChannelParams::validate() const {
    if (!(half_power_angle > 0.0 && half_power_angle < kPi / 2))
        throw std::invalid_argument("ChannelParams: half_power_angle outside (0, pi/2)");
    if (!(fov > 0.0 && fov <= kPi / 2))
        throw std::invalid_argument("ChannelParams: fov outside (0, pi/2]");
    if (!(aperture_area > 0.0)) throw std::invalid_argument("ChannelParams: aperture_area <= 0");
    if (attenuation_coeff < 0.0) throw std::invalid_argument("ChannelParams: attenuation_coeff < 0");
    if (!(tia_gain > 0.0)) throw std::invalid_argument("ChannelParams: tia_gain <= 0");
    if (!(refractive_index > 0.0)) throw std::invalid_argument("ChannelParams: refractive_index <= 0");
}

double TurbulenceParams::scintillation_index() const { return std::exp(4.0 * sigma_x2) - 1.0; }

void TurbulenceParams::validate() const {
    if (!(sigma_x2 > 0.0)) throw std::invalid_argument("TurbulenceParams: sigma_x2 <= 0");
}

double concentrator_gain(const ChannelParams& p, double cos_inc) {
    // incidence angle <= fov, boundary inclusive
    if (cos_inc < std::cos(p.fov)) return 0.0;
    const double s = std::sin(p.fov);
    return p.refractive_index * p.refractive_index / (s * s);
}

double geometric_loss(const ChannelParams& p, double cos_irr, double cos_inc, double d) {
    if (!(d > 0.0)) throw std::domain_error("geometric_loss: d <= 0");
    if (cos_irr <= 0.0) return 0.0;
    const double conc = concentrator_gain(p, cos_inc);
    if (conc == 0.0) return 0.0;
    const double m1 = p.lambertian_order();
    return (m1 + 1.0) * p.aperture_area / (2.0 * kPi * d * d) * std::pow(cos_irr, m1) * cos_inc *
           p.tia_gain * conc;
}

double path_loss(double c_lambda, double d) { return std::exp(-c_lambda * d); }

double deterministic_gain(const ChannelParams& p, const RotMat& q, const Vec3& tx, const Vec3& rx,
                          LinkRole role) {
    const double d = (rx - tx).norm();
    double cos_irr = 0.0, cos_inc = 0.0;
    switch (role) {
        case LinkRole::downlink:
            // ship LED at tx; seabed receiver at rx faces +z
            cos_irr = direction_cosine(q, tx, rx);
            cos_inc = unit_between(rx, tx).z;
            break;
        case LinkRole::uplink:
            // seabed LED at tx tracks the ship; ship PD at rx
            cos_irr = 1.0;
            cos_inc = direction_cosine(q, rx, tx);
            break;
        case LinkRole::reflection:
            // seabed end at tx re-radiates about +z; ship camera at rx
            cos_irr = unit_between(tx, rx).z;
            cos_inc = direction_cosine(q, rx, tx);
            break;
    }
    return geometric_loss(p, cos_irr, cos_inc, d) * path_loss(p.attenuation_coeff, d);
}

double sample_turbulence(const TurbulenceParams& t, Rng& rng) {
    t.validate();
    return std::exp(2.0 * rng.next_normal(t.mu_x, std::sqrt(t.sigma_x2)));
}

double reciprocal_turbulence_moment(const TurbulenceParams& t) {
    return std::exp(-2.0 * t.mu_x + 2.0 * t.sigma_x2);
}

double pdf_cos_theta(double x, double theta_bar, double sigma_eff2) {
    if (!(sigma_eff2 > 0.0)) throw std::domain_error("pdf_cos_theta: sigma_eff2 <= 0");
    if (x <= -1.0 || x >= 1.0) return 0.0;
    const double dtheta = std::acos(x) - theta_bar;
    return std::exp(-dtheta * dtheta / (2.0 * sigma_eff2)) /
           (std::sqrt(2.0 * kPi * sigma_eff2) * std::sqrt(1.0 - x * x));
}

double pdf_g_downlink(double g, double K, double m1, double theta_bar, double sigma_eff2) {
    if (g <= 0.0 || g >= K) return 0.0;
    const double c = std::pow(g / K, 1.0 / m1);  // recovered cos(theta)
    // change of variables g = K c^m1:  f_G(g) = f_cos(c) / (K m1 c^(m1-1))
    return pdf_cos_theta(c, theta_bar, sigma_eff2) / (K * m1 * std::pow(c, m1 - 1.0));
}

double pdf_g_uplink(double g, double K1, double theta_bar, double sigma_eff2) {
    if (g <= 0.0 || g >= K1) return 0.0;
    return pdf_cos_theta(g / K1, theta_bar, sigma_eff2) / K1;
}

}  // namespace oisac
