#include "oisac/energy_rate.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "oisac/channel.hpp"
#include "oisac/config.hpp"
#include "oisac/quadrature.hpp"
#include "link_util.hpp"

namespace oisac {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;
}

void EhParams::validate() const {
    if (!(fill_factor > 0.0)) throw std::invalid_argument("EhParams: fill_factor <= 0");
    if (!(thermal_voltage > 0.0)) throw std::invalid_argument("EhParams: thermal_voltage <= 0");
    if (!(pv_responsivity > 0.0)) throw std::invalid_argument("EhParams: pv_responsivity <= 0");
    if (!(dark_current > 0.0)) throw std::invalid_argument("EhParams: dark_current <= 0");
    if (!(pd_responsivity > 0.0)) throw std::invalid_argument("EhParams: pd_responsivity <= 0");
    if (!(noise_var > 0.0)) throw std::invalid_argument("EhParams: noise_var <= 0");
    if (!(frame_duration > 0.0)) throw std::invalid_argument("EhParams: frame_duration <= 0");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("EhParams: alpha outside (0, 1)");
    if (!(p_dl > 0.0)) throw std::invalid_argument("EhParams: p_dl <= 0");
}

double harvested_energy(const EhParams& p, double h_ae) {
    if (h_ae < 0.0) throw std::domain_error("harvested_energy: negative channel gain");
    const double received = p.pv_responsivity * h_ae * p.p_dl;
    return p.fill_factor * p.thermal_voltage * p.alpha * p.frame_duration * received *
           std::log1p(received / p.dark_current);
}

double uplink_power(const EhParams& p, double e_h) {
    if (p.alpha >= 1.0) throw std::invalid_argument("uplink_power: alpha = 1 leaves no uplink time");
    return e_h / ((1.0 - p.alpha) * p.frame_duration);
}

double instantaneous_rate(const EhParams& p, double h_ea, double p_ul) {
    if (h_ea < 0.0) throw std::domain_error("instantaneous_rate: negative channel gain");
    const double amp = p.pd_responsivity * h_ea * p_ul;
    return 0.5 * (1.0 - p.alpha) * std::log2(1.0 + kE / (2.0 * kPi) * amp * amp / p.noise_var);
}

RateEstimate monte_carlo_rate(const SystemConfig& cfg, long trials, std::uint64_t stream_domain,
                              Exec exec) {
    if (trials < 1) throw std::invalid_argument("monte_carlo_rate: trials < 1");
    cfg.validate();

    std::vector<double> rate(trials, 0.0);

    auto run_trial = [&](long t) {
        Rng rng = Rng::substream(cfg.seed, stream_domain, static_cast<std::uint64_t>(t));
        const Attitude att = sample_attitude(cfg.attitude, rng);
        const RotMat q = rotation_matrix(att);
        RotMat q_ul = q;
        if (cfg.independent_rate_attitude)
            q_ul = rotation_matrix(sample_attitude(cfg.attitude, rng));
        const double g_ae = deterministic_gain(cfg.chan_ap_eh, q, cfg.ap_position, cfg.eh_position,
                                               LinkRole::downlink);
        const double g_ea = deterministic_gain(cfg.chan_eh_ap, q_ul, cfg.eh_position,
                                               cfg.ap_position, LinkRole::uplink);
        const double h_t = sample_turbulence(cfg.turbulence, rng);
        const double e_h = harvested_energy(cfg.eh, g_ae * h_t);
        rate[t] = instantaneous_rate(cfg.eh, g_ea * h_t, uplink_power(cfg.eh, e_h));
    };

    if (exec == Exec::parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
        for (long t = 0; t < trials; ++t) run_trial(t);
#else
        exec = Exec::serial;
#endif
    }
    if (exec == Exec::serial)
        for (long t = 0; t < trials; ++t) run_trial(t);

    double sum = 0.0, sumsq = 0.0;
    for (long t = 0; t < trials; ++t) {
        sum += rate[t];
        sumsq += rate[t] * rate[t];
    }
    RateEstimate est;
    est.trials = trials;
    est.rate = sum / trials;
    if (trials > 1) {
        const double var = std::max(0.0, sumsq / trials - est.rate * est.rate);
        est.std_error = std::sqrt(var / trials);
    }
    return est;
}

double analytic_rate(const SystemConfig& cfg, std::array<int, 3> orders) {
    cfg.validate();
    if (orders[0] < 1 || orders[1] < 1 || orders[2] < 1)
        throw std::invalid_argument("analytic_rate: quadrature orders must be >= 1");
    if (cfg.attitude.mean_roll != 0.0 || cfg.attitude.mean_pitch != 0.0)
        throw std::domain_error("analytic_rate: linearization assumes zero mean roll/pitch");

    const auto down = detail::link_stats(cfg.ap_position, cfg.eh_position, cfg.attitude);
    const auto up = down;  // shared endpoints
    const double m1 = cfg.chan_ap_eh.lambertian_order();
    const double k_down = detail::downlink_gain_scale(cfg.chan_ap_eh, down);
    const double k_up = detail::uplink_gain_scale(cfg.chan_eh_ap, up, 1.0);
    const double cos_fov_up = std::cos(cfg.chan_eh_ap.fov);

    // angle nodes for one link: Legendre rule against the normalized
    // Gaussian angle density over (0, pi/2) clipped to +/- 8 sigma around
    // the mean angle, so narrow spreads stay resolved at fixed order; a
    // zero spread degenerates to the mean point
    struct AngleGrid {
        std::vector<double> cosv;
        std::vector<double> w;
    };
    auto make_grid = [](const detail::LinkStats& ls, int n) {
        AngleGrid g;
        if (ls.sigma_angle2 > 0.0) {
            const double sig = std::sqrt(ls.sigma_angle2);
            const double lo = std::max(0.0, ls.theta_bar - 8.0 * sig);
            const double hi = std::min(kPi / 2.0, ls.theta_bar + 8.0 * sig);
            const QuadratureRule gl = gauss_legendre(n);
            const double norm = 1.0 / std::sqrt(2.0 * kPi * ls.sigma_angle2);
            g.cosv.resize(n);
            g.w.resize(n);
            for (int k = 0; k < n; ++k) {
                const double theta = lo + 0.5 * (hi - lo) * (gl.nodes[k] + 1.0);
                const double dt = theta - ls.theta_bar;
                g.cosv[k] = std::cos(theta);
                g.w[k] = 0.5 * (hi - lo) * gl.weights[k] * norm *
                         std::exp(-dt * dt / (2.0 * ls.sigma_angle2));
            }
        } else {
            g.cosv = {ls.mean_cos};
            g.w = {1.0};
        }
        return g;
    };
    const AngleGrid gd = make_grid(down, orders[2]);
    const AngleGrid gu = make_grid(up, orders[1]);

    const QuadratureRule gh = gauss_hermite(orders[0]);
    const double mu_x = 2.0 * cfg.turbulence.mu_x;
    const double sig_x = 2.0 * std::sqrt(cfg.turbulence.sigma_x2);
    const double inv_sqrt_pi = 1.0 / std::sqrt(kPi);

    // cache the uplink-gain factors; the harvest leg varies fastest
    std::vector<double> g_ea(gu.cosv.size());
    for (size_t k = 0; k < gu.cosv.size(); ++k)
        g_ea[k] = gu.cosv[k] >= cos_fov_up ? k_up * gu.cosv[k] : 0.0;

    double total = 0.0;
    for (int i = 0; i < gh.order(); ++i) {
        const double h_t = std::exp(mu_x + std::sqrt(2.0) * sig_x * gh.nodes[i]);
        const double wi = gh.weights[i] * inv_sqrt_pi;
        for (size_t j = 0; j < gd.cosv.size(); ++j) {
            const double g_ae = gd.cosv[j] > 0.0 ? k_down * std::pow(gd.cosv[j], m1) : 0.0;
            const double p_ul = uplink_power(cfg.eh, harvested_energy(cfg.eh, g_ae * h_t));
            for (size_t k = 0; k < gu.cosv.size(); ++k) {
                const double r = instantaneous_rate(cfg.eh, g_ea[k] * h_t, p_ul);
                total += wi * gd.w[j] * gu.w[k] * r;
            }
        }
    }
    if (!std::isfinite(total))
        throw std::runtime_error("analytic_rate: non-finite quadrature intermediate");
    return total;
}

}  // namespace oisac
