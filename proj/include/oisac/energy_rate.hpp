#pragma once

#include <array>
#include <cstdint>

#include "oisac/common.hpp"

namespace oisac {

struct SystemConfig;

/// Harvest-use frame constants: fraction alpha of each frame harvests
/// (and senses), the remainder transmits uplink.
struct EhParams {
    double fill_factor = 0.9;
    double thermal_voltage = 0.025;   // V
    double pv_responsivity = 0.9;     // A/W
    double dark_current = 1e-9;       // A
    double pd_responsivity = 0.5;     // A/W
    double noise_var = 1e-14;         // A^2, receiver AWGN
    double frame_duration = 1.0;      // s
    double alpha = 0.5;
    double p_dl = 8e4;                // W

    void validate() const;
};

/// E_h = f v_t alpha T r_PV h P ln(1 + r_PV h P / I0), joules.
double harvested_energy(const EhParams& p, double h_ae);

/// P_UL = E_h / ((1 - alpha) T). Throws on alpha == 1.
double uplink_power(const EhParams& p, double e_h);

/// ((1-alpha)/2) log2(1 + (e/2pi) (r h P_UL)^2 / sigma_n^2), bits/s/Hz.
double instantaneous_rate(const EhParams& p, double h_ea, double p_ul);

struct RateEstimate {
    double rate = 0.0;       // bits/s/Hz
    double std_error = 0.0;
    long trials = 0;
};

/// Monte Carlo average uplink rate: exact per-trial geometry, one shared
/// turbulence draw through the harvest and uplink stages. Same substream
/// contract as monte_carlo_mse.
RateEstimate monte_carlo_rate(const SystemConfig& cfg, long trials, std::uint64_t stream_domain = 0,
                              Exec exec = Exec::parallel);

/// Quadrature approximation of the average rate: Gauss-Hermite over the
/// log-fading, Gauss-Legendre over the two attitude-perturbed gain angles,
/// exact rate composition at the nodes. Deterministic. With zero attitude
/// variance the gain densities degenerate and only the fading integral
/// remains.
double analytic_rate(const SystemConfig& cfg, std::array<int, 3> orders);

}  // namespace oisac
