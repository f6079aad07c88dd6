// Throughput comparison of the serial reference against the OpenMP kernels.

#include <chrono>
#include <cstdio>

#include "oisac/config.hpp"
#include "oisac/energy_rate.hpp"
#include "oisac/sensing.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace oisac;

namespace {

template <typename F>
double time_ms(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

}  // namespace

int main() {
    SystemConfig cfg = SystemConfig::make_default();
    const long mse_trials = 200000;
    const long rate_trials = 200000;

#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP not available, parallel falls back to serial\n");
#endif

    double mse_serial = 0, mse_par = 0;
    const double t_mse_s = time_ms([&] { mse_serial = monte_carlo_mse(cfg, mse_trials, 0, Exec::serial).mse; });
    const double t_mse_p = time_ms([&] { mse_par = monte_carlo_mse(cfg, mse_trials, 0, Exec::parallel).mse; });
    std::printf("monte_carlo_mse  %ld trials: serial %8.1f ms, parallel %8.1f ms, speedup %.2fx\n",
                mse_trials, t_mse_s, t_mse_p, t_mse_s / t_mse_p);
    std::printf("  results identical: %s\n", mse_serial == mse_par ? "yes" : "NO");

    double rate_serial = 0, rate_par = 0;
    const double t_rate_s =
        time_ms([&] { rate_serial = monte_carlo_rate(cfg, rate_trials, 1, Exec::serial).rate; });
    const double t_rate_p =
        time_ms([&] { rate_par = monte_carlo_rate(cfg, rate_trials, 1, Exec::parallel).rate; });
    std::printf("monte_carlo_rate %ld trials: serial %8.1f ms, parallel %8.1f ms, speedup %.2fx\n",
                rate_trials, t_rate_s, t_rate_p, t_rate_s / t_rate_p);
    std::printf("  results identical: %s\n", rate_serial == rate_par ? "yes" : "NO");
    return 0;
}
