#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "oisac/channel.hpp"
#include "oisac/common.hpp"
#include "oisac/geometry.hpp"
#include "oisac/rng.hpp"

using namespace oisac;

namespace {

ChannelParams unit_lambertian() {
    ChannelParams p;
    p.half_power_angle = deg2rad(60.0);  // m1 = 1
    p.attenuation_coeff = 0.0;
    return p;
}

// composite Simpson on a dense fixed grid, used as the normalization
// oracle (the densities are narrow spikes, so the grid must be fine)
double integrate(const std::function<double(double)>& f, double a, double b, int n = 200000) {
    const double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

}  // namespace

TEST_CASE("lambertian order") {
    ChannelParams p;
    p.half_power_angle = deg2rad(60.0);
    CHECK(p.lambertian_order() == doctest::Approx(1.0).epsilon(1e-12));
    p.half_power_angle = deg2rad(25.0);
    CHECK(p.lambertian_order() == doctest::Approx(7.0459).epsilon(1e-4));
}

TEST_CASE("concentrator gain") {
    ChannelParams p;
    SUBCASE("value inside the field of view") {
        CHECK(concentrator_gain(p, 1.0) == doctest::Approx(1.33 * 1.33).epsilon(1e-12));
    }
    SUBCASE("boundary inclusive") {
        p.fov = deg2rad(60.0);
        CHECK(concentrator_gain(p, std::cos(p.fov)) > 0.0);
        CHECK(concentrator_gain(p, std::cos(p.fov) - 1e-9) == 0.0);
    }
}

TEST_CASE("geometric loss") {
    ChannelParams p = unit_lambertian();
    SUBCASE("direct evaluation") {
        const double expect = 2.0 * 1e-3 / (2 * std::numbers::pi * 100.0) * (1.33 * 1.33);
        CHECK(geometric_loss(p, 1.0, 1.0, 10.0) == doctest::Approx(expect).epsilon(1e-12));
        CHECK(geometric_loss(p, 1.0, 1.0, 10.0) == doctest::Approx(5.63e-6).epsilon(1e-3));
    }
    SUBCASE("boundary of the emission half-space") {
        CHECK(geometric_loss(p, 0.0, 1.0, 10.0) == 0.0);
        CHECK(geometric_loss(p, -0.3, 1.0, 10.0) == 0.0);
    }
    SUBCASE("outside the field of view") {
        p.fov = deg2rad(30.0);
        CHECK(geometric_loss(p, 1.0, std::cos(deg2rad(40.0)), 10.0) == 0.0);
    }
    SUBCASE("invalid distance") {
        CHECK_THROWS_AS(geometric_loss(p, 1.0, 1.0, 0.0), std::domain_error);
        CHECK_THROWS_AS(geometric_loss(p, 1.0, 1.0, -1.0), std::domain_error);
    }
}

TEST_CASE("path loss") {
    CHECK(path_loss(0.1, 0.0) == 1.0);
    CHECK(path_loss(0.1, 10.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK(path_loss(0.1, 20.0) < path_loss(0.1, 10.0));
}

TEST_CASE("deterministic gain") {
    ChannelParams p = unit_lambertian();
    p.attenuation_coeff = 0.1;
    const RotMat id = rotation_matrix({0, 0, 0});
    const Vec3 ap{0, 0, 10}, below{0, 0, 0};

    SUBCASE("composes geometric and path loss") {
        const double expect = geometric_loss(p, 1.0, 1.0, 10.0) * path_loss(0.1, 10.0);
        CHECK(deterministic_gain(p, id, ap, below, LinkRole::downlink) ==
              doctest::Approx(expect).epsilon(1e-12));
    }
    SUBCASE("pitch pi/2 blocks the link") {
        // cos(pi/2) rounds to ~6e-17, so the gain is zero up to rounding
        const RotMat q = rotation_matrix({0, std::numbers::pi / 2, 0});
        CHECK(deterministic_gain(p, q, ap, below, LinkRole::downlink) < 1e-18);
        const RotMat q2 = rotation_matrix({0, std::numbers::pi / 2 + 0.01, 0});
        CHECK(deterministic_gain(p, q2, ap, below, LinkRole::downlink) == 0.0);
    }
    SUBCASE("yaw symmetry for a target on the boresight axis") {
        Rng rng(2);
        const double ref = deterministic_gain(p, id, ap, below, LinkRole::downlink);
        for (int k = 0; k < 50; ++k) {
            const RotMat q = rotation_matrix({0, 0, rng.next_normal(0, 2)});
            CHECK(deterministic_gain(p, q, ap, below, LinkRole::downlink) ==
                  doctest::Approx(ref).epsilon(1e-12));
        }
    }
    SUBCASE("uplink role carries unit irradiance") {
        // with the ship level, the uplink gain differs from downlink by the
        // missing lambertian cos^m1 factor at the remote end
        const Vec3 node{2, 2, 0};
        const double c = 10.0 / std::sqrt(108.0);
        const double up = deterministic_gain(p, id, node, ap, LinkRole::uplink);
        const double down = deterministic_gain(p, id, ap, node, LinkRole::downlink);
        CHECK(down == doctest::Approx(up * c).epsilon(1e-12));
    }
    SUBCASE("reflection role keeps the seabed lobe") {
        const Vec3 node{2, 2, 0};
        const double refl = deterministic_gain(p, id, node, ap, LinkRole::reflection);
        const double down = deterministic_gain(p, id, ap, node, LinkRole::downlink);
        CHECK(refl == doctest::Approx(down).epsilon(1e-12));  // symmetric geometry, m1 both ends
    }
}

TEST_CASE("turbulence sampling") {
    TurbulenceParams t;  // mu_x = -0.1 = -sigma_x2, normalized
    Rng rng(99);
    const int n = 1000000;
    double sum = 0, sum_inv = 0;
    for (int i = 0; i < n; ++i) {
        const double h = sample_turbulence(t, rng);
        sum += h;
        sum_inv += 1.0 / h;
    }
    SUBCASE("normalized mean") { CHECK(sum / n == doctest::Approx(1.0).epsilon(0.01)); }
    SUBCASE("reciprocal moment") {
        CHECK(sum_inv / n == doctest::Approx(reciprocal_turbulence_moment(t)).epsilon(0.01));
    }
    SUBCASE("closed form") {
        TurbulenceParams u{-0.1, 0.1};
        CHECK(reciprocal_turbulence_moment(u) == doctest::Approx(std::exp(0.4)).epsilon(1e-12));
        TurbulenceParams v{0.0, 1e-12};
        CHECK(reciprocal_turbulence_moment(v) == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("degenerate limit") {
        TurbulenceParams w{-0.1, 1e-8};
        Rng r2(4);
        for (int i = 0; i < 1000; ++i)
            CHECK(sample_turbulence(w, r2) == doctest::Approx(std::exp(-0.2)).epsilon(1e-3));
    }
}

TEST_CASE("direction-cosine density") {
    const double theta_bar = std::acos(10.0 / std::sqrt(108.0));
    const double sig2 = 0.03 * 0.03;

    SUBCASE("normalizes to 1") {
        const double mass = integrate(
            [&](double x) { return pdf_cos_theta(x, theta_bar, sig2); }, -1 + 1e-9, 1 - 1e-9);
        CHECK(mass > 0.99);
        CHECK(mass < 1.01);
    }
    SUBCASE("peaks near cos(theta_bar)") {
        double best_x = 0, best = -1;
        for (double x = 0.90; x < 0.999; x += 1e-4) {
            const double v = pdf_cos_theta(x, theta_bar, sig2);
            if (v > best) {
                best = v;
                best_x = x;
            }
        }
        CHECK(best_x == doctest::Approx(std::cos(theta_bar)).epsilon(2e-3));
    }
    SUBCASE("zero outside the support") {
        CHECK(pdf_cos_theta(1.0, theta_bar, sig2) == 0.0);
        CHECK(pdf_cos_theta(-1.5, theta_bar, sig2) == 0.0);
    }
    SUBCASE("first-order symmetric about the peak for small spread") {
        // probe within a fraction of the density width sigma*sin(theta_bar)
        const double tight = 0.01 * 0.01;
        const double c0 = std::cos(theta_bar);
        for (double delta : {1e-4, 2e-4, 5e-4}) {
            const double up = pdf_cos_theta(c0 + delta, theta_bar, tight);
            const double dn = pdf_cos_theta(c0 - delta, theta_bar, tight);
            CHECK(up == doctest::Approx(dn).epsilon(0.05));
        }
    }
}

TEST_CASE("gain densities") {
    const double theta_bar = std::acos(10.0 / std::sqrt(108.0));
    const double sig2 = 0.05 * 0.05;
    const double K = 2.5e-6, m1 = 7.0;

    SUBCASE("downlink density normalizes") {
        const double mass = integrate(
            [&](double g) { return pdf_g_downlink(g, K, m1, theta_bar, sig2); }, K * 1e-12,
            K * (1 - 1e-12));
        CHECK(mass > 0.99);
        CHECK(mass < 1.01);
    }
    SUBCASE("uplink density normalizes") {
        const double mass = integrate(
            [&](double g) { return pdf_g_uplink(g, K, theta_bar, sig2); }, K * 1e-12,
            K * (1 - 1e-12));
        CHECK(mass > 0.99);
        CHECK(mass < 1.01);
    }
    SUBCASE("m1 = 1 reduces the downlink density to the uplink one") {
        for (double g : {0.3 * K, 0.6 * K, 0.9 * K})
            CHECK(pdf_g_downlink(g, K, 1.0, theta_bar, sig2) ==
                  doctest::Approx(pdf_g_uplink(g, K, theta_bar, sig2)).epsilon(1e-12));
    }
    SUBCASE("histogram of transformed angle samples matches the density") {
        Rng rng(17);
        const int n = 400000, bins = 40;
        std::vector<double> hist(bins, 0.0);
        const double lo = K * std::pow(std::cos(theta_bar + 4 * std::sqrt(sig2)), m1);
        const double hi = K * std::pow(std::cos(std::max(0.0, theta_bar - 4 * std::sqrt(sig2))), m1);
        int kept = 0;
        for (int i = 0; i < n; ++i) {
            const double theta = rng.next_normal(theta_bar, std::sqrt(sig2));
            const double g = K * std::pow(std::cos(theta), m1);
            if (g <= lo || g >= hi) continue;
            ++kept;
            hist[static_cast<int>((g - lo) / (hi - lo) * bins)] += 1.0;
        }
        const double width = (hi - lo) / bins;
        int checked = 0;
        for (int b = 0; b < bins; ++b) {
            const double center = lo + (b + 0.5) * width;
            const double expect = pdf_g_downlink(center, K, m1, theta_bar, sig2) * width * n;
            if (expect < 5000) continue;  // compare well-populated bins only
            ++checked;
            CHECK(hist[b] == doctest::Approx(expect).epsilon(0.1));
        }
        CHECK(checked > 5);
        CHECK(kept > n / 2);
    }
    SUBCASE("zero outside (0, K)") {
        CHECK(pdf_g_downlink(-0.1 * K, K, m1, theta_bar, sig2) == 0.0);
        CHECK(pdf_g_downlink(1.1 * K, K, m1, theta_bar, sig2) == 0.0);
        CHECK(pdf_g_uplink(0.0, K, theta_bar, sig2) == 0.0);
    }
}

TEST_CASE("parameter validation") {
    TurbulenceParams t{0.0, 0.0};
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);
    TurbulenceParams weak{-0.1, 0.1};
    CHECK(weak.scintillation_index() == doctest::Approx(std::exp(0.4) - 1.0));
    CHECK(weak.scintillation_index() < 1.0);
    ChannelParams p;
    p.aperture_area = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
