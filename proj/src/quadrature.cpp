#include "oisac/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace oisac {

namespace {

constexpr double kPi = std::numbers::pi;

// orthonormal Hermite (physicists') at r: value of order n and of order n-1
void hermite_eval(int n, double r, double& pn, double& pn1) {
    const double pim4 = std::pow(kPi, -0.25);
    double p1 = 0.0, p2 = pim4;
    for (int j = 0; j < n; ++j) {
        const double p0 = p1;
        p1 = p2;
        p2 = p1 * r * std::sqrt(2.0 / (j + 1.0)) - p0 * std::sqrt(j / (j + 1.0));
    }
    pn = p2;
    pn1 = p1;
}

}  // namespace

QuadratureRule gauss_hermite(int n) {
    if (n < 1 || n > 200) throw std::invalid_argument("gauss_hermite: order out of range [1, 200]");
    QuadratureRule rule{QuadratureKind::hermite, std::vector<double>(n), std::vector<double>(n)};

    // positive roots from the outside in. Edge roots start from the Airy
    // expansion x_k ~ s + 2^(-1/3) s^(-1/3) a_k with s = sqrt(2n+1); the
    // bulk continues by linear extrapolation. Plain guesses drift onto a
    // neighboring basin near n ~ 200, the Airy form does not.
    static constexpr double kAiry[4] = {-2.33810741045977, -4.08794944413097,
                                        -5.52055982809555, -6.78670809007176};
    const double s = std::sqrt(2.0 * n + 1.0);
    double r = 0.0;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        if (i < 4 && i < (n + 1) / 2)
            r = s + std::pow(2.0, -1.0 / 3.0) * kAiry[i] * std::pow(s, -1.0 / 3.0);
        else
            r = 2.0 * r - rule.nodes[n - i + 1];

        double pn = 0.0, pn1 = 0.0;
        for (int it = 0; it < 200; ++it) {
            hermite_eval(n, r, pn, pn1);
            const double dp = std::sqrt(2.0 * n) * pn1;
            const double dr = pn / dp;
            r -= dr;
            if (std::abs(dr) < 1e-14 * (1.0 + std::abs(r))) break;
        }
        hermite_eval(n, r, pn, pn1);
        const double dp = std::sqrt(2.0 * n) * pn1;

        if (i > 0 && r >= rule.nodes[n - i])
            throw std::logic_error("gauss_hermite: node ordering lost");
        rule.nodes[n - 1 - i] = r;
        rule.weights[n - 1 - i] = 2.0 / (dp * dp);
        rule.nodes[i] = -r;
        rule.weights[i] = rule.weights[n - 1 - i];
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

QuadratureRule gauss_legendre(int n) {
    if (n < 1 || n > 500) throw std::invalid_argument("gauss_legendre: order out of range [1, 500]");
    QuadratureRule rule{QuadratureKind::legendre, std::vector<double>(n), std::vector<double>(n)};

    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p0 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * x * p2 - j * p0) / (j + 1.0);
            }
            dp = n * (x * p1 - p2) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15 * (1.0 + std::abs(x))) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = rule.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

}  // namespace oisac
