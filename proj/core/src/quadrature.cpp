#include "greenbound/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "greenbound/errors.hpp"

namespace greenbound {

GaussLegendreRule gauss_legendre(std::size_t n)
{
    if (n == 0) throw DomainError("Gauss-Legendre rule needs at least one node");
    if (n == 1) return {{0.0}, {2.0}};
    GaussLegendreRule rule{std::vector<double>(n), std::vector<double>(n)};
    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
        // Tricomi initial guess, then Newton on P_n.
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const double kk = static_cast<double>(k);
                const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
                p0 = p1;
                p1 = p2;
            }
            dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // Recompute the derivative at the converged node for the weight.
        double p0 = 1.0;
        double p1 = x;
        for (std::size_t k = 2; k <= n; ++k) {
            const double kk = static_cast<double>(k);
            const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
            p0 = p1;
            p1 = p2;
        }
        dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

void validate(const QuadSpec& spec)
{
    if (!(spec.truncation_radius > 0.0) || !std::isfinite(spec.truncation_radius))
        throw DomainError("truncation radius must be positive and finite");
    if (spec.panels == 0) throw DomainError("quadrature needs at least one panel");
    if (spec.nodes_per_panel < 8) throw DomainError("at least 8 nodes per panel are required");
}

}  // namespace greenbound
