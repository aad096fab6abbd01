#pragma once

#include <cstddef>
#include <vector>

namespace greenbound {

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point rule computed by Newton iteration on P_n; accurate to a few ulps.
GaussLegendreRule gauss_legendre(std::size_t n);

/// Composite Gauss-Legendre settings for integrals over the real line that
/// are truncated to |s| <= truncation_radius.
struct QuadSpec {
    double truncation_radius = 0.0;
    std::size_t panels = 0;           ///< panels per half-line
    std::size_t nodes_per_panel = 16; ///< at least 8
};

/// Throws DomainError when a spec field is out of range.
void validate(const QuadSpec& spec);

}  // namespace greenbound
