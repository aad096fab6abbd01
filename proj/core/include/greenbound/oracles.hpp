#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "greenbound/matrix.hpp"
#include "greenbound/quadrature.hpp"

/// Brute-force reference computations. Nothing here calls into the closed
/// forms it is meant to check.
namespace greenbound::oracles {

/// Uniform periodic grid for FFT convolutions: `points` samples (a power of
/// two) with spacing `step`, centred on zero. The period must exceed the
/// support where the convolution powers are non-negligible.
struct ConvolutionGrid {
    double step = 0.01;
    std::size_t points = 0;
};

/// Grid for k-fold convolutions evaluated for |t| <= t_max: step
/// min(0.01, 0.1/gamma) and a period long enough that the envelope tail of
/// h^{*k} beyond it is below 1e-14.
ConvolutionGrid default_convolution_grid(unsigned k_max, double gamma_minus, double gamma_plus,
                                         double t_max);

/// Samples of h^{*k}, k = 1..k_max, on a convolution grid, obtained by
/// trapezoid-rule convolution (FFT-accelerated) at step and step/2 and
/// combined by one Richardson extrapolation.
class ConvolutionTable {
public:
    ConvolutionTable(unsigned k_max, double gamma_minus, double gamma_plus,
                     const ConvolutionGrid& grid);

    unsigned k_max() const noexcept { return k_max_; }
    double step() const noexcept { return grid_.step; }
    /// h^{*k}(t); t must be an integer multiple of step() within the period.
    double operator()(unsigned k, double t) const;

private:
    unsigned k_max_;
    ConvolutionGrid grid_;
    std::vector<std::vector<double>> coarse_;
    std::vector<std::vector<double>> fine_;
};

/// Single value h^{*k}(t); the grid is aligned so that t is a node.
double conv_power_numeric(unsigned k, double t, double gamma_minus, double gamma_plus);

enum class HalfPlane { left, right };

/// Axis-parallel rectangle enclosing exactly one half of the spectrum,
/// integrated counterclockwise by composite Gauss-Legendre on each edge.
struct ContourSpec {
    HalfPlane half_plane = HalfPlane::left;
    double re_min = 0.0;
    double re_max = 0.0;
    double im_min = 0.0;
    double im_max = 0.0;
    std::size_t nodes_per_edge = 800;
};

/// Rectangle around the eigenvalues in the requested half-plane. The edge
/// facing the other half sits at the middle of the spectrum-free strip; the
/// remaining edges keep a margin of max(gamma/2, 1/2). Returns nullopt when
/// that half of the spectrum is empty.
std::optional<ContourSpec> make_contour(std::span<const Complex> eigenvalues, HalfPlane half_plane,
                                      std::size_t nodes_per_edge);

/// (1/2 pi i) \oint g_t(lambda) (lambda I - A)^{-1} d lambda with
/// g_t = e^{lambda t} on the left rectangle for t > 0 and -e^{lambda t} on the
/// right rectangle for t < 0. Throws SingularResolvent when a node comes within
/// 1e-10 of an eigenvalue.
ComplexMatrix green_contour(const ComplexMatrix& a, double t, const ContourSpec& spec,
                            std::span<const Complex> eigenvalues);
ComplexMatrix green_contour(const ComplexMatrix& a, double t, std::size_t nodes_per_edge = 800);

/// ||G(A,t) - G(B,t) - int G(A,s) (A-B) G(B,t-s) ds||_inf, quadrature panels
/// split at s = 0 and s = t where the integrand jumps.
double perturbation_residual(const ComplexMatrix& a, const ComplexMatrix& b, double t,
                             const QuadSpec& quad);
double perturbation_residual(const ComplexMatrix& a, const ComplexMatrix& b, double t);

}  // namespace greenbound::oracles
