#include "greenbound/oracles.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <memory>
#include <numbers>

#include "greenbound/errors.hpp"
#include "greenbound/green.hpp"
#include "greenbound/schur.hpp"

namespace greenbound::oracles {

namespace {

struct FftwFree {
    void operator()(void* p) const { fftw_free(p); }
};
struct PlanDestroy {
    void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};
using PlanHandle = std::unique_ptr<fftw_plan_s, PlanDestroy>;

/// Samples of h^{*k}, k = 1..k_max, by circular trapezoid convolution on a
/// periodic grid; sample j sits at s = j*step for j < L/2 and (j-L)*step after.
std::vector<std::vector<double>> convolution_powers(unsigned k_max, double gamma_minus,
                                                    double gamma_plus, double step,
                                                    std::size_t points)
{
    const std::size_t bins = points / 2 + 1;
    std::unique_ptr<double, FftwFree> real(
        static_cast<double*>(fftw_malloc(sizeof(double) * points)));
    std::unique_ptr<fftw_complex, FftwFree> spec(
        static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * bins)));
    const int len = static_cast<int>(points);
    PlanHandle forward(fftw_plan_dft_r2c_1d(len, real.get(), spec.get(), FFTW_ESTIMATE));
    PlanHandle backward(fftw_plan_dft_c2r_1d(len, spec.get(), real.get(), FFTW_ESTIMATE));

    for (std::size_t j = 0; j < points; ++j) {
        const double s = j < points / 2 ? static_cast<double>(j) * step
                                        : (static_cast<double>(j) - static_cast<double>(points)) *
                                              step;
        real.get()[j] = s >= 0.0 ? std::exp(-gamma_minus * s) : std::exp(gamma_plus * s);
    }
    std::vector<std::vector<double>> out;
    out.emplace_back(real.get(), real.get() + points);

    fftw_execute(forward.get());
    const std::vector<std::complex<double>> base(
        reinterpret_cast<std::complex<double>*>(spec.get()),
        reinterpret_cast<std::complex<double>*>(spec.get()) + bins);
    std::vector<std::complex<double>> power = base;
    double scale = 1.0;
    for (unsigned k = 2; k <= k_max; ++k) {
        for (std::size_t b = 0; b < bins; ++b) power[b] *= base[b];
        scale *= step;
        std::copy(power.begin(), power.end(), reinterpret_cast<std::complex<double>*>(spec.get()));
        fftw_execute(backward.get());
        std::vector<double> samples(points);
        const double norm = scale / static_cast<double>(points);
        for (std::size_t j = 0; j < points; ++j) samples[j] = real.get()[j] * norm;
        out.push_back(std::move(samples));
    }
    return out;
}

std::size_t grid_index(double t, double step, std::size_t points)
{
    const double q = t / step;
    const double r = std::round(q);
    if (std::abs(q - r) > 1e-6) throw DomainError("t is not a node of the convolution grid");
    const auto half = static_cast<long long>(points / 2);
    const auto j = static_cast<long long>(r);
    if (j >= half || j < -half) throw DomainError("t lies outside the convolution period");
    return static_cast<std::size_t>(j >= 0 ? j : j + static_cast<long long>(points));
}

}  // namespace

ConvolutionGrid default_convolution_grid(unsigned k_max, double gamma_minus, double gamma_plus,
                                         double t_max)
{
    if (!(gamma_minus > 0.0) || !(gamma_plus > 0.0) || !std::isfinite(gamma_minus + gamma_plus))
        throw DomainError("gaps must be finite and positive");
    const double gamma = gamma_minus + gamma_plus;
    const double slow = std::min(gamma_minus, gamma_plus);
    ConvolutionGrid grid;
    grid.step = std::min(0.01, 0.1 / gamma);
    // Crude envelope of h^{*k} at distance r: (r + 2k/gamma)^{k-1}/(k-1)! e^{-slow r}.
    double half = t_max + std::log(1e14) / slow;
    auto tail = [&](double r) {
        double poly = 1.0;
        for (unsigned i = 1; i < k_max; ++i) poly *= (r + 2.0 * k_max / gamma) / i;
        return poly * std::exp(-slow * (r - t_max));
    };
    while (tail(half) > 1e-14) half *= 1.1;
    grid.points = std::bit_ceil(static_cast<std::size_t>(std::ceil(2.0 * half / grid.step)));
    return grid;
}

ConvolutionTable::ConvolutionTable(unsigned k_max, double gamma_minus, double gamma_plus,
                                   const ConvolutionGrid& grid)
    : k_max_(k_max), grid_(grid)
{
    if (k_max < 1) throw DomainError("convolution power must be at least 1");
    if (grid.points < 2 || !std::has_single_bit(grid.points))
        throw DomainError("convolution grid size must be a power of two");
    coarse_ = convolution_powers(k_max, gamma_minus, gamma_plus, grid.step, grid.points);
    fine_ = convolution_powers(k_max, gamma_minus, gamma_plus, 0.5 * grid.step, 2 * grid.points);
}

double ConvolutionTable::operator()(unsigned k, double t) const
{
    if (k < 1 || k > k_max_) throw DomainError("convolution power out of range");
    const double c = coarse_[k - 1][grid_index(t, grid_.step, grid_.points)];
    const double f = fine_[k - 1][grid_index(t, 0.5 * grid_.step, 2 * grid_.points)];
    // Trapezoid error expands in even powers of the step.
    return (4.0 * f - c) / 3.0;
}

double conv_power_numeric(unsigned k, double t, double gamma_minus, double gamma_plus)
{
    ConvolutionGrid grid = default_convolution_grid(k, gamma_minus, gamma_plus, std::abs(t));
    if (t != 0.0) {
        const double period = grid.step * static_cast<double>(grid.points);
        const double nodes = std::ceil(std::abs(t) / grid.step);
        grid.step = std::abs(t) / nodes;
        grid.points = std::bit_ceil(static_cast<std::size_t>(std::ceil(period / grid.step)));
    }
    return ConvolutionTable(k, gamma_minus, gamma_plus, grid)(k, t);
}

std::optional<ContourSpec> make_contour(std::span<const Complex> eigenvalues,
                                        HalfPlane half_plane, std::size_t nodes_per_edge)
{
    double gm = kInfinity;
    double gp = kInfinity;
    for (const auto& z : eigenvalues) {
        if (z.real() < 0.0)
            gm = std::min(gm, -z.real());
        else
            gp = std::min(gp, z.real());
    }
    const bool left = half_plane == HalfPlane::left;
    const double own = left ? gm : gp;
    const double other = left ? gp : gm;
    if (std::isinf(own)) return std::nullopt;

    const double gamma = std::isinf(other) ? own : own + other;
    const double pad = std::max(0.5 * gamma, 0.5);
    // Work in the reflected frame for the right half-plane, mirror at the end.
    double re_lo = kInfinity;
    double im_lo = kInfinity;
    double im_hi = -kInfinity;
    for (const auto& z : eigenvalues) {
        const double re = left ? z.real() : -z.real();
        if (re >= 0.0) continue;
        re_lo = std::min(re_lo, re);
        im_lo = std::min(im_lo, z.imag());
        im_hi = std::max(im_hi, z.imag());
    }
    const double edge = std::isinf(other) ? -own + pad : 0.5 * (other - own);

    ContourSpec spec;
    spec.half_plane = half_plane;
    spec.nodes_per_edge = nodes_per_edge;
    spec.im_min = im_lo - pad;
    spec.im_max = im_hi + pad;
    if (left) {
        spec.re_min = re_lo - pad;
        spec.re_max = edge;
    } else {
        spec.re_min = -edge;
        spec.re_max = -(re_lo - pad);
    }
    return spec;
}

ComplexMatrix green_contour(const ComplexMatrix& a, double t, const ContourSpec& spec,
                            std::span<const Complex> eigenvalues)
{
    if (t == 0.0) throw UndefinedAtZero("Green's function is undefined at t = 0");
    const std::size_t n = a.size();
    ComplexMatrix sum(n);
    // g_t vanishes on the half-plane that does not match the sign of t.
    if ((t > 0.0) != (spec.half_plane == HalfPlane::left)) return sum;

    const double sign = t > 0.0 ? 1.0 : -1.0;
    const auto rule = gauss_legendre(16);
    const std::size_t panels = std::max<std::size_t>(1, (spec.nodes_per_edge + 15) / 16);
    const Complex corners[5] = {{spec.re_min, spec.im_min},
                                {spec.re_max, spec.im_min},
                                {spec.re_max, spec.im_max},
                                {spec.re_min, spec.im_max},
                                {spec.re_min, spec.im_min}};
    const ComplexMatrix id = ComplexMatrix::identity(n);
    for (int e = 0; e < 4; ++e) {
        const Complex z0 = corners[e];
        const Complex dz = (corners[e + 1] - z0) / static_cast<double>(panels);
        for (std::size_t p = 0; p < panels; ++p) {
            const Complex p0 = z0 + static_cast<double>(p) * dz;
            for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
                const Complex lambda = p0 + 0.5 * (1.0 + rule.nodes[q]) * dz;
                for (const auto& ev : eigenvalues) {
                    if (std::abs(lambda - ev) < 1e-10)
                        throw SingularResolvent("contour node within 1e-10 of an eigenvalue");
                }
                const ComplexMatrix resolvent = LuFactorization(lambda * id - a).inverse();
                const Complex weight = sign * std::exp(lambda * t) * 0.5 * rule.weights[q] * dz;
                sum += weight * resolvent;
            }
        }
    }
    return (1.0 / Complex(0.0, 2.0 * std::numbers::pi)) * sum;
}

ComplexMatrix green_contour(const ComplexMatrix& a, double t, std::size_t nodes_per_edge)
{
    if (t == 0.0) throw UndefinedAtZero("Green's function is undefined at t = 0");
    const auto eig = schur_decompose(a).t.diagonal_entries();
    const auto spec = make_contour(eig, t > 0.0 ? HalfPlane::left : HalfPlane::right, nodes_per_edge);
    if (!spec) return ComplexMatrix(a.size());
    return green_contour(a, t, *spec, eig);
}

double perturbation_residual(const ComplexMatrix& a, const ComplexMatrix& b, double t,
                             const QuadSpec& quad)
{
    validate(quad);
    if (t == 0.0) throw UndefinedAtZero("Green's function is undefined at t = 0");
    const GreenKernel ga(a);
    const GreenKernel gb(b);
    const ComplexMatrix diff = a - b;
    const auto rule = gauss_legendre(quad.nodes_per_panel);
    const double width = quad.truncation_radius / static_cast<double>(quad.panels);

    ComplexMatrix integral(a.size());
    auto integrate = [&](double lo, double hi, std::size_t panels) {
        const double w = (hi - lo) / static_cast<double>(panels);
        for (std::size_t p = 0; p < panels; ++p) {
            const double p0 = lo + static_cast<double>(p) * w;
            for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
                const double s = p0 + 0.5 * w * (1.0 + rule.nodes[q]);
                integral += (0.5 * w * rule.weights[q]) * (ga(s) * diff * gb(t - s));
            }
        }
    };
    const double lo = std::min(0.0, t);
    const double hi = std::max(0.0, t);
    integrate(lo - quad.truncation_radius, lo, quad.panels);
    integrate(lo, hi,
              std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((hi - lo) / width))));
    integrate(hi, hi + quad.truncation_radius, quad.panels);

    return induced_norm(ga(t) - gb(t) - integral, NormKind::infinity);
}

double perturbation_residual(const ComplexMatrix& a, const ComplexMatrix& b, double t)
{
    const auto gap_a = spectral_gaps_of(a);
    const auto gap_b = spectral_gaps_of(b);
    SpectralGaps merged;
    merged.gamma_minus = std::min(gap_a.gamma_minus, gap_b.gamma_minus);
    merged.gamma_plus = std::min(gap_a.gamma_plus, gap_b.gamma_plus);
    return perturbation_residual(a, b, t, default_quad_spec(merged));
}

}  // namespace greenbound::oracles
