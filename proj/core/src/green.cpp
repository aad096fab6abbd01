#include "greenbound/green.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <string>

#include "greenbound/errors.hpp"
#include "greenbound/schur.hpp"

namespace greenbound {

SpectralGaps spectral_gaps(const ComplexMatrix& t)
{
    if (!is_upper_triangular(t, triangular_tolerance(t)))
        throw NotTriangular("spectral_gaps expects an upper-triangular matrix");
    const double tol = kAxisTolerance * induced_norm(t, NormKind::infinity);
    SpectralGaps g;
    g.alpha = -kInfinity;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double re = t(i, i).real();
        if (std::abs(re) <= tol) {
            std::ostringstream msg;
            msg << "eigenvalue " << t(i, i)
                << " lies on the imaginary axis; the bounded-solutions problem is ill-posed";
            throw SpectrumOnAxis(msg.str());
        }
        g.alpha = std::max(g.alpha, re);
        if (re < 0.0) {
            ++g.m;
            g.gamma_minus = std::min(g.gamma_minus, -re);
        } else {
            ++g.l;
            g.gamma_plus = std::min(g.gamma_plus, re);
        }
    }
    return g;
}

SpectralGaps spectral_gaps_of(const ComplexMatrix& a)
{
    if (is_upper_triangular(a, triangular_tolerance(a))) return spectral_gaps(a);
    return spectral_gaps(schur_decompose(a).t);
}

ComplexMatrix matrix_sign(const ComplexMatrix& a)
{
    const std::size_t n = a.size();
    const double dn = static_cast<double>(n);
    ComplexMatrix s = a;
    bool scaling = true;
    double prev_diff = kInfinity;
    for (int it = 0; it < 100; ++it) {
        const LuFactorization lu(s);
        if (lu.singular()) throw SingularIteration("sign iteration met a singular iterate");
        double mu = 1.0;
        if (scaling) mu = std::exp(-lu.log_abs_determinant() / dn);
        const ComplexMatrix inv = lu.inverse();
        ComplexMatrix next = 0.5 * (mu * s + (1.0 / mu) * inv);
        const double diff = induced_norm(next - s, NormKind::infinity);
        const double rel = diff / induced_norm(next, NormKind::infinity);
        s = std::move(next);
        if (rel <= 1e-13) return s;
        if (rel < 1e-2) scaling = false;
        // Quadratic convergence has ended at the rounding floor set by the
        // conditioning of the iterate.
        if (rel <= 1e-8 && diff > 0.5 * prev_diff) return s;
        prev_diff = diff;
    }
    throw ConvergenceFailure("matrix sign iteration did not converge in 100 steps");
}

SpectralProjectors spectral_projectors(const ComplexMatrix& a, const SpectralGaps& gaps)
{
    const std::size_t n = a.size();
    const ComplexMatrix id = ComplexMatrix::identity(n);
    if (gaps.l == 0) return {id, ComplexMatrix(n)};
    if (gaps.m == 0) return {ComplexMatrix(n), id};

    const ComplexMatrix sign = matrix_sign(a);
    SpectralProjectors p{0.5 * (id - sign), 0.5 * (id + sign)};

    const double pn = std::max(1.0, induced_norm(p.minus, NormKind::infinity));
    const double an = induced_norm(a, NormKind::infinity);
    const double idem = induced_norm(p.minus * p.minus - p.minus, NormKind::infinity);
    const double comm = induced_norm(p.minus * a - a * p.minus, NormKind::infinity);
    if (idem > 1e-9 * pn * pn || comm > 1e-9 * an * pn) {
        throw ConvergenceFailure("spectral projectors failed verification (idempotency residual " +
                                 std::to_string(idem) + ", commutator residual " +
                                 std::to_string(comm) + ")");
    }
    return p;
}

ComplexMatrix matrix_exp(const ComplexMatrix& a)
{
    static constexpr std::array<double, 14> b = {
        64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
        1187353796428800.0,  129060195264000.0,   10559470521600.0,
        670442572800.0,      33522128640.0,       1323241920.0,
        40840800.0,          960960.0,            16380.0,
        182.0,               1.0};

    const std::size_t n = a.size();
    const double norm = induced_norm(a, NormKind::infinity);
    int s = 0;
    if (norm > 0.0) s = std::max(0, static_cast<int>(std::ceil(std::log2(norm))) + 1);
    const ComplexMatrix x = std::ldexp(1.0, -s) * a;

    const ComplexMatrix id = ComplexMatrix::identity(n);
    const ComplexMatrix x2 = x * x;
    const ComplexMatrix x4 = x2 * x2;
    const ComplexMatrix x6 = x4 * x2;
    const ComplexMatrix u =
        x * (x6 * (b[13] * x6 + b[11] * x4 + b[9] * x2) + b[7] * x6 + b[5] * x4 + b[3] * x2 +
             b[1] * id);
    const ComplexMatrix v =
        x6 * (b[12] * x6 + b[10] * x4 + b[8] * x2) + b[6] * x6 + b[4] * x4 + b[2] * x2 + b[0] * id;

    ComplexMatrix r = LuFactorization(v - u).solve(v + u);
    for (int i = 0; i < s; ++i) r = r * r;
    return r;
}

GreenKernel::GreenKernel(const ComplexMatrix& a)
    : a_(a),
      split_{spectral_gaps_of(a), {ComplexMatrix(a.size()), ComplexMatrix(a.size())}},
      gen_minus_(a.size()),
      gen_plus_(a.size())
{
    split_.projectors = spectral_projectors(a_, split_.gaps);
    gen_minus_ = a_ * split_.projectors.minus;
    gen_plus_ = a_ * split_.projectors.plus;
}

ComplexMatrix GreenKernel::operator()(double t) const
{
    if (t == 0.0) throw UndefinedAtZero("Green's function is undefined at t = 0");
    if (t > 0.0) {
        if (split_.gaps.m == 0) return ComplexMatrix(a_.size());
        return matrix_exp(t * gen_minus_) * split_.projectors.minus;
    }
    if (split_.gaps.l == 0) return ComplexMatrix(a_.size());
    return -(matrix_exp(t * gen_plus_) * split_.projectors.plus);
}

ComplexMatrix green_function(const ComplexMatrix& a, double t)
{
    if (t == 0.0) throw UndefinedAtZero("Green's function is undefined at t = 0");
    return GreenKernel(a)(t);
}

QuadSpec default_quad_spec(const SpectralGaps& gaps)
{
    const double slow = std::min(gaps.gamma_minus, gaps.gamma_plus);
    const double gamma = std::isfinite(gaps.gamma()) ? gaps.gamma()
                                                     : std::max(gaps.gamma_minus == kInfinity
                                                                    ? 0.0
                                                                    : gaps.gamma_minus,
                                                                gaps.gamma_plus == kInfinity
                                                                    ? 0.0
                                                                    : gaps.gamma_plus);
    QuadSpec q;
    q.truncation_radius = 2.0 * std::log(1e12) / slow;
    const double width = std::min(1.0, 1.0 / gamma);
    q.panels = static_cast<std::size_t>(std::ceil(q.truncation_radius / width));
    q.nodes_per_panel = 16;
    return q;
}

std::vector<Complex> bounded_solution(const GreenKernel& kernel, const Forcing& f, double t,
                                      const QuadSpec& quad)
{
    validate(quad);
    const std::size_t n = kernel.size();
    const auto rule = gauss_legendre(quad.nodes_per_panel);
    const double width = quad.truncation_radius / static_cast<double>(quad.panels);
    const auto& gaps = kernel.split().gaps;

    std::vector<Complex> x(n);
    for (const double side : {1.0, -1.0}) {
        if ((side > 0.0 && gaps.m == 0) || (side < 0.0 && gaps.l == 0)) continue;
        for (std::size_t p = 0; p < quad.panels; ++p) {
            const double lo = static_cast<double>(p) * width;
            for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
                const double u = lo + 0.5 * width * (1.0 + rule.nodes[q]);
                const double s = side * u;
                const double w = 0.5 * width * rule.weights[q];
                const auto fv = f(t - s);
                if (fv.size() != n) throw DimensionMismatch("forcing has the wrong length");
                const auto gf = kernel(s) * std::span<const Complex>(fv);
                for (std::size_t i = 0; i < n; ++i) x[i] += w * gf[i];
            }
        }
    }
    return x;
}

std::vector<Complex> bounded_solution(const ComplexMatrix& a, const Forcing& f, double t)
{
    const GreenKernel kernel(a);
    return bounded_solution(kernel, f, t, default_quad_spec(kernel.split().gaps));
}

double bounded_solution_residual(const GreenKernel& kernel, const Forcing& f, double t,
                                 const QuadSpec& quad, double h)
{
    const auto xp = bounded_solution(kernel, f, t + h, quad);
    const auto xm = bounded_solution(kernel, f, t - h, quad);
    const auto x0 = bounded_solution(kernel, f, t, quad);
    const auto ax = kernel.matrix() * std::span<const Complex>(x0);
    const auto fv = f(t);
    double worst = 0.0;
    for (std::size_t i = 0; i < x0.size(); ++i) {
        const Complex deriv = (xp[i] - xm[i]) / (2.0 * h);
        worst = std::max(worst, std::abs(deriv - ax[i] - fv[i]));
    }
    return worst;
}

}  // namespace greenbound
