#include "greenbound/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>

#include "greenbound/errors.hpp"

namespace greenbound {

namespace {

void require_finite_gaps(double gamma_minus, double gamma_plus)
{
    if (!(gamma_minus > 0.0) || !(gamma_plus > 0.0) || !std::isfinite(gamma_minus) ||
        !std::isfinite(gamma_plus))
        throw DomainError("gaps must be finite and positive");
}

double factorial(unsigned k)
{
    double f = 1.0;
    for (unsigned i = 2; i <= k; ++i) f *= i;
    return f;
}

/// sum_{k<n} x^k / k!
double truncated_exp_series(double x, std::size_t n)
{
    double term = 1.0;
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        sum += term;
        term *= x / static_cast<double>(k + 1);
    }
    return sum;
}

}  // namespace

double h_eval(double t, double gamma_minus, double gamma_plus)
{
    return t >= 0.0 ? std::exp(-gamma_minus * t) : std::exp(gamma_plus * t);
}

double bessel_k_half(unsigned m, double x)
{
    if (!(x > 0.0)) throw DomainError("bessel_k_half needs x > 0");
    // Terms a_j = (m+j)! / (j! (m-j)! (2x)^j) with a_0 = 1.
    double term = 1.0;
    double sum = 1.0;
    for (unsigned j = 1; j <= m; ++j) {
        term *= static_cast<double>(m + j) * static_cast<double>(m - j + 1) /
                (static_cast<double>(j) * 2.0 * x);
        sum += term;
    }
    return std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x) * sum;
}

double conv_polynomial(unsigned k, double s, double gamma)
{
    // Horner in s over coefficients c_j = (k+j)! / (k! j! (k-j)! gamma^j),
    // c_0 = 1/k!, c_j / c_{j-1} = (k+j)(k-j+1) / (j gamma).
    double c = 1.0 / factorial(k);
    double p = c;
    for (unsigned j = 1; j <= k; ++j) {
        c *= static_cast<double>(k + j) * static_cast<double>(k - j + 1) /
             (static_cast<double>(j) * gamma);
        p = p * s + c;
    }
    return p;
}

double conv_power_closed(unsigned k, double t, double gamma_minus, double gamma_plus,
                         ConvPath path)
{
    if (k < 1) throw DomainError("convolution power must be at least 1");
    require_finite_gaps(gamma_minus, gamma_plus);
    const double gamma = gamma_minus + gamma_plus;
    const double h = h_eval(t, gamma_minus, gamma_plus);
    const double s = std::abs(t);
    if (path == ConvPath::polynomial) return h * conv_polynomial(k - 1, s, gamma);

    const double x = 0.5 * gamma * s;
    return h * std::pow(s, k - 1) * std::sqrt(gamma * s) * std::exp(x) * bessel_k_half(k - 1, x) /
           (std::sqrt(std::numbers::pi) * factorial(k - 1));
}

std::vector<double> bound_weights(std::size_t n, double t, double gamma_minus, double gamma_plus)
{
    if (t == 0.0) throw UndefinedAtZero("bounds are undefined at t = 0");
    if (n == 0) throw DomainError("dimension must be positive");
    if (std::isinf(gamma_minus) && std::isinf(gamma_plus))
        throw DomainError("at least one gap must be finite");
    std::vector<double> w(n, 0.0);
    const double own = t > 0.0 ? gamma_minus : gamma_plus;
    const double other = t > 0.0 ? gamma_plus : gamma_minus;
    if (std::isinf(own)) return w;
    if (std::isinf(other)) {
        const double s = std::abs(t);
        double term = std::exp(-own * s);
        for (std::size_t k = 0; k < n; ++k) {
            w[k] = term;
            term *= s / static_cast<double>(k + 1);
        }
        return w;
    }
    for (std::size_t k = 0; k < n; ++k)
        w[k] = conv_power_closed(static_cast<unsigned>(k + 1), t, gamma_minus, gamma_plus);
    return w;
}

double triangular_bound(const BoundParams& params, double t)
{
    if (params.norm_n < 0.0) throw DomainError("||N|| must be nonnegative");
    const auto w = bound_weights(params.n, t, params.gamma_minus, params.gamma_plus);
    double sum = 0.0;
    double power = 1.0;
    for (double wk : w) {
        sum += power * wk;
        power *= params.norm_n;
    }
    return sum;
}

ComplexMatrix entrywise_bound(const ComplexMatrix& d, const ComplexMatrix& n, double gamma_minus,
                              double gamma_plus, double t)
{
    if (d.size() != n.size()) throw DimensionMismatch("D and N differ in size");
    const double atol = 1e-13 * induced_norm(n, NormKind::infinity);
    if (!is_strictly_upper_triangular(n, atol))
        throw NotStrictlyTriangular("entrywise bound needs a strictly upper triangular N");
    const std::size_t dim = n.size();
    const auto w = bound_weights(dim, t, gamma_minus, gamma_plus);
    const ComplexMatrix nabs = entrywise_abs(n);

    ComplexMatrix result(dim);
    ComplexMatrix power = ComplexMatrix::identity(dim);
    for (std::size_t k = 0; k < dim; ++k) {
        result += w[k] * power;
        power = power * nabs;
    }
    // Entries of |N|^k are real; drop imaginary rounding.
    for (auto& z : result.entries()) z = z.real();
    return result;
}

double van_loan_bound(double alpha, double norm_n, std::size_t n, double t)
{
    if (t < 0.0) throw DomainError("Van Loan bound needs t >= 0");
    if (norm_n < 0.0) throw DomainError("||N|| must be nonnegative");
    return std::exp(alpha * t) * truncated_exp_series(norm_n * t, n);
}

double binomial(unsigned n, unsigned k)
{
    if (k > n) return 0.0;
    k = std::min(k, n - k);
    std::uint64_t c = 1;
    for (unsigned i = 1; i <= k; ++i) {
        const std::uint64_t num = n - k + i;
        // c * num is divisible by i; guard against overflow before multiplying.
        if (c > UINT64_MAX / num) {
            double r = static_cast<double>(c);
            for (unsigned j = i; j <= k; ++j)
                r = r * static_cast<double>(n - k + j) / static_cast<double>(j);
            return r;
        }
        c = c * num / i;
    }
    return static_cast<double>(c);
}

double qtds18_bound(const QtdsParams& params, double t)
{
    if (t == 0.0) throw UndefinedAtZero("bounds are undefined at t = 0");
    if (params.m == 0 || params.l == 0)
        throw Inapplicable("comparison bound needs eigenvalues in both half-planes");
    require_finite_gaps(params.gamma_minus, params.gamma_plus);
    const double gamma = params.gamma();
    const double two_a = 2.0 * params.norm_a;
    const double s = std::abs(t);
    // t > 0 sums over j < m with binomials in l; t < 0 swaps the roles.
    const auto outer = static_cast<unsigned>(t > 0.0 ? params.m : params.l);
    const auto inner = static_cast<unsigned>(t > 0.0 ? params.l : params.m);
    const double envelope =
        t > 0.0 ? std::exp(-params.gamma_minus * s) : std::exp(-params.gamma_plus * s);

    double sum = 0.0;
    for (unsigned j = 0; j < outer; ++j) {
        for (unsigned i = 0; i <= j; ++i) {
            sum += binomial(inner + i - 1, inner - 1) * std::pow(s, j - i) / factorial(j - i) *
                   std::pow(two_a, inner + j) / std::pow(gamma, inner + i);
        }
    }
    return envelope * sum;
}

}  // namespace greenbound
