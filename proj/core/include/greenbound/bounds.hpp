#pragma once

#include <cstddef>
#include <vector>

#include "greenbound/matrix.hpp"

namespace greenbound {

/// Inputs of the triangular (Bessel) bound for B = D + N.
///
/// gamma_minus / gamma_plus may be +inf when the corresponding half of the
/// spectrum is empty; the bound then takes its one-sided (Van Loan) limit.
struct BoundParams {
    std::size_t n = 1;
    double norm_n = 0.0;
    double gamma_minus = 0.0;
    double gamma_plus = 0.0;
    NormKind norm_kind = NormKind::two;

    double gamma() const noexcept { return gamma_minus + gamma_plus; }
};

/// Inputs of the comparison bound that is driven by ||A|| and the eigenvalue
/// counts m (left half-plane) and l (right half-plane).
struct QtdsParams {
    double norm_a = 0.0;
    std::size_t m = 0;
    std::size_t l = 0;
    double gamma_minus = 0.0;
    double gamma_plus = 0.0;

    double gamma() const noexcept { return gamma_minus + gamma_plus; }
};

/// Two-sided envelope: e^{-gamma_minus t} for t >= 0, e^{gamma_plus t} for t <= 0.
double h_eval(double t, double gamma_minus, double gamma_plus);

/// K_{m+1/2}(x) from its finite closed form
///   sqrt(pi/(2x)) e^{-x} sum_{j=0}^{m} (m+j)! / (j! (m-j)! (2x)^j).
/// Throws DomainError for x <= 0.
double bessel_k_half(unsigned m, double x);

enum class ConvPath { polynomial, bessel };

/// k-fold self-convolution h^{*k}(t) of the envelope, k >= 1.
///
/// h^{*k}(t) = h(t) P_{k-1}(|t|) with
///   P_{k-1}(s) = sum_{j=0}^{k-1} (k-1+j)! s^{k-1-j} / ((k-1)! j! (k-1-j)! gamma^j),
/// which equals |t|^{k-1} sqrt(gamma|t|) e^{gamma|t|/2} K_{k-1/2}(gamma|t|/2) / (sqrt(pi) (k-1)!).
/// The polynomial path is exact at t = 0 and never overflows; the Bessel path
/// exists as a cross-check and requires t != 0.
///
/// Since K_{-nu} = K_nu, the k-th term of the triangular bound, written with
/// K_{-k-1/2}, is h^{*(k+1)} here.
double conv_power_closed(unsigned k, double t, double gamma_minus, double gamma_plus,
                         ConvPath path = ConvPath::polynomial);

/// P_k(s) alone (the polynomial of degree k multiplying h in h^{*(k+1)}).
double conv_polynomial(unsigned k, double s, double gamma);

/// Weights w_k(t), k = 0..n-1, such that every bound reads sum_k c_k w_k(t):
/// w_k = h^{*(k+1)}(t), or the one-sided limit e^{-gamma_minus t} t^k / k!
/// (mirrored for t < 0) when the opposite gap is infinite. A side whose own gap
/// is infinite yields zeros. Throws UndefinedAtZero for t == 0.
std::vector<double> bound_weights(std::size_t n, double t, double gamma_minus,
                                  double gamma_plus);

/// Norm bound for the Green's function of a triangular matrix:
/// sum_{k=0}^{n-1} ||N||^k h^{*(k+1)}(t).
double triangular_bound(const BoundParams& params, double t);

/// Entrywise bound sum_{k=0}^{n-1} |N|^k h^{*(k+1)}(t) (real matrix).
/// Throws NotStrictlyTriangular if N has mass on or below the diagonal.
ComplexMatrix entrywise_bound(const ComplexMatrix& d, const ComplexMatrix& n, double gamma_minus,
                              double gamma_plus, double t);

/// e^{alpha t} sum_{k=0}^{n-1} (||N|| t)^k / k!, an upper bound on ||e^{Bt}||
/// for t >= 0.
double van_loan_bound(double alpha, double norm_n, std::size_t n, double t);

/// Comparison bound in terms of ||A||, m and l. Throws Inapplicable unless
/// m >= 1 and l >= 1 with finite gaps.
double qtds18_bound(const QtdsParams& params, double t);

/// C(n, k); exact in 64-bit integers while representable.
double binomial(unsigned n, unsigned k);

}  // namespace greenbound
