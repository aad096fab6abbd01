#include <gtest/gtest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <random>

#include "ensemble.hpp"
#include "eigen_bridge.hpp"
#include "greenbound/errors.hpp"
#include "greenbound/green.hpp"

using namespace greenbound;
using namespace greenbound::testing;

namespace {

const double e1 = std::exp(-1.0);

// Plain Taylor series; only sensible for small ||A||.
ComplexMatrix taylor_exp(const ComplexMatrix& a)
{
    ComplexMatrix sum = ComplexMatrix::identity(a.size());
    ComplexMatrix term = sum;
    for (int k = 1; k < 40; ++k) {
        term = term * a;
        term *= 1.0 / k;
        sum += term;
    }
    return sum;
}

const ComplexMatrix kUpper{{-1.0, 1.0}, {0.0, 2.0}};

}  // namespace

TEST(SpectralGaps, DiagonalExample)
{
    const auto g = spectral_gaps(ComplexMatrix{{-1.0, 0.0}, {0.0, 2.0}});
    EXPECT_EQ(g.gamma_minus, 1.0);
    EXPECT_EQ(g.gamma_plus, 2.0);
    EXPECT_EQ(g.gamma(), 3.0);
    EXPECT_EQ(g.alpha, 2.0);
    EXPECT_EQ(g.m, 1u);
    EXPECT_EQ(g.l, 1u);
}

TEST(SpectralGaps, OneSidedAndAxis)
{
    const auto g = spectral_gaps(ComplexMatrix{{{-0.5, 3.0}, 1.0}, {0.0, -2.0}});
    EXPECT_EQ(g.gamma_minus, 0.5);
    EXPECT_TRUE(std::isinf(g.gamma_plus));
    EXPECT_EQ(g.l, 0u);
    EXPECT_THROW(spectral_gaps(ComplexMatrix{{1e-15, 0.0}, {0.0, -1.0}}), SpectrumOnAxis);
    EXPECT_THROW(spectral_gaps(ComplexMatrix{{{0.0, 2.0}}}), SpectrumOnAxis);
    EXPECT_THROW(spectral_gaps(ComplexMatrix{{1.0, 0.0}, {1.0, 1.0}}), NotTriangular);
    // A general matrix goes through Schur: the rotation generator shifted left.
    const auto r = spectral_gaps_of(ComplexMatrix{{-0.3, -1.0}, {1.0, -0.3}});
    EXPECT_NEAR(r.gamma_minus, 0.3, 1e-12);
    EXPECT_EQ(r.m, 2u);
}

TEST(MatrixExp, HandValue)
{
    const ComplexMatrix e = matrix_exp(kUpper);
    EXPECT_NEAR(e(0, 0).real(), e1, 1e-14);
    EXPECT_NEAR(e(1, 1).real(), std::exp(2.0), 1e-13);
    EXPECT_NEAR(e(0, 1).real(), (std::exp(2.0) - e1) / 3.0, 1e-13);
    EXPECT_EQ(e(1, 0), Complex(0.0));
}

TEST(MatrixExp, AgainstTaylorAndEigen)
{
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(trial % 8);
        const ComplexMatrix small = Complex(0.1) * random_matrix(n, rng);
        EXPECT_LT(max_abs_diff(matrix_exp(small), taylor_exp(small)), 1e-14);

        const ComplexMatrix big = Complex(3.0) * random_matrix(n, rng);
        const ComplexMatrix ref = from_eigen(to_eigen(big).exp());
        const double scale = std::max(1.0, induced_norm(ref, NormKind::infinity));
        EXPECT_LT(max_abs_diff(matrix_exp(big), ref), 1e-11 * scale) << "n=" << n;
    }
}

TEST(MatrixSign, ProjectorsOfUpperExample)
{
    const auto gaps = spectral_gaps(kUpper);
    const auto p = spectral_projectors(kUpper, gaps);
    EXPECT_LT(max_abs_diff(p.minus, ComplexMatrix{{1.0, -1.0 / 3.0}, {0.0, 0.0}}), 1e-14);
    EXPECT_LT(max_abs_diff(p.plus, ComplexMatrix{{0.0, 1.0 / 3.0}, {0.0, 1.0}}), 1e-14);
}

TEST(MatrixSign, ProjectorProperties)
{
    std::mt19937_64 rng(32);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(trial % 7);
        const ComplexMatrix q = random_unitary(n, rng);
        const ComplexMatrix a = q * random_triangular(n, rng) * q.adjoint();
        const auto p = spectral_projectors(a, spectral_gaps_of(a));
        const double sc = 1e-9 * std::max(1.0, induced_norm(p.minus, NormKind::infinity));
        EXPECT_LT(max_abs_diff(p.minus * p.minus, p.minus), sc);
        EXPECT_LT(max_abs_diff(p.minus + p.plus, ComplexMatrix::identity(n)), sc);
        EXPECT_LT(max_abs_diff(a * p.minus, p.minus * a), sc * induced_norm(a, NormKind::infinity));
        const ComplexMatrix s = matrix_sign(a);
        EXPECT_LT(max_abs_diff(s * s, ComplexMatrix::identity(n)), 100 * sc);
    }
}

TEST(GreenFunction, UpperExampleBothSides)
{
    const GreenKernel g(kUpper);
    EXPECT_LT(max_abs_diff(g(1.0), ComplexMatrix{{e1, -e1 / 3.0}, {0.0, 0.0}}), 1e-14);
    const double e2 = std::exp(-2.0);
    EXPECT_LT(max_abs_diff(g(-1.0), ComplexMatrix{{0.0, -e2 / 3.0}, {0.0, -e2}}), 1e-14);
    EXPECT_THROW(g(0.0), UndefinedAtZero);
    EXPECT_THROW(green_function(kUpper, 0.0), UndefinedAtZero);
}

TEST(GreenFunction, DiagonalExample)
{
    const ComplexMatrix g = green_function(ComplexMatrix{{-1.0, 0.0}, {0.0, 2.0}}, 0.5);
    EXPECT_NEAR(induced_norm(g, NormKind::two), std::exp(-0.5), 1e-15);
}

TEST(GreenFunction, JumpAtZeroAndOde)
{
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(trial % 5);
        const ComplexMatrix a = random_matrix(n, rng);
        const GreenKernel g(a);
        const double eps = 1e-9;
        EXPECT_LT(max_abs_diff(g(eps) - g(-eps), ComplexMatrix::identity(n)), 1e-6);

        for (double t : {-1.3, 0.7}) {
            const double h = 1e-5;
            ComplexMatrix deriv = g(t + h) - g(t - h);
            deriv *= 1.0 / (2 * h);
            const double scale = std::max(1.0, induced_norm(a * g(t), NormKind::infinity));
            EXPECT_LT(max_abs_diff(deriv, a * g(t)), 1e-6 * scale);
        }
    }
}

TEST(GreenFunction, UnitaryInvariance)
{
    std::mt19937_64 rng(34);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(trial % 6);
        const ComplexMatrix b = random_triangular(n, rng);
        const ComplexMatrix q = random_unitary(n, rng);
        for (double t : {-2.0, -0.1, 0.1, 2.0}) {
            const ComplexMatrix lhs = green_function(q * b * q.adjoint(), t);
            const ComplexMatrix rhs = q * green_function(b, t) * q.adjoint();
            EXPECT_LT(max_abs_diff(lhs, rhs), 1e-9 * std::max(1.0, induced_norm(rhs, NormKind::two)));
        }
    }
}

TEST(GreenFunction, OneSidedSpectrum)
{
    // All eigenvalues on the left: G = e^{At} for t > 0 and 0 for t < 0.
    const ComplexMatrix a{{-1.0, 4.0}, {0.0, -0.5}};
    const GreenKernel g(a);
    EXPECT_LT(max_abs_diff(g(1.5), matrix_exp(Complex(1.5) * a)), 1e-14);
    EXPECT_EQ(g(-1.5), ComplexMatrix(2));
}

TEST(BoundedSolution, ConstantForcing)
{
    // For constant f the bounded solution is the equilibrium -A^{-1} f.
    const ComplexMatrix a = kUpper;
    const std::vector<Complex> c{1.0, Complex(0.0, 2.0)};
    const Forcing f = [&](double) { return c; };
    const auto x = bounded_solution(a, f, 0.3);
    const auto ref = LuFactorization(a).solve(std::span<const Complex>(c));
    for (std::size_t i = 0; i < 2; ++i) EXPECT_NEAR(std::abs(x[i] + ref[i]), 0.0, 1e-10);
}

TEST(BoundedSolution, ResidualOfOscillatingForcing)
{
    std::mt19937_64 rng(35);
    const ComplexMatrix a = random_triangular(3, rng);
    const GreenKernel g(a);
    const Forcing f = [](double s) {
        return std::vector<Complex>{std::cos(s), std::sin(2 * s), Complex(0.0, 1.0 / (1 + s * s))};
    };
    const QuadSpec quad = default_quad_spec(g.split().gaps);
    for (double t : {-1.0, 0.0, 2.5}) EXPECT_LT(bounded_solution_residual(g, f, t, quad), 1e-6);
}
