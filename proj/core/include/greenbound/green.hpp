#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "greenbound/matrix.hpp"
#include "greenbound/quadrature.hpp"

namespace greenbound {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Relative tolerance deciding that an eigenvalue sits on the imaginary axis.
inline constexpr double kAxisTolerance = 1e-12;

/// Distances from the imaginary axis to the two halves of the spectrum.
///
/// gamma_minus (gamma_plus) is +inf when no eigenvalue lies in the open left
/// (right) half-plane. The values are the largest for which the strip
/// -gamma_plus < Re z < gamma_minus is free of eigenvalues.
struct SpectralGaps {
    double gamma_minus = kInfinity;
    double gamma_plus = kInfinity;
    double alpha = 0.0;   ///< max Re(lambda)
    std::size_t m = 0;    ///< eigenvalues with Re < 0
    std::size_t l = 0;    ///< eigenvalues with Re > 0

    double gamma() const noexcept { return gamma_minus + gamma_plus; }
};

struct SpectralProjectors {
    ComplexMatrix minus;  ///< onto the left-half-plane invariant subspace
    ComplexMatrix plus;
};

struct SpectralSplit {
    SpectralGaps gaps;
    SpectralProjectors projectors;
};

/// Reads the gaps off the diagonal of an upper-triangular T.
/// Throws NotTriangular, or SpectrumOnAxis when some |Re t_ii| <= 1e-12 ||T||_inf.
SpectralGaps spectral_gaps(const ComplexMatrix& t);

/// Gaps of a general matrix, through its Schur form when it is not
/// already triangular.
SpectralGaps spectral_gaps_of(const ComplexMatrix& a);

/// Matrix sign function by determinant-scaled Newton iteration.
ComplexMatrix matrix_sign(const ComplexMatrix& a);

/// P- = (I - sign A)/2, P+ = (I + sign A)/2. One-sided spectra short-circuit
/// to (I, 0) or (0, I).
SpectralProjectors spectral_projectors(const ComplexMatrix& a, const SpectralGaps& gaps);

/// e^A by scaling and squaring with the degree-13 diagonal Pade approximant.
ComplexMatrix matrix_exp(const ComplexMatrix& a);

/// Green's function of the bounded-solutions problem for x' = A x + f.
///
/// For t > 0 the kernel is e^{At} P-, for t < 0 it is -e^{At} P+. Both are
/// evaluated through the restricted generators A P- and A P+, whose spectra
/// lie in the closed half-plane that keeps the exponential bounded; forming
/// e^{At} first and projecting afterwards loses everything to cancellation
/// once the opposite half of the spectrum has grown.
class GreenKernel {
public:
    explicit GreenKernel(const ComplexMatrix& a);

    const ComplexMatrix& matrix() const noexcept { return a_; }
    const SpectralSplit& split() const noexcept { return split_; }
    std::size_t size() const noexcept { return a_.size(); }

    /// Throws UndefinedAtZero for t == 0.
    ComplexMatrix operator()(double t) const;

    /// e^{At}, unrestricted.
    ComplexMatrix exp(double t) const { return matrix_exp(t * a_); }

private:
    ComplexMatrix a_;
    SpectralSplit split_;
    ComplexMatrix gen_minus_;
    ComplexMatrix gen_plus_;
};

/// One-shot evaluation; prefer GreenKernel for repeated times.
ComplexMatrix green_function(const ComplexMatrix& a, double t);

using Forcing = std::function<std::vector<Complex>(double)>;

/// Default truncation: the slower-decaying side of the envelope drops below
/// 1e-12 with a factor-2 margin for the polynomial transient; panels no wider
/// than min(1, 1/gamma).
QuadSpec default_quad_spec(const SpectralGaps& gaps);

/// x(t) = int G(A, s) f(t - s) ds by composite Gauss-Legendre on each half-line.
std::vector<Complex> bounded_solution(const GreenKernel& kernel, const Forcing& f, double t,
                                      const QuadSpec& quad);
std::vector<Complex> bounded_solution(const ComplexMatrix& a, const Forcing& f, double t);

/// ||x'(t) - A x(t) - f(t)||_inf with x' from a central difference of step h.
double bounded_solution_residual(const GreenKernel& kernel, const Forcing& f, double t,
                                 const QuadSpec& quad, double h = 1e-4);

}  // namespace greenbound
