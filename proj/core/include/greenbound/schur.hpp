#pragma once

#include <cstddef>

#include "greenbound/matrix.hpp"

namespace greenbound {

struct HessenbergForm {
    ComplexMatrix q;  ///< unitary, A = Q H Q^H
    ComplexMatrix h;  ///< upper Hessenberg
};

/// Complex Schur form A = Q T Q^H with Q unitary and T upper triangular.
struct SchurForm {
    ComplexMatrix q;
    ComplexMatrix t;

    std::size_t size() const noexcept { return t.size(); }
    /// Q T Q^H.
    ComplexMatrix reconstruct() const { return q * t * q.adjoint(); }
};

/// Householder reduction to upper Hessenberg form.
HessenbergForm hessenberg(const ComplexMatrix& a);

/// Hessenberg reduction followed by single-shift complex QR with Wilkinson
/// shifts. Eigenvalues appear on diag(T) in deflation order. Inputs that are
/// already upper triangular are returned unchanged with Q = I.
///
/// Throws ConvergenceFailure after 60 * n QR sweeps without full deflation.
SchurForm schur_decompose(const ComplexMatrix& a);

}  // namespace greenbound
