#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace greenbound {

using Complex = std::complex<double>;

/// Dense square complex matrix stored row-major.
///
/// The dimension is fixed at construction and is always at least one.
/// Arithmetic operators require operands of equal dimension and throw
/// DimensionMismatch otherwise.
class ComplexMatrix {
public:
    /// Zero matrix of dimension n (n >= 1).
    explicit ComplexMatrix(std::size_t n);

    /// Build from nested rows; every row must have the same length as the
    /// number of rows and every entry must be finite.
    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix diagonal(std::span<const Complex> diag);
    /// Row-major data of length n*n; entries must be finite.
    static ComplexMatrix from_row_major(std::size_t n, std::vector<Complex> entries);

    std::size_t size() const noexcept { return n_; }

    Complex& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * n_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const noexcept
    {
        return data_[i * n_ + j];
    }

    std::span<const Complex> entries() const noexcept { return data_; }
    std::span<Complex> entries() noexcept { return data_; }

    /// Conjugate transpose.
    ComplexMatrix adjoint() const;
    std::vector<Complex> diagonal_entries() const;
    bool all_finite() const noexcept;

    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator-=(const ComplexMatrix& other);
    ComplexMatrix& operator*=(Complex s) noexcept;

    friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

private:
    std::size_t n_;
    std::vector<Complex> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex s, ComplexMatrix a);
ComplexMatrix operator*(ComplexMatrix a, Complex s);
std::vector<Complex> operator*(const ComplexMatrix& a, std::span<const Complex> x);

/// Vector norm inducing the matrix norm.
enum class NormKind { one, two, infinity };

struct TriangularSplit {
    ComplexMatrix diagonal;          ///< D, with d_ii = b_ii
    ComplexMatrix strictly_upper;    ///< N = B - D
};

/// Tolerance used to accept a matrix as upper triangular: 1e-13 * ||B||_inf.
double triangular_tolerance(const ComplexMatrix& b);

bool is_upper_triangular(const ComplexMatrix& b, double atol);
bool is_strictly_upper_triangular(const ComplexMatrix& b, double atol);

/// Split an upper-triangular B into D + N. Subdiagonal noise below
/// triangular_tolerance(B) is discarded; anything larger throws NotTriangular.
TriangularSplit split_triangular(const ComplexMatrix& b);

/// Matrix of entry magnitudes |a_ij| (imaginary parts zero).
ComplexMatrix entrywise_abs(const ComplexMatrix& a);

/// Induced matrix norm. The two-norm is the largest singular value,
/// obtained by power iteration on A^H A.
double induced_norm(const ComplexMatrix& a, NormKind p);

/// k-th power of an entrywise-absolute strictly triangular matrix; k = 0
/// gives the identity.
ComplexMatrix abs_power(const ComplexMatrix& nabs, unsigned k);

/// Largest eigenvalue of a Hermitian matrix by cyclic Jacobi rotations.
double hermitian_max_eigenvalue(const ComplexMatrix& h);

/// LU factorization with partial pivoting.
class LuFactorization {
public:
    explicit LuFactorization(const ComplexMatrix& a);

    /// True if some pivot is zero or below n * eps * max|a_ij|.
    bool singular() const noexcept { return singular_; }
    Complex determinant() const noexcept;
    /// log|det A|, free of the overflow determinant() suffers for large n.
    double log_abs_determinant() const noexcept;
    /// Solves A X = B; throws SingularIteration when singular().
    ComplexMatrix solve(const ComplexMatrix& rhs) const;
    std::vector<Complex> solve(std::span<const Complex> rhs) const;
    ComplexMatrix inverse() const;

private:
    ComplexMatrix lu_;
    std::vector<std::size_t> perm_;
    int sign_ = 1;
    bool singular_ = false;
};

}  // namespace greenbound
