#include "greenbound/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "greenbound/errors.hpp"

namespace greenbound {

namespace {

void require_same_size(const ComplexMatrix& a, const ComplexMatrix& b)
{
    if (a.size() != b.size()) {
        throw DimensionMismatch("matrix dimensions differ: " + std::to_string(a.size()) +
                                " vs " + std::to_string(b.size()));
    }
}

double vector_norm2(std::span<const Complex> v)
{
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z);
    return std::sqrt(s);
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t n) : n_(n), data_(n * n)
{
    if (n == 0) throw DomainError("matrix dimension must be positive");
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : ComplexMatrix(rows.size())
{
    std::size_t i = 0;
    for (const auto& row : rows) {
        if (row.size() != n_) throw DimensionMismatch("matrix rows must form a square");
        std::copy(row.begin(), row.end(), data_.begin() + static_cast<std::ptrdiff_t>(i * n_));
        ++i;
    }
    if (!all_finite()) throw DomainError("matrix entries must be finite");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n)
{
    ComplexMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> diag)
{
    ComplexMatrix m(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    if (!m.all_finite()) throw DomainError("matrix entries must be finite");
    return m;
}

ComplexMatrix ComplexMatrix::from_row_major(std::size_t n, std::vector<Complex> entries)
{
    if (entries.size() != n * n) throw DimensionMismatch("expected n*n entries");
    ComplexMatrix m(n);
    m.data_ = std::move(entries);
    if (!m.all_finite()) throw DomainError("matrix entries must be finite");
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const
{
    ComplexMatrix r(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
}

std::vector<Complex> ComplexMatrix::diagonal_entries() const
{
    std::vector<Complex> d(n_);
    for (std::size_t i = 0; i < n_; ++i) d[i] = (*this)(i, i);
    return d;
}

bool ComplexMatrix::all_finite() const noexcept
{
    return std::all_of(data_.begin(), data_.end(), [](const Complex& z) {
        return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other)
{
    require_same_size(*this, other);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other)
{
    require_same_size(*this, other);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) noexcept
{
    for (auto& z : data_) z *= s;
    return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator-(ComplexMatrix a) { return a *= -1.0; }
ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b)
{
    require_same_size(a, b);
    const std::size_t n = a.size();
    ComplexMatrix c(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex{}) continue;
            for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

std::vector<Complex> operator*(const ComplexMatrix& a, std::span<const Complex> x)
{
    if (x.size() != a.size()) throw DimensionMismatch("vector length differs from matrix size");
    std::vector<Complex> y(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        Complex s{};
        for (std::size_t j = 0; j < a.size(); ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

double triangular_tolerance(const ComplexMatrix& b)
{
    return 1e-13 * induced_norm(b, NormKind::infinity);
}

bool is_upper_triangular(const ComplexMatrix& b, double atol)
{
    for (std::size_t i = 1; i < b.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (std::abs(b(i, j)) > atol) return false;
    return true;
}

bool is_strictly_upper_triangular(const ComplexMatrix& b, double atol)
{
    if (!is_upper_triangular(b, atol)) return false;
    for (std::size_t i = 0; i < b.size(); ++i)
        if (std::abs(b(i, i)) > atol) return false;
    return true;
}

TriangularSplit split_triangular(const ComplexMatrix& b)
{
    const std::size_t n = b.size();
    const double atol = triangular_tolerance(b);
    for (std::size_t i = 1; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (std::abs(b(i, j)) > atol) {
                throw NotTriangular("entry (" + std::to_string(i) + "," + std::to_string(j) +
                                    ") below the diagonal exceeds the tolerance");
            }
        }
    }
    ComplexMatrix d(n);
    ComplexMatrix nil(n);
    for (std::size_t i = 0; i < n; ++i) {
        d(i, i) = b(i, i);
        for (std::size_t j = i + 1; j < n; ++j) nil(i, j) = b(i, j);
    }
    return {std::move(d), std::move(nil)};
}

ComplexMatrix entrywise_abs(const ComplexMatrix& a)
{
    ComplexMatrix r(a.size());
    auto src = a.entries();
    auto dst = r.entries();
    for (std::size_t k = 0; k < src.size(); ++k) dst[k] = std::abs(src[k]);
    return r;
}

double induced_norm(const ComplexMatrix& a, NormKind p)
{
    const std::size_t n = a.size();
    switch (p) {
    case NormKind::one: {
        double best = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += std::abs(a(i, j));
            best = std::max(best, s);
        }
        return best;
    }
    case NormKind::infinity: {
        double best = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) s += std::abs(a(i, j));
            best = std::max(best, s);
        }
        return best;
    }
    case NormKind::two:
        break;
    }

    if (std::all_of(a.entries().begin(), a.entries().end(),
                    [](const Complex& z) { return z == Complex{}; }))
        return 0.0;

    const ComplexMatrix gram = a.adjoint() * a;
    std::vector<Complex> v(n, Complex(1.0 / std::sqrt(static_cast<double>(n))));
    double rayleigh = 0.0;
    const std::size_t max_iter = 10 * n * n;
    bool converged = false;
    for (std::size_t it = 0; it < max_iter; ++it) {
        auto w = gram * std::span<const Complex>(v);
        const double wn = vector_norm2(w);
        if (wn == 0.0) {
            // Start vector lies in the null space of A; fall through to Jacobi.
            break;
        }
        for (auto& z : w) z /= wn;
        const auto gw = gram * std::span<const Complex>(w);
        double next = 0.0;
        for (std::size_t i = 0; i < n; ++i) next += (std::conj(w[i]) * gw[i]).real();
        v = std::move(w);
        if (it > 0 && std::abs(next - rayleigh) < 1e-12 * std::abs(next)) {
            rayleigh = next;
            converged = true;
            break;
        }
        rayleigh = next;
    }
    if (converged) {
        // Verification multiply: ||A v|| with the converged unit vector.
        return vector_norm2(a * std::span<const Complex>(v));
    }
    // Power iteration stalls on clustered top singular values; the Jacobi
    // solve is exact to rounding for the desk-scale sizes used here.
    const double lambda = hermitian_max_eigenvalue(gram);
    if (!std::isfinite(lambda)) throw ConvergenceFailure("two-norm iteration did not converge");
    return std::sqrt(std::max(lambda, 0.0));
}

double hermitian_max_eigenvalue(const ComplexMatrix& h)
{
    const std::size_t n = h.size();
    ComplexMatrix a = h;
    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) s += std::norm(a(i, j));
        return std::sqrt(s);
    };
    double total = 0.0;
    for (const auto& z : a.entries()) total += std::norm(z);
    total = std::sqrt(total);
    if (total == 0.0) return 0.0;

    constexpr int max_sweeps = 100;
    for (int sweep = 0; sweep < max_sweeps && off_norm() > 1e-15 * total; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex b = a(p, q);
                const double mag = std::abs(b);
                if (mag == 0.0) continue;
                // Phase rotation makes the pivot real, then a real Jacobi
                // rotation annihilates it.
                const Complex phase = std::conj(b) / mag;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double theta = 0.5 * std::atan2(2.0 * mag, aqq - app);
                const double c = std::cos(theta);
                const double s = std::sin(theta);
                const Complex upp = c;
                const Complex upq = s;
                const Complex uqp = -s * phase;
                const Complex uqq = c * phase;
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex akp = a(k, p);
                    const Complex akq = a(k, q);
                    a(k, p) = akp * upp + akq * uqp;
                    a(k, q) = akp * upq + akq * uqq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex apk = a(p, k);
                    const Complex aqk = a(q, k);
                    a(p, k) = std::conj(upp) * apk + std::conj(uqp) * aqk;
                    a(q, k) = std::conj(upq) * apk + std::conj(uqq) * aqk;
                }
            }
        }
    }
    if (off_norm() > 1e-12 * total) throw ConvergenceFailure("Hermitian Jacobi did not converge");
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) best = std::max(best, a(i, i).real());
    return best;
}

ComplexMatrix abs_power(const ComplexMatrix& nabs, unsigned k)
{
    ComplexMatrix result = ComplexMatrix::identity(nabs.size());
    for (unsigned i = 0; i < k; ++i) {
        if (i >= nabs.size()) return ComplexMatrix(nabs.size());
        result = result * nabs;
    }
    return result;
}

LuFactorization::LuFactorization(const ComplexMatrix& a) : lu_(a), perm_(a.size())
{
    const std::size_t n = a.size();
    std::iota(perm_.begin(), perm_.end(), std::size_t{0});
    double scale = 0.0;
    for (const auto& z : a.entries()) scale = std::max(scale, std::abs(z));
    const double tiny =
        static_cast<double>(n) * std::numeric_limits<double>::epsilon() * scale;

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(lu_(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = std::abs(lu_(i, k));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best == 0.0 || best <= tiny) {
            singular_ = true;
            if (best == 0.0) continue;
        }
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(piv, j));
            std::swap(perm_[k], perm_[piv]);
            sign_ = -sign_;
        }
        const Complex pivot = lu_(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const Complex f = lu_(i, k) / pivot;
            lu_(i, k) = f;
            if (f == Complex{}) continue;
            for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= f * lu_(k, j);
        }
    }
}

Complex LuFactorization::determinant() const noexcept
{
    Complex det = static_cast<double>(sign_);
    for (std::size_t i = 0; i < lu_.size(); ++i) det *= lu_(i, i);
    return det;
}

double LuFactorization::log_abs_determinant() const noexcept
{
    double s = 0.0;
    for (std::size_t i = 0; i < lu_.size(); ++i) s += std::log(std::abs(lu_(i, i)));
    return s;
}

std::vector<Complex> LuFactorization::solve(std::span<const Complex> rhs) const
{
    if (singular_) throw SingularIteration("matrix is numerically singular");
    const std::size_t n = lu_.size();
    if (rhs.size() != n) throw DimensionMismatch("right-hand side length differs");
    std::vector<Complex> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = rhs[perm_[i]];
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) x[i] -= lu_(i, j) * x[j];
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t j = i + 1; j < n; ++j) x[i] -= lu_(i, j) * x[j];
        x[i] /= lu_(i, i);
    }
    return x;
}

ComplexMatrix LuFactorization::solve(const ComplexMatrix& rhs) const
{
    const std::size_t n = lu_.size();
    if (rhs.size() != n) throw DimensionMismatch("right-hand side size differs");
    ComplexMatrix x(n);
    std::vector<Complex> col(n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) col[i] = rhs(i, j);
        const auto sol = solve(std::span<const Complex>(col));
        for (std::size_t i = 0; i < n; ++i) x(i, j) = sol[i];
    }
    return x;
}

ComplexMatrix LuFactorization::inverse() const
{
    return solve(ComplexMatrix::identity(lu_.size()));
}

}  // namespace greenbound
