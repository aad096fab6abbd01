#include "greenbound/schur.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "greenbound/errors.hpp"

namespace greenbound {

namespace {

/// Plane rotation G = [[c, s], [-conj(s), c]] mapping (p, q) to (r, 0).
struct Givens {
    double c = 1.0;
    Complex s{};

    static Givens make(Complex p, Complex q)
    {
        Givens g;
        if (q == Complex{}) return g;
        if (p == Complex{}) {
            g.c = 0.0;
            g.s = 1.0;
            return g;
        }
        const double ap = std::abs(p);
        const double norm = std::hypot(ap, std::abs(q));
        g.c = ap / norm;
        g.s = (p / ap) * std::conj(q) / norm;
        return g;
    }

    /// Rows i, i+1 of m, columns [col_begin, n).
    void apply_left(ComplexMatrix& m, std::size_t i, std::size_t col_begin) const
    {
        for (std::size_t j = col_begin; j < m.size(); ++j) {
            const Complex x = m(i, j);
            const Complex y = m(i + 1, j);
            m(i, j) = c * x + s * y;
            m(i + 1, j) = -std::conj(s) * x + c * y;
        }
    }

    /// Columns i, i+1 of m multiplied on the right by G^H, rows [0, row_end].
    void apply_right_adjoint(ComplexMatrix& m, std::size_t i, std::size_t row_end) const
    {
        for (std::size_t r = 0; r <= row_end && r < m.size(); ++r) {
            const Complex x = m(r, i);
            const Complex y = m(r, i + 1);
            m(r, i) = c * x + std::conj(s) * y;
            m(r, i + 1) = -s * x + c * y;
        }
    }
};

bool exactly_upper_triangular(const ComplexMatrix& a)
{
    for (std::size_t i = 1; i < a.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (a(i, j) != Complex{}) return false;
    return true;
}

double frobenius(const ComplexMatrix& a)
{
    double s = 0.0;
    for (const auto& z : a.entries()) s += std::norm(z);
    return std::sqrt(s);
}

Complex wilkinson_shift(const ComplexMatrix& t, std::size_t iu)
{
    const Complex a = t(iu - 1, iu - 1);
    const Complex b = t(iu - 1, iu);
    const Complex c = t(iu, iu - 1);
    const Complex d = t(iu, iu);
    const Complex half_diff = 0.5 * (a - d);
    const Complex disc = std::sqrt(half_diff * half_diff + b * c);
    const Complex mean = 0.5 * (a + d);
    const Complex l1 = mean + disc;
    const Complex l2 = mean - disc;
    return std::abs(l1 - d) <= std::abs(l2 - d) ? l1 : l2;
}

}  // namespace

HessenbergForm hessenberg(const ComplexMatrix& a)
{
    const std::size_t n = a.size();
    ComplexMatrix h = a;
    ComplexMatrix q = ComplexMatrix::identity(n);
    if (n <= 2) return {std::move(q), std::move(h)};

    std::vector<Complex> v(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double xnorm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) xnorm2 += std::norm(h(i, k));
        double tail2 = xnorm2 - std::norm(h(k + 1, k));
        if (tail2 <= 0.0) continue;  // column already in Hessenberg shape
        const double xnorm = std::sqrt(xnorm2);
        const Complex x0 = h(k + 1, k);
        const Complex phase = std::abs(x0) == 0.0 ? Complex(1.0) : x0 / std::abs(x0);
        // v = x + phase * ||x|| e1, reflector P = I - 2 v v^H / (v^H v)
        std::fill(v.begin(), v.end(), Complex{});
        for (std::size_t i = k + 1; i < n; ++i) v[i] = h(i, k);
        v[k + 1] += phase * xnorm;
        double vnorm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) vnorm2 += std::norm(v[i]);
        const double beta = 2.0 / vnorm2;

        // H <- P H
        for (std::size_t j = 0; j < n; ++j) {
            Complex dot{};
            for (std::size_t i = k + 1; i < n; ++i) dot += std::conj(v[i]) * h(i, j);
            dot *= beta;
            for (std::size_t i = k + 1; i < n; ++i) h(i, j) -= v[i] * dot;
        }
        // H <- H P, Q <- Q P
        for (auto* m : {&h, &q}) {
            for (std::size_t r = 0; r < n; ++r) {
                Complex dot{};
                for (std::size_t i = k + 1; i < n; ++i) dot += (*m)(r, i) * v[i];
                dot *= beta;
                for (std::size_t i = k + 1; i < n; ++i) (*m)(r, i) -= dot * std::conj(v[i]);
            }
        }
        h(k + 1, k) = -phase * xnorm;
        for (std::size_t i = k + 2; i < n; ++i) h(i, k) = Complex{};
    }
    return {std::move(q), std::move(h)};
}

SchurForm schur_decompose(const ComplexMatrix& a)
{
    const std::size_t n = a.size();
    if (exactly_upper_triangular(a)) return {ComplexMatrix::identity(n), a};

    auto [q, t] = hessenberg(a);
    const double scale = frobenius(t);
    const double smallnum = std::numeric_limits<double>::min() *
                            (static_cast<double>(n) / std::numeric_limits<double>::epsilon());

    auto negligible = [&](std::size_t i) {
        double tst = std::abs(t(i, i)) + std::abs(t(i + 1, i + 1));
        if (tst == 0.0) tst = scale;
        return std::abs(t(i + 1, i)) <= std::max(1e-14 * tst, smallnum);
    };

    const std::size_t max_sweeps = 60 * n;
    std::size_t total = 0;
    std::size_t iter = 0;
    std::size_t iu = n - 1;
    while (true) {
        while (iu > 0 && negligible(iu - 1)) {
            t(iu, iu - 1) = Complex{};
            --iu;
            iter = 0;
        }
        if (iu == 0) break;
        ++iter;
        if (++total > max_sweeps) {
            throw ConvergenceFailure("QR iteration stalled at subdiagonal index " +
                                     std::to_string(iu - 1));
        }
        std::size_t il = iu - 1;
        while (il > 0 && !negligible(il - 1)) --il;

        Complex shift;
        if (iter % 10 == 0) {
            // Exceptional shift to break cycles.
            shift = t(iu, iu) + std::abs(t(iu, iu - 1).real()) +
                    (iu >= 2 ? std::abs(t(iu - 1, iu - 2).real()) : 0.0);
        } else {
            shift = wilkinson_shift(t, iu);
        }

        Givens g = Givens::make(t(il, il) - shift, t(il + 1, il));
        g.apply_left(t, il, il);
        g.apply_right_adjoint(t, il, std::min(il + 2, iu));
        g.apply_right_adjoint(q, il, n - 1);
        for (std::size_t i = il + 1; i < iu; ++i) {
            g = Givens::make(t(i, i - 1), t(i + 1, i - 1));
            g.apply_left(t, i, i - 1);
            t(i + 1, i - 1) = Complex{};
            g.apply_right_adjoint(t, i, std::min(i + 2, iu));
            g.apply_right_adjoint(q, i, n - 1);
        }
    }

    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) t(i, j) = Complex{};
    return {std::move(q), std::move(t)};
}

}  // namespace greenbound
