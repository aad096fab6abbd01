#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "greenbound/bounds.hpp"
#include "greenbound/errors.hpp"
#include "greenbound/green.hpp"
#include "greenbound/matrix.hpp"

namespace greenbound::cli {

/// Process exit statuses; stable across releases.
enum ExitCode : int {
    kOk = 0,
    kParseError = 1,
    kIllPosed = 2,
    kBadOverride = 3,
    kViolation = 4,
};

class ParseError : public Error {
public:
    using Error::Error;
};

class BadOverride : public Error {
public:
    using Error::Error;
};

/// Matrix file: {"n": int, "data": [[[re, im], ...], ...]} (row-major).
ComplexMatrix parse_matrix_json(std::string_view text);
ComplexMatrix read_matrix_file(const std::filesystem::path& path);
std::string to_matrix_json(const ComplexMatrix& m);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double x);

/// Sorted, zero-free time grid. A range straddling zero becomes two
/// logarithmic half-grids (steps/2 negative points, the rest positive)
/// starting at 1e-3 of the larger endpoint magnitude; a range touching zero
/// becomes one such half-grid; otherwise the grid is uniform.
std::vector<double> time_grid(double t_min, double t_max, std::size_t steps);

struct BoundSelection {
    bool triangular = true;
    bool entrywise = true;
    bool vanloan = true;
    bool qtds18 = true;
};
BoundSelection parse_bound_selection(std::string_view name);

struct GammaOverrides {
    std::optional<double> gamma_minus;
    std::optional<double> gamma_plus;
};

/// Everything needed to tabulate one matrix: the exact kernel of the input
/// matrix and the triangular data (its Schur form when not triangular) that
/// feeds the bounds.
class Analysis {
public:
    /// Throws SpectrumOnAxis, BadOverride, or library errors.
    Analysis(const ComplexMatrix& a, NormKind requested, const GammaOverrides& overrides,
             std::ostream* notes = nullptr);

    bool schur_applied() const noexcept { return schur_applied_; }
    NormKind norm() const noexcept { return norm_; }
    const SpectralGaps& gaps() const noexcept { return gaps_; }
    double gamma_minus() const noexcept { return gamma_minus_; }
    double gamma_plus() const noexcept { return gamma_plus_; }
    const ComplexMatrix& triangular() const noexcept { return t_; }
    const TriangularSplit& split() const noexcept { return split_; }
    const GreenKernel& kernel() const noexcept { return kernel_; }

    double exact_norm(double t) const;
    std::optional<double> bound_triangular(double t) const;
    std::optional<double> bound_entrywise_norm(double t) const;
    std::optional<double> bound_vanloan(double t) const;
    std::optional<double> bound_qtds18(double t) const;

private:
    ComplexMatrix t_;
    bool schur_applied_ = false;
    NormKind norm_;
    SpectralGaps gaps_;
    double gamma_minus_;
    double gamma_plus_;
    TriangularSplit split_;
    double norm_n_;
    double norm_t_;
    GreenKernel kernel_;
};

struct GridRow {
    double t = 0.0;
    double exact_norm = 0.0;
    std::optional<double> bound_triangular;
    std::optional<double> bound_entrywise_norm;
    std::optional<double> bound_vanloan;
    std::optional<double> bound_qtds18;
    std::optional<double> ratio_triangular;
};

std::vector<GridRow> tabulate(const Analysis& analysis, std::span<const double> grid,
                              const BoundSelection& selection);

inline constexpr std::string_view kCompareHeader =
    "t,exact_norm,bound_triangular,bound_entrywise_norm,bound_vanloan,bound_qtds18,"
    "ratio_triangular";

void write_compare_csv(std::ostream& out, std::span<const GridRow> rows);

/// Runs the tool on argv-style arguments (without the program name) and
/// returns the process exit status.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace greenbound::cli
