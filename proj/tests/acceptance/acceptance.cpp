// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ensemble.hpp"
#include "greenbound/bounds.hpp"
#include "greenbound/green.hpp"
#include "greenbound/oracles.hpp"
#include "greenbound/schur.hpp"
#include "greenbound_cli.hpp"

using namespace greenbound;
using namespace greenbound::testing;

namespace {

// Pinned tolerances.
constexpr double kDominationSlack = 1e-9;     // relative, criteria 1, 6, 8
constexpr double kEntrywiseSlack = 1e-10;     // absolute, criterion 2
constexpr double kConvolutionTol = 1e-6;      // relative, criterion 3
constexpr double kContourTol = 1e-8;          // absolute inf-norm, criterion 4
constexpr double kPerturbationTol = 1e-5;     // criterion 5
constexpr double kOneSidedTol = 1e-4;         // relative, criterion 6
constexpr double kPathTol = 1e-10;            // relative, criterion 7
constexpr double kLeadingTol = 1e-4;          // criterion 7
constexpr double kCorollaryTol = 1e-8;        // absolute, criterion 9
constexpr double kSchurTol = 1e-10;           // times n ||A||_inf, criterion 10

constexpr std::size_t kEnsembleSize = 210;
constexpr std::uint64_t kEnsembleSeed = 20240601;

const std::array<NormKind, 3> kNorms{NormKind::one, NormKind::two, NormKind::infinity};

struct Outcome {
    bool pass = true;
    std::string detail;
};

int failures = 0;

void report(int id, const char* title, const Outcome& o, double seconds)
{
    std::printf("[%s] criterion %2d: %s -- %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", id, title,
                o.detail.c_str(), seconds);
    std::fflush(stdout);
    if (!o.pass) ++failures;
}

void run_criterion(int id, const char* title, const std::function<Outcome()>& body)
{
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(id, title, o, dt);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof(buf), f, a, b, c);
    return buf;
}

const std::vector<ComplexMatrix>& ensemble()
{
    static const std::vector<ComplexMatrix> e = triangular_ensemble(kEnsembleSize, kEnsembleSeed);
    return e;
}

const std::vector<double>& grid_times()
{
    static const std::vector<double> t = symmetric_times(1e-2, 10.0, 40);
    return t;
}

Outcome theorem_domination()
{
    std::size_t checks = 0, violations = 0;
    double worst = 0.0;
    for (const auto& b : ensemble()) {
        const GreenKernel g(b);
        const auto s = split_triangular(b);
        const auto gaps = g.split().gaps;
        for (const double t : grid_times()) {
            const ComplexMatrix gt = g(t);
            for (const auto p : kNorms) {
                BoundParams bp;
                bp.n = b.size();
                bp.norm_n = induced_norm(s.strictly_upper, p);
                bp.gamma_minus = gaps.gamma_minus;
                bp.gamma_plus = gaps.gamma_plus;
                bp.norm_kind = p;
                const double bound = triangular_bound(bp, t);
                const double exact = induced_norm(gt, p);
                ++checks;
                worst = std::max(worst, exact / bound);
                if (exact > bound * (1 + kDominationSlack)) ++violations;
            }
        }
    }
    return {violations == 0, fmt("%.0f checks, %.0f violations, max exact/bound %.6f",
                                 static_cast<double>(checks), static_cast<double>(violations), worst)};
}

Outcome entrywise_domination()
{
    std::size_t checks = 0, violations = 0;
    double worst = -1e300;
    for (const auto& b : ensemble()) {
        const GreenKernel g(b);
        const auto s = split_triangular(b);
        const auto gaps = g.split().gaps;
        for (const double t : grid_times()) {
            const ComplexMatrix ga = entrywise_abs(g(t));
            const ComplexMatrix eb =
                entrywise_bound(s.diagonal, s.strictly_upper, gaps.gamma_minus, gaps.gamma_plus, t);
            for (std::size_t k = 0; k < ga.entries().size(); ++k) {
                const double excess = ga.entries()[k].real() - eb.entries()[k].real();
                ++checks;
                worst = std::max(worst, excess);
                if (excess > kEntrywiseSlack) ++violations;
            }
        }
    }
    return {violations == 0, fmt("%.0f entry checks, %.0f violations, max |G|-bound %.3g",
                                 static_cast<double>(checks), static_cast<double>(violations), worst)};
}

Outcome convolution_closed_vs_numeric()
{
    double worst = 0.0;
    std::size_t checks = 0;
    const unsigned k_max = 6;
    for (const double gamma : {0.5, 1.0, 2.0}) {
        for (const double frac : {0.5, 1.0 / 3.0}) {
            const double gm = gamma * frac;
            const double gp = gamma - gm;
            const auto grid = oracles::default_convolution_grid(k_max, gm, gp, 8.0);
            const oracles::ConvolutionTable table(k_max, gm, gp, grid);
            // 30 grid nodes spread over [-8, 8], skipping 0 and landing on nodes.
            for (int i = 0; i < 30; ++i) {
                const double target = -8.0 + 16.0 * (i + 0.5) / 30.0;
                const double t = std::round(target / table.step()) * table.step();
                for (unsigned k = 1; k <= k_max; ++k) {
                    const double closed = conv_power_closed(k, t, gm, gp);
                    worst = std::max(worst, std::abs(closed - table(k, t)) / closed);
                    ++checks;
                }
            }
        }
    }
    const double e1 = std::exp(-1.0);
    const double h2 = conv_power_closed(2, 1.0, 1.0, 1.0);
    const double h3 = conv_power_closed(3, 1.0, 1.0, 1.0);
    const double n2 = oracles::conv_power_numeric(2, 1.0, 1.0, 1.0);
    const double n3 = oracles::conv_power_numeric(3, 1.0, 1.0, 1.0);
    const double hand = std::max({std::abs(h2 - 2 * e1) / (2 * e1), std::abs(h3 - 3.5 * e1) / (3.5 * e1),
                                  std::abs(n2 - 2 * e1) / (2 * e1), std::abs(n3 - 3.5 * e1) / (3.5 * e1)});
    const bool pass = worst <= kConvolutionTol && hand <= kConvolutionTol;
    return {pass, fmt("%.0f comparisons, max rel err %.3g; hand values rel err %.3g",
                      static_cast<double>(checks), worst, hand)};
}

Outcome contour_equivalence()
{
    std::mt19937_64 rng(kEnsembleSeed + 4);
    std::uniform_real_distribution<double> ut(std::log(0.1), std::log(5.0));
    double worst = 0.0;
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(trial % 5);
        const ComplexMatrix q = random_unitary(n, rng);
        const ComplexMatrix a = q * random_triangular(n, rng) * q.adjoint();
        for (int j = 0; j < 4; ++j) {
            const double t = (j % 2 ? -1.0 : 1.0) * std::exp(ut(rng));
            const ComplexMatrix diff = green_function(a, t) - oracles::green_contour(a, t);
            worst = std::max(worst, induced_norm(diff, NormKind::infinity));
        }
    }
    return {worst <= kContourTol, fmt("30 matrices x 4 times, max ||G - contour||_inf %.3g", worst)};
}

Outcome perturbation_identity()
{
    std::mt19937_64 rng(kEnsembleSeed + 5);
    double worst = 0.0;
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(trial % 3);
        const ComplexMatrix a = random_triangular(n, rng);
        const ComplexMatrix b = random_triangular(n, rng);
        for (const double t : {-1.5, -0.7, -0.3, 0.3, 0.7, 1.5})
            worst = std::max(worst, oracles::perturbation_residual(a, b, t));
    }
    return {worst <= kPerturbationTol, fmt("30 pairs x 6 times, max residual %.3g", worst)};
}

Outcome one_sided_limit()
{
    double worst_rel = 0.0;
    for (std::size_t n = 1; n <= 6; ++n) {
        for (const double norm_n : {0.0, 0.5, 2.0}) {
            for (const double gm : {0.2, 1.0}) {
                for (const double t : logspace(0.1, 10.0, 30)) {
                    BoundParams p;
                    p.n = n;
                    p.norm_n = norm_n;
                    p.gamma_minus = gm;
                    p.gamma_plus = 1e6;
                    const double big = triangular_bound(p, t);
                    const double vl = van_loan_bound(-gm, norm_n, n, t);
                    worst_rel = std::max(worst_rel, std::abs(big - vl) / vl);
                }
            }
        }
    }
    std::size_t violations = 0, checks = 0;
    for (const auto& b : ensemble()) {
        const auto s = split_triangular(b);
        const auto gaps = spectral_gaps(b);
        for (const double t : logspace(1e-2, 10.0, 20)) {
            const ComplexMatrix e = matrix_exp(Complex(t) * b);
            for (const auto p : kNorms) {
                const double bound = van_loan_bound(gaps.alpha, induced_norm(s.strictly_upper, p), b.size(), t);
                ++checks;
                if (induced_norm(e, p) > bound * (1 + kDominationSlack)) ++violations;
            }
        }
        for (const auto p : kNorms)
            if (van_loan_bound(gaps.alpha, induced_norm(s.strictly_upper, p), b.size(), 0.0) < 1.0) ++violations;
    }
    const bool pass = worst_rel <= kOneSidedTol && violations == 0;
    return {pass, fmt("limit max rel err %.3g; exp domination %.0f checks, %.0f violations", worst_rel,
                      static_cast<double>(checks), static_cast<double>(violations))};
}

Outcome polynomial_identity()
{
    double worst = 0.0;
    for (unsigned k = 1; k <= 8; ++k) {
        for (const double gamma : {0.5, 2.0}) {
            for (const double x : logspace(1e-6, 50.0, 60)) {
                for (const double sign : {-1.0, 1.0}) {
                    const double t = sign * x / gamma;
                    const double p = conv_power_closed(k, t, gamma / 2, gamma / 2);
                    const double b = conv_power_closed(k, t, gamma / 2, gamma / 2, ConvPath::bessel);
                    worst = std::max(worst, std::abs(p - b) / p);
                }
            }
        }
    }
    double lead = 0.0;
    for (unsigned k = 0; k <= 8; ++k) {
        const double s = 1e6;
        lead = std::max(lead, std::abs(conv_polynomial(k, s, 1.0) * std::tgamma(k + 1.0) / std::pow(s, k) - 1.0));
    }
    return {worst <= kPathTol && lead <= kLeadingTol,
            fmt("path max rel diff %.3g; leading coefficient max dev %.3g", worst, lead)};
}

Outcome qtds_validity()
{
    std::size_t checks = 0, violations = 0, matrices = 0;
    for (const auto& b : ensemble()) {
        const GreenKernel g(b);
        const auto gaps = g.split().gaps;
        if (gaps.m == 0 || gaps.l == 0) continue;
        ++matrices;
        for (const double t : grid_times()) {
            const ComplexMatrix gt = g(t);
            for (const auto p : kNorms) {
                QtdsParams q;
                q.norm_a = induced_norm(b, p);
                q.m = gaps.m;
                q.l = gaps.l;
                q.gamma_minus = gaps.gamma_minus;
                q.gamma_plus = gaps.gamma_plus;
                ++checks;
                if (induced_norm(gt, p) > qtds18_bound(q, t) * (1 + kDominationSlack)) ++violations;
            }
        }
    }
    QtdsParams hand;
    hand.norm_a = 2.0;
    hand.m = 1;
    hand.l = 1;
    hand.gamma_minus = 1.0;
    hand.gamma_plus = 1.0;
    const double hv = qtds18_bound(hand, 1.0);
    const bool hand_ok = hv == 2.0 * std::exp(-1.0);
    return {violations == 0 && hand_ok,
            fmt("%.0f matrices, %.0f checks, %.0f violations", static_cast<double>(matrices),
                static_cast<double>(checks), static_cast<double>(violations)) +
                (hand_ok ? "; hand value exact" : "; hand value mismatch")};
}

struct CliResult {
    int code;
    std::string out;
};

CliResult cli_call(const std::vector<std::string>& args)
{
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str()};
}

std::vector<double> exact_column(const std::string& csv)
{
    std::vector<double> v;
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        const auto a = line.find(',');
        const auto b = line.find(',', a + 1);
        v.push_back(std::stod(line.substr(a + 1, b - a - 1)));
    }
    return v;
}

std::filesystem::path scratch_dir()
{
    static const auto dir = [] {
        auto d = std::filesystem::temp_directory_path() / "greenbound_acceptance";
        std::filesystem::create_directories(d);
        return d;
    }();
    return dir;
}

std::string write_matrix(const std::string& name, const ComplexMatrix& m)
{
    const auto path = scratch_dir() / name;
    std::ofstream(path) << cli::to_matrix_json(m);
    return path.string();
}

Outcome corollary_end_to_end()
{
    std::mt19937_64 rng(kEnsembleSeed + 9);
    double worst = 0.0;
    int bad_exit = 0;
    const std::size_t count = 40;
    for (std::size_t i = 0; i < count; ++i) {
        const ComplexMatrix& b = ensemble()[i];
        const ComplexMatrix q = random_unitary(b.size(), rng);
        const std::string pb = write_matrix("tri.json", b);
        const std::string pa = write_matrix("conj.json", q * b * q.adjoint());
        const auto rb = cli_call({"compare", pb, "--norm", "2"});
        const auto ra = cli_call({"compare", pa, "--norm", "2"});
        if (rb.code != 0 || ra.code != 0) {
            ++bad_exit;
            continue;
        }
        const auto xb = exact_column(rb.out);
        const auto xa = exact_column(ra.out);
        for (std::size_t k = 0; k < xb.size(); ++k) worst = std::max(worst, std::abs(xa[k] - xb[k]));
    }
    return {bad_exit == 0 && worst <= kCorollaryTol,
            fmt("%.0f matrix pairs, max |exact_B - exact_QBQ^H| %.3g, %.0f failed runs",
                static_cast<double>(count), worst, bad_exit)};
}

Outcome schur_quality()
{
    std::mt19937_64 rng(kEnsembleSeed + 10);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(trial % 20);
        const ComplexMatrix a = random_matrix(n, rng);
        const auto s = schur_decompose(a);
        const double scale = static_cast<double>(n) * induced_norm(a, NormKind::infinity);
        const double rec = induced_norm(s.reconstruct() - a, NormKind::infinity);
        const double uni = induced_norm(s.q.adjoint() * s.q - ComplexMatrix::identity(n), NormKind::infinity);
        worst = std::max({worst, rec / scale, uni / scale});
        if (!is_upper_triangular(s.t, 0.0)) worst = 1e300;
    }
    return {worst <= kSchurTol, fmt("100 matrices, max residual / (n ||A||_inf) %.3g", worst)};
}

Outcome negative_control()
{
    std::size_t caught = 0, clean = 0, missed_mixed = 0;
    double tightest_missed = 1e300;
    for (std::size_t i = 0; i < ensemble().size(); ++i) {
        const std::string path = write_matrix("neg.json", ensemble()[i]);
        if (cli_call({"check", path}).code == cli::kOk) ++clean;
        if (cli_call({"check", path, "--bound-scale", "0.5"}).code == cli::kViolation) {
            ++caught;
            continue;
        }
        // Record how far the tightest bound stays from the exact norm on the
        // check grid, which is what a halved bound would have to beat.
        const cli::Analysis an(ensemble()[i], NormKind::two, {});
        if (an.gaps().m > 0 && an.gaps().l > 0) ++missed_mixed;
        for (const double t : cli::time_grid(-10.0, 10.0, 40)) {
            const double exact = an.exact_norm(t);
            for (const auto& b : {an.bound_triangular(t), an.bound_vanloan(t), an.bound_qtds18(t)})
                if (b) tightest_missed = std::min(tightest_missed, *b / exact);
        }
    }
    const std::size_t total = ensemble().size();
    std::string detail = fmt("%.0f/%.0f matrices exit 4 at scale 0.5", static_cast<double>(caught),
                             static_cast<double>(total)) +
                         fmt(" (%.0f exit 0 at scale 1)", static_cast<double>(clean));
    if (caught < total)
        detail += fmt("; %.0f missed, %.0f of them with a mixed spectrum; smallest bound/exact among"
                      " missed %.3f",
                      static_cast<double>(total - caught), static_cast<double>(missed_mixed),
                      tightest_missed);
    return {caught == total && clean == total, detail};
}

}  // namespace

int main()
{
    const auto t0 = std::chrono::steady_clock::now();
    std::printf("ensemble: %zu triangular matrices, n in 2..8, |Re lambda| >= 0.2, %zu times each\n",
                ensemble().size(), grid_times().size());
    run_criterion(1, "triangular bound dominates exact norm (p = 1, 2, inf)", theorem_domination);
    run_criterion(2, "entrywise bound dominates |G|", entrywise_domination);
    run_criterion(3, "closed-form convolution powers vs FFT convolution", convolution_closed_vs_numeric);
    run_criterion(4, "Green's function vs contour integral", contour_equivalence);
    run_criterion(5, "perturbation identity residual", perturbation_identity);
    run_criterion(6, "one-sided limit and exponential bound", one_sided_limit);
    run_criterion(7, "Bessel vs polynomial path, leading coefficient", polynomial_identity);
    run_criterion(8, "comparison bound dominates exact norm", qtds_validity);
    run_criterion(9, "unitary invariance through the CLI", corollary_end_to_end);
    run_criterion(10, "Schur reconstruction and unitarity", schur_quality);
    run_criterion(11, "negative control: halved bounds are caught", negative_control);
    std::filesystem::remove_all(scratch_dir());
    const auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s: %d failing criteria, %.2fs total\n", failures == 0 ? "ACCEPTED" : "REJECTED",
                failures, dt);
    return failures == 0 ? 0 : 1;
}
