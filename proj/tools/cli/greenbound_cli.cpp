#include "greenbound_cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "greenbound/schur.hpp"

namespace greenbound::cli {

namespace {

bool is_triangular_input(const ComplexMatrix& a)
{
    return is_upper_triangular(a, triangular_tolerance(a));
}

ComplexMatrix triangular_form(const ComplexMatrix& a)
{
    if (is_triangular_input(a)) return a;
    return schur_decompose(a).t;
}

std::string format_complex(Complex z)
{
    std::string s = format_double(z.real());
    s += z.imag() < 0.0 || std::signbit(z.imag()) ? "-" : "+";
    s += format_double(std::abs(z.imag()));
    s += "i";
    return s;
}

std::vector<double> logspace(double lo, double hi, std::size_t count)
{
    std::vector<double> v(count);
    if (count == 1) {
        v[0] = hi;
        return v;
    }
    const double a = std::log(lo);
    const double b = std::log(hi);
    for (std::size_t i = 0; i < count; ++i)
        v[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
    v.back() = hi;
    return v;
}

NormKind parse_norm(const std::string& s)
{
    if (s == "1") return NormKind::one;
    if (s == "2") return NormKind::two;
    if (s == "inf") return NormKind::infinity;
    throw ParseError("unknown norm '" + s + "' (expected 1, 2 or inf)");
}

void write_cell(std::ostream& out, const std::optional<double>& v)
{
    out << ',';
    if (v) out << format_double(*v);
}

}  // namespace

ComplexMatrix parse_matrix_json(std::string_view text)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("n") || !doc.contains("data"))
        throw ParseError("matrix file must be an object with \"n\" and \"data\"");
    const auto& jn = doc["n"];
    if (!jn.is_number_integer() || jn.get<long long>() < 1)
        throw ParseError("\"n\" must be a positive integer");
    const auto n = static_cast<std::size_t>(jn.get<long long>());
    const auto& data = doc["data"];
    if (!data.is_array() || data.size() != n)
        throw ParseError("\"data\" must hold exactly n rows");

    std::vector<Complex> entries;
    entries.reserve(n * n);
    for (const auto& row : data) {
        if (!row.is_array() || row.size() != n)
            throw ParseError("every row of \"data\" must hold exactly n entries (square matrix)");
        for (const auto& e : row) {
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
                throw ParseError("entries must be [re, im] number pairs");
            const double re = e[0].get<double>();
            const double im = e[1].get<double>();
            if (!std::isfinite(re) || !std::isfinite(im))
                throw ParseError("entries must be finite");
            entries.emplace_back(re, im);
        }
    }
    return ComplexMatrix::from_row_major(n, std::move(entries));
}

ComplexMatrix read_matrix_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open matrix file '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_matrix_json(buf.str());
}

std::string to_matrix_json(const ComplexMatrix& m)
{
    nlohmann::json data = nlohmann::json::array();
    for (std::size_t i = 0; i < m.size(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < m.size(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
        data.push_back(std::move(row));
    }
    return nlohmann::json{{"n", m.size()}, {"data", std::move(data)}}.dump();
}

std::string format_double(double x)
{
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

std::vector<double> time_grid(double t_min, double t_max, std::size_t steps)
{
    if (steps == 0) throw ParseError("--steps must be positive");
    if (!std::isfinite(t_min) || !std::isfinite(t_max) || t_min > t_max)
        throw ParseError("time range must satisfy t-min <= t-max");
    if (t_min == 0.0 && t_max == 0.0) throw ParseError("time range collapses to t = 0");

    std::vector<double> grid;
    if (t_min < 0.0 && t_max > 0.0) {
        const double lo = 1e-3 * std::max(-t_min, t_max);
        const std::size_t neg = steps / 2;
        const std::size_t pos = steps - neg;
        if (neg > 0) {
            auto side = logspace(std::min(lo, -t_min), -t_min, neg);
            for (auto it = side.rbegin(); it != side.rend(); ++it) grid.push_back(-*it);
        }
        for (double v : logspace(std::min(lo, t_max), t_max, pos)) grid.push_back(v);
    } else if (t_min == 0.0) {
        grid = logspace(1e-3 * t_max, t_max, steps);
    } else if (t_max == 0.0) {
        for (double v : logspace(-1e-3 * t_min, -t_min, steps)) grid.insert(grid.begin(), -v);
    } else {
        grid.resize(steps);
        for (std::size_t i = 0; i < steps; ++i) {
            grid[i] = steps == 1 ? t_min
                                 : t_min + (t_max - t_min) * static_cast<double>(i) /
                                               static_cast<double>(steps - 1);
        }
        grid.back() = steps == 1 ? t_min : t_max;
    }
    return grid;
}

BoundSelection parse_bound_selection(std::string_view name)
{
    if (name == "all") return {};
    BoundSelection s{false, false, false, false};
    if (name == "triangular")
        s.triangular = true;
    else if (name == "entrywise")
        s.entrywise = true;
    else if (name == "vanloan")
        s.vanloan = true;
    else if (name == "qtds18")
        s.qtds18 = true;
    else
        throw ParseError("unknown bound '" + std::string(name) + "'");
    return s;
}

Analysis::Analysis(const ComplexMatrix& a, NormKind requested, const GammaOverrides& overrides,
                   std::ostream* notes)
    : t_(triangular_form(a)),
      schur_applied_(!is_triangular_input(a)),
      norm_(schur_applied_ ? NormKind::two : requested),
      gaps_(spectral_gaps(t_)),
      gamma_minus_(gaps_.gamma_minus),
      gamma_plus_(gaps_.gamma_plus),
      split_(split_triangular(t_)),
      norm_n_(induced_norm(split_.strictly_upper, norm_)),
      norm_t_(induced_norm(t_, norm_)),
      kernel_(a)
{
    if (schur_applied_ && notes) {
        *notes << "note: input is not upper triangular; bounds use its Schur form"
               << (requested != NormKind::two ? " and the two-norm" : "") << '\n';
    }
    if (overrides.gamma_minus) {
        const double g = *overrides.gamma_minus;
        if (!(g > 0.0) || !std::isfinite(g) || g > gaps_.gamma_minus)
            throw BadOverride("--gamma-minus " + format_double(g) +
                              " leaves an eigenvalue inside the strip (maximum " +
                              format_double(gaps_.gamma_minus) + ")");
        gamma_minus_ = g;
    }
    if (overrides.gamma_plus) {
        const double g = *overrides.gamma_plus;
        if (!(g > 0.0) || !std::isfinite(g) || g > gaps_.gamma_plus)
            throw BadOverride("--gamma-plus " + format_double(g) +
                              " leaves an eigenvalue inside the strip (maximum " +
                              format_double(gaps_.gamma_plus) + ")");
        gamma_plus_ = g;
    }
}

double Analysis::exact_norm(double t) const
{
    return induced_norm(kernel_(t), norm_);
}

std::optional<double> Analysis::bound_triangular(double t) const
{
    BoundParams p;
    p.n = t_.size();
    p.norm_n = norm_n_;
    p.gamma_minus = gamma_minus_;
    p.gamma_plus = gamma_plus_;
    p.norm_kind = norm_;
    return triangular_bound(p, t);
}

std::optional<double> Analysis::bound_entrywise_norm(double t) const
{
    // The entrywise bound lives in the coordinates of the triangular matrix and
    // is stated for the 1- and inf-norms only.
    if (schur_applied_ || norm_ == NormKind::two) return std::nullopt;
    return induced_norm(
        entrywise_bound(split_.diagonal, split_.strictly_upper, gamma_minus_, gamma_plus_, t),
        norm_);
}

std::optional<double> Analysis::bound_vanloan(double t) const
{
    // Only where the Green's function is a plain exponential: t > 0 with the
    // whole spectrum on the left, or t < 0 with the whole spectrum on the right
    // (then G = -e^{(-B)|t|}).
    if (t > 0.0 && gaps_.l == 0) return van_loan_bound(gaps_.alpha, norm_n_, t_.size(), t);
    if (t < 0.0 && gaps_.m == 0) return van_loan_bound(-gaps_.gamma_plus, norm_n_, t_.size(), -t);
    return std::nullopt;
}

std::optional<double> Analysis::bound_qtds18(double t) const
{
    if (gaps_.m == 0 || gaps_.l == 0) return std::nullopt;
    QtdsParams p;
    p.norm_a = norm_t_;
    p.m = gaps_.m;
    p.l = gaps_.l;
    p.gamma_minus = gamma_minus_;
    p.gamma_plus = gamma_plus_;
    return qtds18_bound(p, t);
}

std::vector<GridRow> tabulate(const Analysis& analysis, std::span<const double> grid,
                              const BoundSelection& selection)
{
    std::vector<GridRow> rows;
    rows.reserve(grid.size());
    for (const double t : grid) {
        GridRow r;
        r.t = t;
        r.exact_norm = analysis.exact_norm(t);
        if (selection.triangular) {
            r.bound_triangular = analysis.bound_triangular(t);
            if (r.exact_norm > 0.0) r.ratio_triangular = *r.bound_triangular / r.exact_norm;
        }
        if (selection.entrywise) r.bound_entrywise_norm = analysis.bound_entrywise_norm(t);
        if (selection.vanloan) r.bound_vanloan = analysis.bound_vanloan(t);
        if (selection.qtds18) r.bound_qtds18 = analysis.bound_qtds18(t);
        rows.push_back(r);
    }
    return rows;
}

void write_compare_csv(std::ostream& out, std::span<const GridRow> rows)
{
    out << kCompareHeader << '\n';
    for (const auto& r : rows) {
        out << format_double(r.t) << ',' << format_double(r.exact_norm);
        write_cell(out, r.bound_triangular);
        write_cell(out, r.bound_entrywise_norm);
        write_cell(out, r.bound_vanloan);
        write_cell(out, r.bound_qtds18);
        write_cell(out, r.ratio_triangular);
        out << '\n';
    }
}

namespace {

struct Options {
    std::string matrix_path;
    double t_min = -10.0;
    double t_max = 10.0;
    std::size_t steps = 40;
    std::string norm = "2";
    std::optional<double> gamma_minus;
    std::optional<double> gamma_plus;
    std::string bound = "all";
    std::string output;
    double bound_scale = 1.0;
};

void add_grid_flags(CLI::App* cmd, Options& o)
{
    cmd->add_option("--t-min", o.t_min, "Start of the time range")->capture_default_str();
    cmd->add_option("--t-max", o.t_max, "End of the time range")->capture_default_str();
    cmd->add_option("--steps", o.steps, "Number of grid points (t = 0 is never sampled)")
        ->capture_default_str();
    cmd->add_option("--norm", o.norm, "Induced norm: 1, 2 or inf")->capture_default_str();
    cmd->add_option("--gamma-minus", o.gamma_minus, "Left gap override (must keep strip empty)");
    cmd->add_option("--gamma-plus", o.gamma_plus, "Right gap override (must keep strip empty)");
    cmd->add_option("--bound", o.bound, "triangular, entrywise, vanloan, qtds18 or all")
        ->capture_default_str();
    cmd->add_option("--output", o.output, "Write to PATH instead of standard output");
    cmd->add_option("--bound-scale", o.bound_scale)->group("");
}

int cmd_gaps(const Options& o, std::ostream& out)
{
    const ComplexMatrix a = read_matrix_file(o.matrix_path);
    const ComplexMatrix t = triangular_form(a);
    const SpectralGaps g = spectral_gaps(t);
    out << "eigenvalues:\n";
    for (const auto& z : t.diagonal_entries()) out << "  " << format_complex(z) << '\n';
    out << "gamma_minus=" << format_double(g.gamma_minus)
        << " gamma_plus=" << format_double(g.gamma_plus) << " gamma=" << format_double(g.gamma())
        << " alpha=" << format_double(g.alpha) << " m=" << g.m << " l=" << g.l << '\n';
    return kOk;
}

Analysis make_analysis(const Options& o, std::ostream& err)
{
    const ComplexMatrix a = read_matrix_file(o.matrix_path);
    return Analysis(a, parse_norm(o.norm), {o.gamma_minus, o.gamma_plus}, &err);
}

int cmd_table(const std::string& which, const Options& o, std::ostream& out, std::ostream& err)
{
    const Analysis analysis = make_analysis(o, err);
    const auto grid = time_grid(o.t_min, o.t_max, o.steps);
    const BoundSelection sel = parse_bound_selection(o.bound);

    std::ofstream file;
    std::ostream* sink = &out;
    if (!o.output.empty()) {
        file.open(o.output);
        if (!file) throw ParseError("cannot open output file '" + o.output + "'");
        sink = &file;
    }

    if (which == "exact") {
        *sink << "t,exact_norm\n";
        for (const double t : grid)
            *sink << format_double(t) << ',' << format_double(analysis.exact_norm(t)) << '\n';
        return kOk;
    }
    if (which == "bound") {
        *sink << 't';
        if (sel.triangular) *sink << ",bound_triangular";
        if (sel.entrywise) *sink << ",bound_entrywise_norm";
        if (sel.vanloan) *sink << ",bound_vanloan";
        if (sel.qtds18) *sink << ",bound_qtds18";
        *sink << '\n';
        for (const double t : grid) {
            *sink << format_double(t);
            if (sel.triangular) write_cell(*sink, analysis.bound_triangular(t));
            if (sel.entrywise) write_cell(*sink, analysis.bound_entrywise_norm(t));
            if (sel.vanloan) write_cell(*sink, analysis.bound_vanloan(t));
            if (sel.qtds18) write_cell(*sink, analysis.bound_qtds18(t));
            *sink << '\n';
        }
        return kOk;
    }
    write_compare_csv(*sink, tabulate(analysis, grid, sel));
    return kOk;
}

int cmd_check(const Options& o, std::ostream& out, std::ostream& err)
{
    const Analysis analysis = make_analysis(o, err);
    const auto grid = time_grid(o.t_min, o.t_max, o.steps);
    const auto rows = tabulate(analysis, grid, parse_bound_selection(o.bound));
    std::size_t comparisons = 0;
    for (const auto& r : rows) {
        const std::pair<const char*, const std::optional<double>*> bounds[] = {
            {"triangular", &r.bound_triangular},
            {"entrywise", &r.bound_entrywise_norm},
            {"vanloan", &r.bound_vanloan},
            {"qtds18", &r.bound_qtds18}};
        for (const auto& [name, value] : bounds) {
            if (!value->has_value()) continue;
            ++comparisons;
            const double bound = o.bound_scale * **value;
            if (r.exact_norm > bound * (1.0 + 1e-9)) {
                out << "violation: bound=" << name << " t=" << format_double(r.t)
                    << " exact=" << format_double(r.exact_norm)
                    << " bound=" << format_double(bound) << '\n';
                return kViolation;
            }
        }
    }
    out << "ok: " << rows.size() << " grid points, " << comparisons << " comparisons\n";
    return kOk;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Green's function of the bounded-solutions problem and its norm bounds"};
    app.require_subcommand(1);
    Options o;

    auto* gaps = app.add_subcommand("gaps", "Report eigenvalues and spectral gaps");
    gaps->add_option("matrix", o.matrix_path, "Matrix JSON file")->required();

    std::vector<CLI::App*> tables;
    for (const auto& [name, help] :
         {std::pair{"exact", "Exact Green's function norms over a time grid"},
          std::pair{"bound", "Bound values over a time grid"},
          std::pair{"compare", "Exact norms against every applicable bound (CSV)"},
          std::pair{"check", "Verify that every applicable bound dominates the exact norm"}}) {
        auto* cmd = app.add_subcommand(name, help);
        cmd->add_option("matrix", o.matrix_path, "Matrix JSON file")->required();
        add_grid_flags(cmd, o);
        tables.push_back(cmd);
    }

    std::vector<std::string> argv_store;
    argv_store.emplace_back("greenbound");
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& s : argv_store) argv.push_back(s.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kParseError;
    }

    try {
        if (gaps->parsed()) return cmd_gaps(o, out);
        for (auto* cmd : tables) {
            if (!cmd->parsed()) continue;
            if (cmd->get_name() == "check") return cmd_check(o, out, err);
            return cmd_table(cmd->get_name(), o, out, err);
        }
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kParseError;
    } catch (const SpectrumOnAxis& e) {
        err << "error: " << e.what() << '\n';
        return kIllPosed;
    } catch (const BadOverride& e) {
        err << "error: " << e.what() << '\n';
        return kBadOverride;
    } catch (const DomainError& e) {
        // Malformed matrices (zero size, non-finite entries) surface here.
        err << "error: " << e.what() << '\n';
        return kParseError;
    } catch (const Error& e) {
        // Convergence trouble means the spectrum sits too close to the axis
        // for the projectors to be resolved.
        err << "error: " << e.what() << '\n';
        return kIllPosed;
    }
    return kParseError;
}

}  // namespace greenbound::cli
