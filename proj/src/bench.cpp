#include "ghostmg/bench.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>

namespace ghostmg {

namespace {

double circle_phi(double x, double y) {
    return std::hypot(x - std::sqrt(2.0) / 20.0, y - std::sqrt(3.0) / 30.0) - 0.563;
}

double ellipse_phi(double x, double y) {
    const double c = std::cos(std::numbers::pi / 6.0);
    const double s = std::sin(std::numbers::pi / 6.0);
    const double px = c * x - s * y - std::sqrt(2.0) / 20.0;
    const double py = s * x + c * y - std::sqrt(3.0) / 30.0;
    return px * px / (0.563 * 0.563) + py * py / (0.263 * 0.263) - 1.0;
}

double saddle_phi(double x, double y) {
    const double u = x / 2.0 - std::sqrt(3.0) / 2.0 * y;
    const double v = 1.5 * std::sqrt(3.0) * x + 1.5 * y - 1.0;
    return 9.0 * u * u + v * v * std::sin(v) - 1.0;
}

double flower_phi(double x, double y) {
    const double r = std::hypot(x, y);
    if (r == 0.0) return -0.5;
    const double r5 = r * r * r * r * r;
    const double x2 = x * x;
    const double y2 = y * y;
    return r - 0.5 - (y2 * y2 * y + 5.0 * x2 * x2 * y - 10.0 * x2 * y2 * y) / (5.0 * r5);
}

const std::vector<DomainSpec>& registry() {
    static const std::vector<DomainSpec> specs{
        {"circle", circle_phi, false},
        {"ellipse", ellipse_phi, true},
        {"saddle", saddle_phi, true},
        {"flower", flower_phi, true},
        {"interval", {}, false},
    };
    return specs;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_short(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t k = 0; k < line.size(); ++k) {
        const char c = line[k];
        if (quoted) {
            if (c == '"' && k + 1 < line.size() && line[k + 1] == '"') {
                fields.back() += '"';
                ++k;
            } else if (c == '"') {
                quoted = false;
            } else {
                fields.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back();
        } else {
            fields.back() += c;
        }
    }
    if (quoted) throw InvalidArgument("unterminated quote in CSV line: " + line);
    return fields;
}

template <class T>
T parse_number(const std::string& s, const char* what) {
    T v{};
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw InvalidArgument(std::string("bad ") + what + " value '" + s + "'");
    }
    return v;
}

const char* kRowHeader =
    "domain,N,N_c,nu1,nu2,lambda,delta_over_h,cycle,smoother,rho,converged,iterations,wall_ms,note";

void write_row_fields(std::ostream& out, const ExperimentRow& r) {
    out << r.domain << ',' << r.n << ',' << r.n_c << ',' << r.nu1 << ',' << r.nu2 << ','
        << r.lambda << ',' << format_double(r.delta_over_h) << ',' << r.cycle << ',' << r.smoother
        << ',' << (r.rho ? format_double(*r.rho) : std::string()) << ','
        << (r.converged ? "true" : "false") << ',' << r.iterations << ','
        << format_double(r.wall_ms) << ',' << csv_quote(r.note);
}

}  // namespace

const DomainSpec& domain_spec(const std::string& name) {
    for (const auto& d : registry()) {
        if (d.name == name) return d;
    }
    throw InvalidArgument("unknown domain '" + name + "'");
}

const std::vector<std::string>& domain_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& d : registry()) v.push_back(d.name);
        return v;
    }();
    return names;
}

BcKind left_dirichlet_split(const Point& b) {
    return b.x <= 0.0 ? BcKind::Dirichlet : BcKind::Neumann;
}

ExperimentRow run_experiment(const ExperimentArgs& args, SolveReport* report) {
    const DomainSpec& spec = domain_spec(args.domain);
    ExperimentRow row;
    row.domain = args.domain;
    row.n = args.n;
    row.n_c = args.n_c;
    row.nu1 = args.nu1;
    row.nu2 = args.nu2;
    row.lambda = args.lambda;
    row.delta_over_h = args.delta_h;
    row.cycle = to_string(args.cycle);
    row.smoother = to_string(args.smoother);

    SolveReport rep;
    try {
        if (!spec.formula) {
            Config1D cfg;
            cfg.nu1 = args.nu1;
            cfg.nu2 = args.nu2;
            cfg.kind = args.cycle;
            cfg.rho = args.rho;
            rep = solve_1d(args.a, args.b, args.n, args.n_c, cfg);
        } else {
            CycleConfig cfg;
            cfg.nu1 = args.nu1;
            cfg.nu2 = args.nu2;
            cfg.kind = args.cycle;
            cfg.smoother.kind = args.smoother;
            cfg.smoother.lambda = args.lambda;
            cfg.smoother.delta_h = args.delta_h;
            const auto start = std::chrono::steady_clock::now();
            const Hierarchy hier = build_hierarchy(spec.formula, args.n, args.n_c, spec.needs_reinit,
                                                   left_dirichlet_split, cfg);
            rep = solve_homogeneous(hier, default_initial_guess(hier.finest().domain), args.rho);
            rep.wall_ms =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                    .count();
        }
    } catch (const GeometryError& e) {
        row.note = std::string("geometry: ") + e.what();
        return row;
    } catch (const NumericalError& e) {
        row.note = std::string("numerical: ") + e.what();
        return row;
    }
    if (!rep.rho.empty()) row.rho = rep.final_rho;
    row.converged = rep.converged;
    row.iterations = rep.iterations;
    row.wall_ms = rep.wall_ms;
    if (rep.diverged) row.note = "diverged";
    if (report != nullptr) *report = std::move(rep);
    return row;
}

void write_rows_csv(std::ostream& out, const std::vector<ExperimentRow>& rows) {
    out << kRowHeader << '\n';
    for (const auto& r : rows) {
        write_row_fields(out, r);
        out << '\n';
    }
    if (!out) throw std::runtime_error("failed to write CSV output");
}

std::vector<ExperimentRow> read_rows_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kRowHeader) throw InvalidArgument("missing or wrong CSV header");
    std::vector<ExperimentRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 14) throw InvalidArgument("expected 14 fields in CSV line: " + line);
        ExperimentRow r;
        r.domain = f[0];
        r.n = parse_number<int>(f[1], "N");
        r.n_c = parse_number<int>(f[2], "N_c");
        r.nu1 = parse_number<int>(f[3], "nu1");
        r.nu2 = parse_number<int>(f[4], "nu2");
        r.lambda = parse_number<int>(f[5], "lambda");
        r.delta_over_h = parse_number<double>(f[6], "delta_over_h");
        r.cycle = f[7];
        r.smoother = f[8];
        if (!f[9].empty()) r.rho = parse_number<double>(f[9], "rho");
        if (f[10] != "true" && f[10] != "false") throw InvalidArgument("bad converged value '" + f[10] + "'");
        r.converged = f[10] == "true";
        r.iterations = parse_number<int>(f[11], "iterations");
        r.wall_ms = parse_number<double>(f[12], "wall_ms");
        r.note = f[13];
        rows.push_back(std::move(r));
    }
    return rows;
}

void emit_residual_history(std::ostream& out, const SolveReport& report) {
    out << "iteration,residual,rho\n";
    for (std::size_t m = 0; m < report.residuals.size(); ++m) {
        out << m << ',' << format_double(report.residuals[m]) << ',';
        if (m >= 1 && m - 1 < report.rho.size()) out << format_double(report.rho[m - 1]);
        out << '\n';
    }
    if (!out) throw std::runtime_error("failed to write residual history");
}

// ---------------------------------------------------------------------------
// Published tables

namespace {

constexpr double kNc = -1.0;  // marks a non-convergent cell

struct Triangle {
    std::vector<int> coarse;  // N_c per row
    // values per row for N = 16, 32, 64, 128, 256 restricted to N > N_c
    std::vector<std::vector<double>> values;
};

std::vector<TableCell> triangle_cells(const std::string& domain, int nu1, int nu2,
                                      const Triangle& t, const std::string& label) {
    const std::vector<int> ns{16, 32, 64, 128, 256};
    std::vector<TableCell> cells;
    for (std::size_t row = 0; row < t.coarse.size(); ++row) {
        std::size_t col = 0;
        for (int n : ns) {
            if (n <= t.coarse[row]) continue;
            TableCell c;
            c.args.domain = domain;
            c.args.n = n;
            c.args.n_c = t.coarse[row];
            c.args.nu1 = nu1;
            c.args.nu2 = nu2;
            c.args.lambda = 5;
            c.args.delta_h = 3.0;
            c.args.cycle = CycleKind::W;
            const double v = t.values[row].at(col++);
            if (v != kNc) c.reference = v;
            c.label = label;
            cells.push_back(c);
        }
    }
    return cells;
}

std::vector<TableCell> badrho_cells() {
    struct Sub {
        int nu1, nu2;
        std::string label;
        std::vector<std::array<double, 3>> values;  // per N: tgcs, v, w
    };
    const std::vector<Sub> subs{
        {1, 1, "nu1=1 nu2=1", {{0.67, 0.68, 0.71}, {0.68, 0.73, 0.68}, {0.70, 0.71, 0.70}}},
        {2, 1, "nu1=2 nu2=1", {{0.58, 0.72, 0.58}, {0.58, 0.73, 0.59}, {0.61, 0.83, 0.60}}},
    };
    const std::vector<int> ns{64, 128, 256};
    const std::array<CycleKind, 3> kinds{CycleKind::Tgcs, CycleKind::V, CycleKind::W};
    std::vector<TableCell> cells;
    for (const auto& s : subs) {
        for (std::size_t k = 0; k < ns.size(); ++k) {
            for (std::size_t c = 0; c < kinds.size(); ++c) {
                TableCell cell;
                cell.args.domain = "circle";
                cell.args.n = ns[k];
                cell.args.n_c = kinds[c] == CycleKind::Tgcs ? ns[k] / 2 : 8;
                cell.args.nu1 = s.nu1;
                cell.args.nu2 = s.nu2;
                cell.args.lambda = 0;
                cell.args.cycle = kinds[c];
                cell.reference = s.values[k][c];
                cell.label = s.label;
                cells.push_back(cell);
            }
        }
    }
    return cells;
}

std::vector<TableCell> concat(std::vector<TableCell> a, const std::vector<TableCell>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

const std::vector<int> kCoarse{8, 16, 32, 64, 128};

}  // namespace

const std::vector<std::string>& table_ids() {
    static const std::vector<std::string> ids{"badrho", "rhoC", "rhoE", "rhoSF3-left", "rhoSF3-right", "1d"};
    return ids;
}

std::vector<TableCell> table_cells(const std::string& id) {
    if (id == "badrho") return badrho_cells();
    if (id == "rhoC") {
        const Triangle nu2{kCoarse,
                           {{0.052, 0.053, 0.11, 0.13, 0.14},
                            {0.061, 0.11, 0.13, 0.14},
                            {0.11, 0.13, 0.14},
                            {0.13, 0.14},
                            {0.14}}};
        const Triangle nu3{kCoarse,
                           {{0.06, 0.03, 0.09, 0.08, 0.08},
                            {0.04, 0.09, 0.08, 0.08},
                            {0.09, 0.08, 0.08},
                            {0.09, 0.08},
                            {0.09}}};
        return concat(triangle_cells("circle", 1, 1, nu2, "nu=2"),
                      triangle_cells("circle", 2, 1, nu3, "nu=3"));
    }
    if (id == "rhoE") {
        const Triangle nu2{kCoarse,
                           {{0.34, 0.09, 0.14, 0.14, 0.15},
                            {0.65, 0.45, 0.19, 0.15},
                            {0.14, 0.14, 0.15},
                            {0.15, 0.15},
                            {0.15}}};
        const Triangle nu3{kCoarse,
                           {{0.44, 0.06, 0.12, 0.11, 0.09},
                            {0.55, 0.30, 0.09, 0.09},
                            {0.13, 0.10, 0.09},
                            {0.12, 0.08},
                            {0.09}}};
        return concat(triangle_cells("ellipse", 1, 1, nu2, "nu=2"),
                      triangle_cells("ellipse", 2, 1, nu3, "nu=3"));
    }
    if (id == "rhoSF3-left") {
        const Triangle t{kCoarse,
                         {{0.36, 0.08, 0.09, 0.12, 0.09},
                          {0.12, 0.09, 0.12, 0.09},
                          {0.09, 0.12, 0.09},
                          {0.13, 0.09},
                          {0.09}}};
        return triangle_cells("saddle", 2, 1, t, "nu=3");
    }
    if (id == "rhoSF3-right") {
        const Triangle t{kCoarse,
                         {{kNc, kNc, kNc, kNc, kNc},
                          {0.89, 0.75, 0.50, 0.25},
                          {0.49, 0.25, 0.12},
                          {0.24, 0.11},
                          {0.09}}};
        return triangle_cells("flower", 2, 1, t, "nu=3");
    }
    if (id == "1d") {
        std::vector<TableCell> cells;
        for (const auto& [nu, ref] : std::vector<std::pair<int, double>>{{2, 0.185}, {3, 0.122}}) {
            TableCell c;
            c.args.domain = "interval";
            c.args.n = 64;
            c.args.n_c = 8;
            c.args.nu1 = nu;
            c.args.nu2 = 0;
            c.args.lambda = 0;
            c.args.cycle = CycleKind::V;
            c.reference = ref;
            c.label = "nu=" + std::to_string(nu);
            cells.push_back(c);
        }
        return cells;
    }
    throw InvalidArgument("unknown table id '" + id + "'");
}

std::vector<TableResult> run_table(const std::string& id) {
    std::vector<TableResult> results;
    for (const auto& cell : table_cells(id)) {
        TableResult res;
        res.cell = cell;
        res.row = run_experiment(cell.args);
        if (cell.reference && res.row.rho) {
            res.abs_diff = std::abs(*res.row.rho - *cell.reference);
            res.flagged = *res.abs_diff > 0.05 || !res.row.converged;
        } else {
            // reference "n.c." or no measurement: compare convergence status only
            res.flagged = cell.reference.has_value() == !res.row.converged;
        }
        results.push_back(std::move(res));
    }
    return results;
}

void write_table_csv(std::ostream& out, const std::vector<TableResult>& results) {
    out << kRowHeader << ",table_label,reference_rho,abs_diff,flagged\n";
    for (const auto& r : results) {
        write_row_fields(out, r.row);
        out << ',' << csv_quote(r.cell.label) << ','
            << (r.cell.reference ? format_double(*r.cell.reference) : std::string("n.c.")) << ','
            << (r.abs_diff ? format_double(*r.abs_diff) : std::string()) << ','
            << (r.flagged ? "true" : "false") << '\n';
    }
    if (!out) throw std::runtime_error("failed to write CSV output");
}

void write_table_markdown(std::ostream& out, const std::vector<TableResult>& results) {
    out << "| label | domain | N | N_c | cycle | measured | reference | diff | flag |\n"
        << "|---|---|---|---|---|---|---|---|---|\n";
    for (const auto& r : results) {
        const std::string measured =
            r.row.rho ? (r.row.converged ? format_short(*r.row.rho) : "n.c. (" + format_short(*r.row.rho) + ")")
                      : "n.c.";
        out << "| " << r.cell.label << " | " << r.row.domain << " | " << r.row.n << " | "
            << r.row.n_c << " | " << r.row.cycle << " | " << measured << " | "
            << (r.cell.reference ? format_short(*r.cell.reference) : std::string("n.c.")) << " | "
            << (r.abs_diff ? format_short(*r.abs_diff) : std::string("-")) << " | "
            << (r.flagged ? "!" : "") << " |\n";
    }
}

SmootherComparison run_smoother_comparison(int n, const std::vector<int>& lambdas, int nu1, int nu2,
                                           int mu_iterations) {
    SmootherComparison cmp;
    const DomainSpec& circle = domain_spec("circle");
    const LevelSetField phi = sample_level_set(GridSpec(n), circle.formula);
    const DiscreteDomain domain(phi, left_dirichlet_split);
    const ProblemData zero = zero_problem(domain);
    const GridFunction u0 = default_initial_guess(domain);

    auto measure = [&](SmootherKind kind, int lambda) {
        ExperimentArgs args;
        args.domain = "circle";
        args.n = n;
        args.n_c = n / 2;
        args.nu1 = nu1;
        args.nu2 = nu2;
        args.lambda = lambda;
        args.cycle = CycleKind::Tgcs;
        args.smoother = kind;
        cmp.rho.push_back({kind, lambda, run_experiment(args)});

        SmootherConfig cfg;
        cfg.kind = kind;
        cfg.lambda = lambda;
        const auto mu = smoothing_factor_series(domain, cfg, zero, u0, mu_iterations);
        for (std::size_t m = 0; m < mu.size(); ++m) {
            cmp.mu.push_back({kind, lambda, static_cast<int>(m + 1), mu[m]});
        }
    };
    for (int lambda : lambdas) measure(SmootherKind::GsLex, lambda);
    for (int lambda : lambdas) measure(SmootherKind::Kaczmarz, lambda);
    measure(SmootherKind::Block, 0);
    return cmp;
}

void write_comparison_csv(std::ostream& out, const SmootherComparison& cmp) {
    out << "series,smoother,lambda,m,value\n";
    for (const auto& p : cmp.rho) {
        out << "rho," << to_string(p.smoother) << ',' << p.lambda << ",,"
            << (p.row.rho ? format_double(*p.row.rho) : std::string()) << '\n';
    }
    for (const auto& p : cmp.mu) {
        out << "mu," << to_string(p.smoother) << ',' << p.lambda << ',' << p.m << ','
            << format_double(p.mu) << '\n';
    }
    if (!out) throw std::runtime_error("failed to write CSV output");
}

}  // namespace ghostmg
