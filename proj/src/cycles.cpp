#include "ghostmg/cycles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

namespace ghostmg {

const char* to_string(CycleKind k) {
    switch (k) {
        case CycleKind::Tgcs: return "tgcs";
        case CycleKind::V: return "v";
        case CycleKind::W: return "w";
    }
    return "unknown";
}

CycleKind parse_cycle_kind(const std::string& s) {
    if (s == "tgcs") return CycleKind::Tgcs;
    if (s == "v") return CycleKind::V;
    if (s == "w") return CycleKind::W;
    throw InvalidArgument("unknown cycle '" + s + "' (expected tgcs, v or w)");
}

void CycleConfig::validate() const {
    if (nu1 < 0 || nu2 < 0 || nu1 + nu2 == 0) {
        throw InvalidArgument("smoothing counts must be non-negative with nu1 + nu2 >= 1");
    }
    if (extension.sweeps < 0 || extension.band_h <= 0.0) {
        throw InvalidArgument("extension band and sweep count must be positive");
    }
    smoother.validate();
}

Level::Level(LevelSetField phi, const BoundarySplit& split, const CycleConfig& cfg)
    : domain(std::move(phi), split),
      smoother(domain, cfg.smoother),
      extension(build_extension_plan(domain, cfg.extension)),
      support(extended_support(domain, extension)) {}

Hierarchy::Hierarchy(const LevelSetField& finest, int n_coarsest, const BoundarySplit& split,
                     const CycleConfig& cfg)
    : cfg_(cfg) {
    cfg_.validate();
    const int n = finest.spec().n();
    if (n_coarsest < 4 || n_coarsest >= n || n % n_coarsest != 0 ||
        ((n / n_coarsest) & (n / n_coarsest - 1)) != 0) {
        throw InvalidArgument("coarsest grid must be N / 2^k with 4 <= N_c < N (got N=" +
                              std::to_string(n) + ", N_c=" + std::to_string(n_coarsest) + ")");
    }
    if (cfg_.kind == CycleKind::Tgcs && n_coarsest != n / 2) {
        throw InvalidArgument("the two-grid cycle needs N_c = N/2");
    }
    LevelSetField phi = finest;
    while (true) {
        const int level_n = phi.spec().n();
        levels_.push_back(std::make_unique<Level>(phi, split, cfg_));
        if (level_n == n_coarsest) break;
        phi = inject_level_set(phi);
    }
    coarse_solver_ = std::make_unique<DirectSolver>(levels_.back()->domain);
}

double hierarchy_reinit_band(int n_coarsest) { return std::min(4.0 * 2.0 / n_coarsest, 3.0); }

int hierarchy_reinit_steps(int n, int n_coarsest) {
    const double h = 2.0 / n;
    // pseudo-time step h/2: information travels h/2 per step
    return static_cast<int>(std::ceil(2.0 * hierarchy_reinit_band(n_coarsest) / h)) + 50;
}

Hierarchy build_hierarchy(const LevelSetFormula& formula, int n, int n_coarsest, bool reinit,
                          const BoundarySplit& split, const CycleConfig& cfg) {
    LevelSetField phi = sample_level_set(GridSpec(n), formula);
    if (reinit) {
        phi = reinitialize(phi, hierarchy_reinit_band(n_coarsest),
                           hierarchy_reinit_steps(n, n_coarsest));
    }
    return Hierarchy(phi, n_coarsest, split, cfg);
}

void mg_cycle(GridFunction& u, const ProblemData& prob, const Hierarchy& hier, std::size_t level) {
    if (level + 1 >= hier.size()) throw InvalidArgument("mg_cycle called on the coarsest level");
    const CycleConfig& cfg = hier.config();
    const Level& fine = hier.level(level);
    const Level& coarse = hier.level(level + 1);

    for (int s = 0; s < cfg.nu1; ++s) fine.smoother.smooth(u, prob);

    DefectField r = compute_defect(u, prob, fine.domain);
    extend_defect(r, fine.extension);
    const DefectField rc = restrict_defect(r, fine.domain, fine.support, coarse.domain,
                                             cfg.split_bc_restriction);
    const ProblemData coarse_prob = problem_from_field(rc, coarse.domain);

    GridFunction e(coarse.domain.spec());
    if (level + 2 == hier.size()) {
        e = hier.coarse_solver().solve(coarse_prob, coarse.domain);
    } else {
        for (int g = 0; g < cfg.gamma(); ++g) mg_cycle(e, coarse_prob, hier, level + 1);
    }

    // the coarse error is only defined on coarse unknowns; continue it along
    // normals so fine ghosts beyond the coarse ghost layer interpolate from it
    if (cfg.extend_correction) extend_defect(e, coarse.extension);
    const GridFunction ef = prolongate(e);
    for (std::size_t k : fine.domain.unknowns()) u[k] += ef[k];

    for (int s = 0; s < cfg.nu2; ++s) fine.smoother.smooth(u, prob);
}

GridFunction default_initial_guess(const DiscreteDomain& domain) {
    const GridSpec& spec = domain.spec();
    GridFunction u(spec);
    double peak = 0.0;
    for (std::size_t k : domain.unknowns()) {
        const Point p = spec.coords(spec.node(k));
        u[k] = std::sin(40.0 * std::numbers::pi * p.x) * std::sin(50.0 * std::numbers::pi * p.y);
        peak = std::max(peak, std::abs(u[k]));
    }
    if (peak < 1e-8) {
        std::mt19937_64 rng(20240611u + static_cast<unsigned>(spec.n()));
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        for (std::size_t k : domain.unknowns()) u[k] = dist(rng);
    }
    return u;
}

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

SolveReport measure_convergence(double r0, const std::function<double()>& cycle,
                                const RhoOptions& opts) {
    const auto start = std::chrono::steady_clock::now();
    if (r0 == 0.0) throw InvalidArgument("initial guess has zero defect");
    SolveReport rep;
    rep.residuals.push_back(r0);
    int above_one = 0;
    for (int m = 1; m <= opts.max_iterations; ++m) {
        const double rm = cycle();
        rep.residuals.push_back(rm);
        rep.iterations = m;
        if (!std::isfinite(rm)) {
            rep.diverged = true;
            break;
        }
        if (rm == 0.0) break;
        const double rho = rm / rep.residuals[m - 1];
        rep.rho.push_back(rho);
        above_one = rho >= 1.0 ? above_one + 1 : 0;
        if (above_one >= 5) {
            rep.diverged = true;
            break;
        }
        if (m >= std::max(opts.min_iterations, 2) && rho < 1.0) {
            const double prev = rep.rho[rep.rho.size() - 2];
            if (std::abs(rho - prev) / rho < opts.tolerance) {
                rep.stabilized = true;
                break;
            }
        }
        // keep clear of denormals; the factor measured so far is final
        if (rm < 1e-280) break;
    }

    if (rep.rho.empty()) {
        rep.final_rho = 0.0;
    } else if (rep.stabilized || rep.diverged || rep.iterations < opts.max_iterations) {
        rep.final_rho = rep.rho.back();
    } else {
        // no stabilization (e.g. oscillating ratios): geometric mean of the tail
        const std::size_t tail = std::min<std::size_t>(10, rep.rho.size());
        double log_sum = 0.0;
        for (std::size_t k = rep.rho.size() - tail; k < rep.rho.size(); ++k) {
            log_sum += std::log(std::max(rep.rho[k], 1e-300));
        }
        rep.final_rho = std::exp(log_sum / static_cast<double>(tail));
    }
    rep.converged = !rep.diverged && rep.final_rho < 1.0;
    rep.wall_ms = elapsed_ms(start);
    return rep;
}

SolveReport solve_homogeneous(const Hierarchy& hier, GridFunction u, const RhoOptions& opts) {
    const auto start = std::chrono::steady_clock::now();
    const DiscreteDomain& domain = hier.finest().domain;
    if (!(u.spec() == domain.spec())) throw InvalidArgument("initial guess lives on the wrong grid");
    const ProblemData prob = zero_problem(domain);
    const double r0 = defect_norm(compute_defect(u, prob, domain), domain);
    SolveReport rep = measure_convergence(
        r0,
        [&] {
            mg_cycle(u, prob, hier);
            return defect_norm(compute_defect(u, prob, domain), domain);
        },
        opts);
    rep.wall_ms = elapsed_ms(start);
    return rep;
}

std::pair<GridFunction, SolveReport> solve_general(const Hierarchy& hier, const ProblemData& prob,
                                                   double tol_abs, int max_iterations) {
    const auto start = std::chrono::steady_clock::now();
    const DiscreteDomain& domain = hier.finest().domain;
    double scale = std::max(1.0, max_abs(prob.g));
    for (std::size_t k : domain.unknowns()) {
        if (domain.is_interior(k)) scale = std::max(scale, std::abs(prob.f[k]));
    }
    const double target = tol_abs * scale;

    GridFunction u(domain.spec());
    SolveReport rep;
    rep.residuals.push_back(defect_norm(compute_defect(u, prob, domain), domain));
    while (rep.residuals.back() > target && rep.iterations < max_iterations) {
        mg_cycle(u, prob, hier);
        ++rep.iterations;
        const double rm = defect_norm(compute_defect(u, prob, domain), domain);
        rep.rho.push_back(rm / rep.residuals.back());
        rep.residuals.push_back(rm);
        if (!std::isfinite(rm)) {
            rep.diverged = true;
            break;
        }
    }
    rep.final_rho = rep.rho.empty() ? 0.0 : rep.rho.back();
    rep.converged = !rep.diverged && rep.residuals.back() <= target;
    rep.wall_ms = elapsed_ms(start);
    return {std::move(u), rep};
}

}  // namespace ghostmg
