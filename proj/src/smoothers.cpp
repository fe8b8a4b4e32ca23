#include "ghostmg/smoothers.hpp"

#include <algorithm>
#include <cmath>

namespace ghostmg {

const char* to_string(SmootherKind k) {
    switch (k) {
        case SmootherKind::GsLex: return "gslex";
        case SmootherKind::Kaczmarz: return "kaczmarz";
        case SmootherKind::Block: return "block";
    }
    return "unknown";
}

SmootherKind parse_smoother_kind(const std::string& s) {
    if (s == "gslex") return SmootherKind::GsLex;
    if (s == "kaczmarz") return SmootherKind::Kaczmarz;
    if (s == "block") return SmootherKind::Block;
    throw InvalidArgument("unknown smoother '" + s + "' (expected gslex|kaczmarz|block)");
}

void SmootherConfig::validate() const {
    if (!(mu_d_dt > 0.0 && mu_d_dt < 1.0)) {
        throw InvalidArgument("Dirichlet pseudo-time factor must lie in (0,1)");
    }
    if (!(mu_n_fraction > 0.0 && mu_n_fraction < 1.0)) {
        throw InvalidArgument("Neumann pseudo-time factor must lie in (0, 2h/(3 sqrt 2))");
    }
    if (lambda < 0) throw InvalidArgument("lambda must be non-negative");
    if (delta_h < 0.0) throw InvalidArgument("delta must be non-negative");
}

SmootherConfig make_smoother_config(SmootherKind kind, int lambda, double delta_h, double mu_d_dt,
                                    double mu_n_dt, double h) {
    SmootherConfig cfg;
    cfg.kind = kind;
    cfg.lambda = lambda;
    cfg.delta_h = delta_h;
    cfg.mu_d_dt = mu_d_dt;
    cfg.mu_n_fraction = mu_n_dt / neumann_cfl_bound(h);
    cfg.validate();
    return cfg;
}

BoundaryBand build_band(const DiscreteDomain& domain, double delta) {
    BoundaryBand band;
    for (std::size_t k : domain.unknowns()) {
        if (domain.is_ghost(k) || std::abs(domain.phi().values[k]) <= delta) band.nodes.push_back(k);
    }
    return band;
}

std::vector<std::size_t> far_interior_nodes(const DiscreteDomain& domain, double delta) {
    std::vector<std::size_t> out;
    for (std::size_t k : domain.unknowns()) {
        if (domain.is_interior(k) && std::abs(domain.phi().values[k]) > delta) out.push_back(k);
    }
    return out;
}

namespace {

inline void relax_interior(GridFunction& u, std::size_t k, std::size_t stride, double h2,
                           const GridFunction& f) {
    u[k] = 0.25 * (h2 * f[k] + u[k - 1] + u[k + 1] + u[k - stride] + u[k + stride]);
}

}  // namespace

void relax_node(GridFunction& u, std::size_t k, const ProblemData& prob,
                const DiscreteDomain& domain, const SmootherConfig& cfg) {
    const GridSpec& spec = domain.spec();
    const int ghost = domain.ghost_index(k);
    if (ghost < 0) {
        relax_interior(u, k, static_cast<std::size_t>(spec.n() + 1), spec.h() * spec.h(), prob.f);
        return;
    }
    const auto gi = static_cast<std::size_t>(ghost);
    const double mu_dt = domain.ghosts()[gi].bc_kind == BcKind::Dirichlet ? cfg.mu_d_dt
                                                                          : cfg.mu_n_dt(spec.h());
    u[k] += mu_dt * (prob.g[gi] - domain.bc_rows()[gi].apply(u));
}

void gs_lex_sweep(GridFunction& u, const ProblemData& prob, const DiscreteDomain& domain,
                  const SmootherConfig& cfg) {
    for (std::size_t k : domain.unknowns()) relax_node(u, k, prob, domain, cfg);
}

void boundary_extra_sweeps(GridFunction& u, const ProblemData& prob, const DiscreteDomain& domain,
                           const BoundaryBand& band, const SmootherConfig& cfg) {
    for (int pass = 0; pass < cfg.lambda; ++pass) {
        for (std::size_t k : band.nodes) relax_node(u, k, prob, domain, cfg);
    }
}

void kaczmarz_sweep(GridFunction& u, const std::vector<RowEquation>& equations) {
    for (const auto& eq : equations) {
        double norm2 = 0.0;
        for (double w : eq.row.weights) norm2 += w * w;
        if (norm2 == 0.0) throw NumericalError("Kaczmarz projection on a zero row");
        const double step = (eq.rhs - eq.row.apply(u)) / norm2;
        for (std::size_t k = 0; k < eq.row.cols.size(); ++k) u[eq.row.cols[k]] += step * eq.row.weights[k];
    }
}

std::vector<RowEquation> gather_equations(const std::vector<std::size_t>& nodes,
                                          const ProblemData& prob, const DiscreteDomain& domain) {
    std::vector<RowEquation> eqs;
    eqs.reserve(nodes.size());
    for (std::size_t k : nodes) {
        const int ghost = domain.ghost_index(k);
        eqs.push_back({system_row(k, domain),
                       ghost >= 0 ? prob.g[static_cast<std::size_t>(ghost)] : prob.f[k]});
    }
    return eqs;
}

std::vector<std::size_t> block_stencil(std::size_t p, const DiscreteDomain& domain) {
    const GridSpec& spec = domain.spec();
    std::vector<std::size_t> nodes;
    const int ghost = domain.ghost_index(p);
    if (ghost >= 0) {
        for (const auto& m : domain.ghosts()[static_cast<std::size_t>(ghost)].stencil.members) {
            nodes.push_back(spec.flat(m.node));
        }
    } else {
        const NodeIndex c = spec.node(p);
        for (int dj = -1; dj <= 1; ++dj) {
            for (int di = -1; di <= 1; ++di) {
                if (domain.mask().is_unknown(c.i + di, c.j + dj)) nodes.push_back(spec.flat(c.i + di, c.j + dj));
            }
        }
    }
    std::sort(nodes.begin(), nodes.end());
    return nodes;
}

namespace {

// Dense block matrix: entry (a, b) is the weight of block node b in the
// equation of block node a.
Eigen::MatrixXd block_matrix(const std::vector<std::size_t>& block,
                             const std::vector<SparseRow>& rows) {
    const auto n = static_cast<Eigen::Index>(block.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < n; ++c) a(r, c) = rows[static_cast<std::size_t>(r)].weight_of(block[static_cast<std::size_t>(c)]);
    }
    return a;
}

Eigen::MatrixXd checked_inverse(const Eigen::MatrixXd& a, std::size_t p, const GridSpec& spec) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    const auto& s = svd.singularValues();
    const double smin = s[s.size() - 1];
    if (smin == 0.0 || s[0] / smin > 1e12) {
        throw NumericalError("singular relaxation block at node " + to_string(spec.node(p)));
    }
    return a.inverse();
}

void apply_block(GridFunction& u, const std::vector<std::size_t>& block,
                 const std::vector<SparseRow>& rows, const std::vector<double>& rhs,
                 const Eigen::MatrixXd& inverse) {
    const auto n = static_cast<Eigen::Index>(block.size());
    Eigen::VectorXd b(n);
    // rhs minus the contribution of unknowns outside the block
    for (Eigen::Index r = 0; r < n; ++r) {
        const auto& row = rows[static_cast<std::size_t>(r)];
        double s = rhs[static_cast<std::size_t>(r)];
        for (std::size_t k = 0; k < row.cols.size(); ++k) {
            if (!std::binary_search(block.begin(), block.end(), row.cols[k])) s -= row.weights[k] * u[row.cols[k]];
        }
        b[r] = s;
    }
    const Eigen::VectorXd x = inverse * b;
    for (Eigen::Index r = 0; r < n; ++r) u[block[static_cast<std::size_t>(r)]] = x[r];
}

double equation_rhs(std::size_t k, const ProblemData& prob, const DiscreteDomain& domain) {
    const int ghost = domain.ghost_index(k);
    return ghost >= 0 ? prob.g[static_cast<std::size_t>(ghost)] : prob.f[k];
}

}  // namespace

void solve_block(GridFunction& u, const std::vector<std::size_t>& block, const ProblemData& prob,
                 const DiscreteDomain& domain) {
    std::vector<SparseRow> rows;
    std::vector<double> rhs;
    for (std::size_t k : block) {
        rows.push_back(system_row(k, domain));
        rhs.push_back(equation_rhs(k, prob, domain));
    }
    const Eigen::MatrixXd inv = checked_inverse(block_matrix(block, rows), block.front(), domain.spec());
    apply_block(u, block, rows, rhs, inv);
}

void block_sweep(GridFunction& u, const ProblemData& prob, const DiscreteDomain& domain,
                 const SmootherConfig& cfg) {
    const double delta = cfg.delta_h * domain.spec().h();
    for (std::size_t k : far_interior_nodes(domain, delta)) relax_node(u, k, prob, domain, cfg);
    for (std::size_t p : build_band(domain, delta).nodes) solve_block(u, block_stencil(p, domain), prob, domain);
}

LevelSmoother::LevelSmoother(const DiscreteDomain& domain, const SmootherConfig& cfg)
    : domain_(&domain), cfg_(cfg) {
    cfg_.validate();
    const double delta = cfg_.delta_h * domain.spec().h();
    band_ = build_band(domain, delta);
    if (cfg_.kind == SmootherKind::GsLex) return;
    far_interior_ = far_interior_nodes(domain, delta);
    if (cfg_.kind == SmootherKind::Kaczmarz) {
        for (std::size_t k : band_.nodes) {
            band_rows_.push_back(system_row(k, domain));
            double n2 = 0.0;
            for (double w : band_rows_.back().weights) n2 += w * w;
            if (n2 == 0.0) throw NumericalError("zero equation row at " + to_string(domain.spec().node(k)));
            band_row_norm2_.push_back(n2);
        }
        return;
    }
    for (std::size_t p : band_.nodes) {
        Block b;
        b.nodes = block_stencil(p, domain);
        for (std::size_t k : b.nodes) b.rows.push_back(system_row(k, domain));
        b.inverse = checked_inverse(block_matrix(b.nodes, b.rows), p, domain.spec());
        blocks_.push_back(std::move(b));
    }
}

void LevelSmoother::smooth_far_interior(GridFunction& u, const ProblemData& prob) const {
    const GridSpec& spec = domain_->spec();
    const auto stride = static_cast<std::size_t>(spec.n() + 1);
    const double h2 = spec.h() * spec.h();
    for (std::size_t k : far_interior_) relax_interior(u, k, stride, h2, prob.f);
}

void LevelSmoother::smooth_kaczmarz(GridFunction& u, const ProblemData& prob) const {
    smooth_far_interior(u, prob);
    for (int pass = 0; pass < cfg_.lambda; ++pass) {
        for (std::size_t r = 0; r < band_.nodes.size(); ++r) {
            const SparseRow& row = band_rows_[r];
            const double step =
                (equation_rhs(band_.nodes[r], prob, *domain_) - row.apply(u)) / band_row_norm2_[r];
            for (std::size_t k = 0; k < row.cols.size(); ++k) u[row.cols[k]] += step * row.weights[k];
        }
    }
}

void LevelSmoother::smooth_block(GridFunction& u, const ProblemData& prob) const {
    smooth_far_interior(u, prob);
    std::vector<double> rhs;
    for (const Block& b : blocks_) {
        rhs.clear();
        for (std::size_t k : b.nodes) rhs.push_back(equation_rhs(k, prob, *domain_));
        apply_block(u, b.nodes, b.rows, rhs, b.inverse);
    }
}

void LevelSmoother::smooth(GridFunction& u, const ProblemData& prob) const {
    switch (cfg_.kind) {
        case SmootherKind::GsLex:
            gs_lex_sweep(u, prob, *domain_, cfg_);
            boundary_extra_sweeps(u, prob, *domain_, band_, cfg_);
            return;
        case SmootherKind::Kaczmarz: smooth_kaczmarz(u, prob); return;
        case SmootherKind::Block: smooth_block(u, prob); return;
    }
}

std::vector<double> smoothing_factor_series(const DiscreteDomain& domain, const SmootherConfig& cfg,
                                            const ProblemData& prob, GridFunction u0, int m_max) {
    const LevelSmoother smoother(domain, cfg);
    std::vector<double> series;
    double previous = defect_norm(compute_defect(u0, prob, domain), domain);
    for (int m = 1; m <= m_max && previous > 0.0; ++m) {
        smoother.smooth(u0, prob);
        const double current = defect_norm(compute_defect(u0, prob, domain), domain);
        series.push_back(current / previous);
        previous = current;
    }
    return series;
}

}  // namespace ghostmg
