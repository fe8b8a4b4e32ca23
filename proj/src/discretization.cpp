#include "ghostmg/discretization.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SparseLU>

namespace ghostmg {

namespace {

struct Lagrange1d {
    std::array<double, 3> value{};
    std::array<double, 3> slope{};  // derivative with respect to the local coordinate
};

Lagrange1d quadratic_basis(double t) {
    return {{0.5 * (t - 1.0) * (t - 2.0), -t * (t - 2.0), 0.5 * t * (t - 1.0)},
            {t - 1.5, 2.0 - 2.0 * t, t - 0.5}};
}

Lagrange1d linear_basis(double t) { return {{1.0 - t, t, 0.0}, {-1.0, 1.0, 0.0}}; }

}  // namespace

double SparseRow::weight_of(std::size_t col) const {
    double w = 0.0;
    for (std::size_t k = 0; k < cols.size(); ++k) {
        if (cols[k] == col) w += weights[k];
    }
    return w;
}

InterpolationWeights interpolation_weights(const StencilSpec& stencil, const GridSpec& spec,
                                           const Point& p) {
    const double h = spec.h();
    const Point g = spec.coords(stencil.origin);
    const double tx = stencil.sx * (p.x - g.x) / h;
    const double ty = stencil.sy * (p.y - g.y) / h;
    const double ddx = stencil.sx / h;
    const double ddy = stencil.sy / h;

    InterpolationWeights w;
    w.count = stencil.members.size();
    if (stencil.extent == StencilExtent::Reduced3point) {
        // plane through G (k=0) and two non-collinear members a, b:
        // (tx,ty) = alpha * a + beta * b in stencil steps
        const auto& a = stencil.members[1];
        const auto& b = stencil.members[2];
        const double det = a.k1 * b.k2 - a.k2 * b.k1;
        const double alpha = (tx * b.k2 - ty * b.k1) / det;
        const double beta = (a.k1 * ty - a.k2 * tx) / det;
        const double alpha_x = b.k2 / det, alpha_y = -b.k1 / det;
        const double beta_x = -a.k2 / det, beta_y = a.k1 / det;
        w.value = {1.0 - alpha - beta, alpha, beta};
        w.dx = {-(alpha_x + beta_x) * ddx, alpha_x * ddx, beta_x * ddx};
        w.dy = {-(alpha_y + beta_y) * ddy, alpha_y * ddy, beta_y * ddy};
        return w;
    }
    const bool full = stencil.extent == StencilExtent::Full3x3;
    const Lagrange1d bx = full ? quadratic_basis(tx) : linear_basis(tx);
    const Lagrange1d by = full ? quadratic_basis(ty) : linear_basis(ty);
    for (std::size_t k = 0; k < w.count; ++k) {
        const auto& m = stencil.members[k];
        w.value[k] = bx.value[m.k1] * by.value[m.k2];
        w.dx[k] = bx.slope[m.k1] * by.value[m.k2] * ddx;
        w.dy[k] = bx.value[m.k1] * by.slope[m.k2] * ddy;
    }
    return w;
}

double biquadratic_eval(const GridFunction& u, const StencilSpec& stencil, const Point& p) {
    const auto w = interpolation_weights(stencil, u.spec(), p);
    double s = 0.0;
    for (std::size_t k = 0; k < w.count; ++k) s += w.value[k] * u.at(stencil.members[k].node);
    return s;
}

Point biquadratic_grad(const GridFunction& u, const StencilSpec& stencil, const Point& p) {
    const auto w = interpolation_weights(stencil, u.spec(), p);
    Point g;
    for (std::size_t k = 0; k < w.count; ++k) {
        const double v = u.at(stencil.members[k].node);
        g.x += w.dx[k] * v;
        g.y += w.dy[k] * v;
    }
    return g;
}

namespace {

Point interpolated_normal(const GhostMeta& ghost, const LevelSetField& phi) {
    const Point gp = biquadratic_grad(phi.values, ghost.stencil, ghost.projection);
    const double norm = std::hypot(gp.x, gp.y);
    if (norm < 1e-12) {
        throw NumericalError("degenerate interpolated level-set gradient at ghost " +
                             to_string(ghost.node));
    }
    return {gp.x / norm, gp.y / norm};
}

}  // namespace

double bc_apply(const GridFunction& u, const GhostMeta& ghost, const LevelSetField& phi) {
    if (ghost.bc_kind == BcKind::Dirichlet) {
        return biquadratic_eval(u, ghost.stencil, ghost.projection);
    }
    const Point n = interpolated_normal(ghost, phi);
    const Point gu = biquadratic_grad(u, ghost.stencil, ghost.projection);
    return gu.x * n.x + gu.y * n.y;
}

SparseRow bc_row(const GhostMeta& ghost, const LevelSetField& phi) {
    const GridSpec& spec = phi.spec();
    const auto w = interpolation_weights(ghost.stencil, spec, ghost.projection);
    SparseRow row;
    row.cols.reserve(w.count);
    row.weights.reserve(w.count);
    Point n;
    if (ghost.bc_kind == BcKind::Neumann) n = interpolated_normal(ghost, phi);
    for (std::size_t k = 0; k < w.count; ++k) {
        row.cols.push_back(spec.flat(ghost.stencil.members[k].node));
        row.weights.push_back(ghost.bc_kind == BcKind::Dirichlet ? w.value[k]
                                                                 : w.dx[k] * n.x + w.dy[k] * n.y);
    }
    return row;
}

DiscreteDomain::DiscreteDomain(LevelSetField phi, const BoundarySplit& split)
    : phi_(std::move(phi)), split_(split), mask_(classify_nodes(phi_)) {
    const GridSpec& sp = phi_.spec();
    ghosts_ = build_ghosts(phi_, mask_, split);
    bc_rows_.reserve(ghosts_.size());
    ghost_of_node_.assign(sp.node_count(), -1);
    for (std::size_t k = 0; k < ghosts_.size(); ++k) {
        bc_rows_.push_back(bc_row(ghosts_[k], phi_));
        ghost_of_node_[sp.flat(ghosts_[k].node)] = static_cast<int>(k);
    }
    unknown_of_node_.assign(sp.node_count(), -1);
    for (int j = 0; j <= sp.n(); ++j) {
        for (int i = 0; i <= sp.n(); ++i) {
            const std::size_t k = sp.flat(i, j);
            if (mask_[k] == NodeClass::Exterior) continue;
            unknown_of_node_[k] = static_cast<int>(unknowns_.size());
            unknowns_.push_back(k);
        }
    }
}

ProblemData zero_problem(const DiscreteDomain& domain) {
    return {GridFunction(domain.spec()), std::vector<double>(domain.ghosts().size(), 0.0)};
}

ProblemData make_problem(const DiscreteDomain& domain,
                         const std::function<double(const Point&)>& f,
                         const std::function<double(const GhostMeta&)>& g) {
    ProblemData prob = zero_problem(domain);
    const GridSpec& spec = domain.spec();
    for (std::size_t k : domain.unknowns()) {
        if (domain.is_interior(k)) prob.f[k] = f(spec.coords(spec.node(k)));
    }
    for (std::size_t k = 0; k < domain.ghosts().size(); ++k) prob.g[k] = g(domain.ghosts()[k]);
    return prob;
}

ProblemData problem_from_field(const GridFunction& rhs, const DiscreteDomain& domain) {
    ProblemData prob = zero_problem(domain);
    const GridSpec& spec = domain.spec();
    for (std::size_t k : domain.unknowns()) {
        if (domain.is_interior(k)) prob.f[k] = rhs[k];
    }
    for (std::size_t k = 0; k < domain.ghosts().size(); ++k) {
        prob.g[k] = rhs[spec.flat(domain.ghosts()[k].node)];
    }
    return prob;
}

GridFunction apply_laplacian(const GridFunction& u, const NodeClassMask& mask) {
    const GridSpec& spec = u.spec();
    const double inv_h2 = 1.0 / (spec.h() * spec.h());
    GridFunction out(spec);
    for (int i = 0; i <= spec.n(); ++i) {
        for (int j = 0; j <= spec.n(); ++j) {
            if (mask(i, j) != NodeClass::Interior) continue;
            if (!mask.is_unknown(i + 1, j) || !mask.is_unknown(i - 1, j) ||
                !mask.is_unknown(i, j + 1) || !mask.is_unknown(i, j - 1)) {
                throw NumericalError("Laplacian stencil leaves interior and ghost nodes at " +
                                     to_string(NodeIndex{i, j}));
            }
            out(i, j) = (u(i + 1, j) + u(i - 1, j) + u(i, j + 1) + u(i, j - 1) - 4.0 * u(i, j)) *
                        inv_h2;
        }
    }
    return out;
}

DefectField compute_defect(const GridFunction& u, const ProblemData& prob,
                           const DiscreteDomain& domain) {
    DefectField r = apply_laplacian(u, domain.mask());
    for (std::size_t k : domain.unknowns()) {
        if (domain.is_interior(k)) r[k] += prob.f[k];
    }
    const GridSpec& spec = domain.spec();
    for (std::size_t k = 0; k < domain.ghosts().size(); ++k) {
        const GhostMeta& ghost = domain.ghosts()[k];
        r[spec.flat(ghost.node)] = prob.g[k] - bc_apply(u, ghost, domain.phi());
    }
    return r;
}

double defect_norm(const DefectField& r, const DiscreteDomain& domain) {
    double m = 0.0;
    for (std::size_t k : domain.unknowns()) m = std::max(m, std::abs(r[k]));
    return m;
}

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

SparseRow system_row(std::size_t flat, const DiscreteDomain& domain) {
    const int ghost = domain.ghost_index(flat);
    if (ghost >= 0) return domain.bc_rows()[static_cast<std::size_t>(ghost)];
    if (!domain.is_interior(flat)) {
        throw InvalidArgument("no equation for exterior node " + to_string(domain.spec().node(flat)));
    }
    const GridSpec& spec = domain.spec();
    const double inv_h2 = 1.0 / (spec.h() * spec.h());
    const std::size_t stride = static_cast<std::size_t>(spec.n() + 1);
    SparseRow row;
    row.cols = {flat, flat - stride, flat - 1, flat + 1, flat + stride};
    row.weights = {4.0 * inv_h2, -inv_h2, -inv_h2, -inv_h2, -inv_h2};
    return row;
}

LinearSystem assemble_system(const ProblemData& prob, const DiscreteDomain& domain) {
    const auto& unknowns = domain.unknowns();
    const auto n = static_cast<Eigen::Index>(unknowns.size());
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(unknowns.size() * 6);
    LinearSystem sys;
    sys.rhs.resize(n);
    for (Eigen::Index r = 0; r < n; ++r) {
        const std::size_t flat = unknowns[static_cast<std::size_t>(r)];
        const SparseRow row = system_row(flat, domain);
        for (std::size_t k = 0; k < row.cols.size(); ++k) {
            const int c = domain.unknown_index(row.cols[k]);
            if (c < 0) {
                throw GeometryError("equation at " + to_string(domain.spec().node(flat)) +
                                    " references an exterior node");
            }
            triplets.emplace_back(r, c, row.weights[k]);
        }
        const int ghost = domain.ghost_index(flat);
        sys.rhs[r] = ghost >= 0 ? prob.g[static_cast<std::size_t>(ghost)] : prob.f[flat];
    }
    sys.matrix.resize(n, n);
    sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
    sys.matrix.makeCompressed();
    return sys;
}

struct DirectSolver::Impl {
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
};

DirectSolver::DirectSolver(const DiscreteDomain& domain) : impl_(std::make_unique<Impl>()) {
    const LinearSystem sys = assemble_system(zero_problem(domain), domain);
    // the factorization does not survive empty rows or columns
    const Eigen::Index n = sys.matrix.rows();
    std::vector<char> row_used(static_cast<std::size_t>(n), 0);
    std::vector<char> col_used(static_cast<std::size_t>(n), 0);
    for (Eigen::Index c = 0; c < sys.matrix.outerSize(); ++c) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(sys.matrix, c); it; ++it) {
            if (it.value() == 0.0) continue;
            row_used[static_cast<std::size_t>(it.row())] = 1;
            col_used[static_cast<std::size_t>(it.col())] = 1;
        }
    }
    for (Eigen::Index k = 0; k < n; ++k) {
        if (!row_used[static_cast<std::size_t>(k)] || !col_used[static_cast<std::size_t>(k)]) {
            throw NumericalError("structurally singular system on grid N=" +
                                 std::to_string(domain.spec().n()) + " at node " +
                                 to_string(domain.spec().node(domain.unknowns()[static_cast<std::size_t>(k)])));
        }
    }
    if (n == 0) throw NumericalError("empty system on grid N=" + std::to_string(domain.spec().n()));
    impl_->lu.compute(sys.matrix);
    if (impl_->lu.info() != Eigen::Success) {
        throw NumericalError("sparse LU factorization failed on grid N=" +
                             std::to_string(domain.spec().n()) + ": " + impl_->lu.lastErrorMessage());
    }
}

DirectSolver::~DirectSolver() = default;
DirectSolver::DirectSolver(DirectSolver&&) noexcept = default;
DirectSolver& DirectSolver::operator=(DirectSolver&&) noexcept = default;

GridFunction DirectSolver::solve(const ProblemData& prob, const DiscreteDomain& domain) const {
    const auto& unknowns = domain.unknowns();
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(unknowns.size()));
    for (std::size_t r = 0; r < unknowns.size(); ++r) {
        const std::size_t flat = unknowns[r];
        const int ghost = domain.ghost_index(flat);
        rhs[static_cast<Eigen::Index>(r)] =
            ghost >= 0 ? prob.g[static_cast<std::size_t>(ghost)] : prob.f[flat];
    }
    const Eigen::VectorXd x = impl_->lu.solve(rhs);
    if (impl_->lu.info() != Eigen::Success) throw NumericalError("sparse LU solve failed");
    GridFunction u(domain.spec());
    for (std::size_t r = 0; r < unknowns.size(); ++r) u[unknowns[r]] = x[static_cast<Eigen::Index>(r)];
    return u;
}

}  // namespace ghostmg
